#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace sdc {

using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = Matrix<Complex>;
using ComplexVector = Vector<Complex>;

// Numerical tolerances shared by every module.
namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double trace = 1e-9;
inline constexpr double eigen_floor = -1e-9;
inline constexpr double pure_norm = 1e-12;
inline constexpr double kraus = 1e-12;
inline constexpr double jacobi_offdiag = 1e-13;
inline constexpr int jacobi_max_sweeps = 100;
}  // namespace tol

// Thrown when an operator violates a structural contract (dimension,
// hermiticity, positivity, normalization).
class LinalgError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Kronecker product, a's index most significant.
template <typename DerivedA, typename DerivedB>
auto tensor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          Scalar(a(i, j)) * b.template cast<Scalar>();
    }
  }
  return out;
}

template <typename DerivedA, typename DerivedB, typename... Rest>
auto tensor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
            const Rest&... rest) {
  return tensor(tensor(a, b), rest...);
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Unit-norm state vector.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes);

  Eigen::Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_(i); }
  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  ComplexVector amplitudes_;
};

// Hermitian, unit-trace, positive semidefinite operator.
class DensityOp {
 public:
  explicit DensityOp(ComplexMatrix m);
  explicit DensityOp(const PureState& psi) : DensityOp(psi.projector()) {}

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

  static DensityOp maximally_mixed(Eigen::Index dim);

 private:
  ComplexMatrix m_;
};

// Eigenvalues of a Hermitian matrix, descending. Cyclic complex Jacobi.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

struct HermitianEigen {
  Vector<double> values;  // descending
  ComplexMatrix vectors;  // columns match values
};
HermitianEigen hermitian_eigen(const ComplexMatrix& m);

// Principal square root of a positive semidefinite matrix.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

// Largest eigenvalue of a positive semidefinite matrix.
double operator_inf_norm(const ComplexMatrix& m);

double trace_distance(const DensityOp& a, const DensityOp& b);
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduced operator on the `keep` subsystems, in their original relative order.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims,
                            std::span<const int> keep);
DensityOp partial_trace(const DensityOp& rho, std::span<const int> dims,
                        std::span<const int> keep);

// Reorders tensor factors: output factor t is input factor perm[t].
ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const int> dims,
                                 std::span<const int> perm);

// Lifts `op` (acting on `targets`, in that order) to the full space.
ComplexMatrix embed(const ComplexMatrix& op, std::span<const int> dims,
                    std::span<const int> targets);

// Completeness-checked operator-sum representation of a CPTP map.
class KrausSet {
 public:
  explicit KrausSet(std::vector<ComplexMatrix> operators);

  Eigen::Index dim() const { return dim_; }
  const std::vector<ComplexMatrix>& operators() const { return operators_; }

  static KrausSet identity(Eigen::Index dim);

 private:
  Eigen::Index dim_ = 0;
  std::vector<ComplexMatrix> operators_;
};

// max |sum_k K^dag K - I| entrywise; infinity on inconsistent dimensions.
double completeness_defect(std::span<const ComplexMatrix> operators);

// Sum_k K rho K^dag.
ComplexMatrix apply_kraus(const KrausSet& channel, const ComplexMatrix& rho);
DensityOp apply_kraus(const KrausSet& channel, const DensityOp& rho);

// Applies `channel` to the `targets` subsystems of `rho` only.
ComplexMatrix apply_kraus(const KrausSet& channel, const ComplexMatrix& rho,
                          std::span<const int> dims, std::span<const int> targets);

}  // namespace sdc
