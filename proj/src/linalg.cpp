#include "sdc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sdc {

namespace {

std::vector<Eigen::Index> index_map(std::span<const int> dims, std::span<const int> perm) {
  const auto n = dims.size();
  Eigen::Index total = 1;
  for (int d : dims) total *= d;

  // strides of the input factors, first factor most significant
  std::vector<Eigen::Index> in_stride(n);
  Eigen::Index s = 1;
  for (std::size_t f = n; f-- > 0;) {
    in_stride[f] = s;
    s *= dims[f];
  }

  std::vector<Eigen::Index> map(static_cast<std::size_t>(total));
  std::vector<int> digit(n, 0);
  for (Eigen::Index out = 0; out < total; ++out) {
    Eigen::Index in = 0;
    for (std::size_t t = 0; t < n; ++t) in += digit[t] * in_stride[perm[t]];
    map[static_cast<std::size_t>(out)] = in;
    for (std::size_t t = n; t-- > 0;) {
      if (++digit[t] < dims[perm[t]]) break;
      digit[t] = 0;
    }
  }
  return map;
}

void check_subsystems(std::span<const int> dims, Eigen::Index matrix_dim) {
  Eigen::Index total = 1;
  for (int d : dims) {
    if (d < 1) throw LinalgError("subsystem dimension must be positive");
    total *= d;
  }
  if (total != matrix_dim)
    throw LinalgError("subsystem dimensions do not multiply to the operator dimension");
}

ComplexMatrix symmetrized(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw LinalgError("matrix is not square");
  const double defect = hermiticity_defect(m);
  if (!(defect <= tol::hermitian))
    throw LinalgError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  return (m + m.adjoint()) / 2.0;
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      if (r != c) sum += std::norm(a(r, c));
  return std::sqrt(sum);
}

}  // namespace

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw LinalgError("empty state vector");
  if (!amplitudes_.allFinite()) throw LinalgError("state vector has non-finite amplitudes");
  if (std::abs(amplitudes_.norm() - 1.0) > tol::pure_norm)
    throw LinalgError("state vector is not normalized");
}

DensityOp::DensityOp(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) throw LinalgError("density operator must be square");
  if (!m_.allFinite()) throw LinalgError("density operator has non-finite entries");
  m_ = symmetrized(m_);
  if (std::abs(m_.trace().real() - 1.0) > tol::trace)
    throw LinalgError("density operator trace is not 1");
  const auto eig = hermitian_eigenvalues(m_);
  if (eig.back() < tol::eigen_floor) throw LinalgError("density operator is not positive");
}

DensityOp DensityOp::maximally_mixed(Eigen::Index dim) {
  return DensityOp(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  ComplexMatrix a = symmetrized(m);
  const Eigen::Index n = a.rows();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  int sweep = 0;
  while (off_diagonal_norm(a) > tol::jacobi_offdiag) {
    if (++sweep > tol::jacobi_max_sweeps) throw std::runtime_error("Jacobi eigensolver did not converge");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;

        // Phase-rotate to a real symmetric 2x2 block, then a real Jacobi rotation.
        const Complex phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // J restricted to (p,q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * std::conj(phase);
        const Complex jqq = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return a(l, l).real() > a(r, r).real(); });

  HermitianEigen out{Vector<double>(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  const auto eig = hermitian_eigen(m);
  return {eig.values.data(), eig.values.data() + eig.values.size()};
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const auto eig = hermitian_eigen(m);
  if (eig.values.size() > 0 && eig.values.minCoeff() < tol::eigen_floor)
    throw LinalgError("square root of a matrix with a negative eigenvalue");
  const Vector<double> roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

double operator_inf_norm(const ComplexMatrix& m) {
  const auto eig = hermitian_eigenvalues(m);
  if (eig.back() < tol::eigen_floor) throw LinalgError("operator is not positive semidefinite");
  return eig.front();
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw LinalgError("dimension mismatch");
  double sum = 0.0;
  for (double e : hermitian_eigenvalues(a - b)) sum += std::abs(e);
  return sum / 2.0;
}

double trace_distance(const DensityOp& a, const DensityOp& b) {
  return trace_distance(a.matrix(), b.matrix());
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const int> dims,
                                 std::span<const int> perm) {
  check_subsystems(dims, m.rows());
  if (perm.size() != dims.size()) throw LinalgError("permutation length mismatch");
  std::vector<int> seen(dims.size(), 0);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= dims.size() || seen[p]++)
      throw LinalgError("invalid subsystem permutation");
  }
  const auto map = index_map(dims, perm);
  const auto n = static_cast<Eigen::Index>(map.size());
  ComplexMatrix out(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) out(r, c) = m(map[r], map[c]);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims,
                            std::span<const int> keep) {
  check_subsystems(dims, m.rows());
  if (keep.empty()) throw LinalgError("partial trace must keep at least one subsystem");
  std::vector<int> perm;
  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) {
    if (k < 0 || static_cast<std::size_t>(k) >= dims.size())
      throw LinalgError("subsystem index out of range");
    if (kept[k]) throw LinalgError("duplicate subsystem index");
    kept[k] = true;
  }
  Eigen::Index kept_dim = 1;
  for (std::size_t f = 0; f < dims.size(); ++f)
    if (kept[f]) {
      perm.push_back(static_cast<int>(f));
      kept_dim *= dims[f];
    }
  for (std::size_t f = 0; f < dims.size(); ++f)
    if (!kept[f]) perm.push_back(static_cast<int>(f));

  const ComplexMatrix p = permute_subsystems(m, dims, perm);
  const Eigen::Index traced_dim = m.rows() / kept_dim;
  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (Eigen::Index t = 0; t < traced_dim; ++t)
    out += p(Eigen::seqN(t, kept_dim, traced_dim), Eigen::seqN(t, kept_dim, traced_dim));
  return out;
}

DensityOp partial_trace(const DensityOp& rho, std::span<const int> dims, std::span<const int> keep) {
  return DensityOp(partial_trace(rho.matrix(), dims, keep));
}

ComplexMatrix embed(const ComplexMatrix& op, std::span<const int> dims,
                    std::span<const int> targets) {
  std::vector<int> order(targets.begin(), targets.end());
  std::vector<bool> used(dims.size(), false);
  Eigen::Index target_dim = 1;
  for (int t : targets) {
    if (t < 0 || static_cast<std::size_t>(t) >= dims.size() || used[t])
      throw LinalgError("invalid target subsystem");
    used[t] = true;
    target_dim *= dims[t];
  }
  if (op.rows() != target_dim || op.cols() != target_dim)
    throw LinalgError("operator dimension does not match target subsystems");
  Eigen::Index rest_dim = 1;
  for (std::size_t f = 0; f < dims.size(); ++f)
    if (!used[f]) {
      order.push_back(static_cast<int>(f));
      rest_dim *= dims[f];
    }

  const ComplexMatrix lifted = tensor(op, ComplexMatrix::Identity(rest_dim, rest_dim));
  std::vector<int> ordered_dims;
  for (int f : order) ordered_dims.push_back(dims[f]);
  std::vector<int> back(dims.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) back[order[pos]] = static_cast<int>(pos);
  return permute_subsystems(lifted, ordered_dims, back);
}

double completeness_defect(std::span<const ComplexMatrix> operators) {
  if (operators.empty()) return std::numeric_limits<double>::infinity();
  const Eigen::Index d = operators.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& k : operators) {
    if (k.rows() != d || k.cols() != d || !k.allFinite())
      return std::numeric_limits<double>::infinity();
    sum += k.adjoint() * k;
  }
  return (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

KrausSet::KrausSet(std::vector<ComplexMatrix> operators) : operators_(std::move(operators)) {
  const double defect = completeness_defect(operators_);
  if (!(defect <= tol::kraus))
    throw LinalgError("Kraus operators fail the completeness check (defect " +
                      std::to_string(defect) + ")");
  dim_ = operators_.front().rows();
}

KrausSet KrausSet::identity(Eigen::Index dim) {
  return KrausSet({ComplexMatrix::Identity(dim, dim)});
}

ComplexMatrix apply_kraus(const KrausSet& channel, const ComplexMatrix& rho) {
  if (rho.rows() != channel.dim() || rho.cols() != channel.dim())
    throw LinalgError("channel dimension does not match the operator");
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : channel.operators()) out.noalias() += k * rho * k.adjoint();
  return out;
}

DensityOp apply_kraus(const KrausSet& channel, const DensityOp& rho) {
  return DensityOp(apply_kraus(channel, rho.matrix()));
}

ComplexMatrix apply_kraus(const KrausSet& channel, const ComplexMatrix& rho,
                          std::span<const int> dims, std::span<const int> targets) {
  check_subsystems(dims, rho.rows());
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : channel.operators()) {
    const ComplexMatrix lifted = embed(k, dims, targets);
    out.noalias() += lifted * rho * lifted.adjoint();
  }
  return out;
}

}  // namespace sdc
