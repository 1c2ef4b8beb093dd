#include "sdc/states.hpp"

#include <cmath>
#include <stdexcept>

namespace sdc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_bit(int b) {
  if (b != 0 && b != 1) throw std::invalid_argument("bit value must be 0 or 1");
}

double sign(int exponent) { return (exponent & 1) ? -1.0 : 1.0; }

}  // namespace

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

BitLabel::BitLabel(std::initializer_list<int> bits) {
  if (bits.size() < 1 || bits.size() > 3) throw std::invalid_argument("label must have 1-3 bits");
  for (int b : bits) {
    check_bit(b);
    bits_[size_++] = static_cast<std::uint8_t>(b);
  }
}

bool BitLabel::operator==(const BitLabel& other) const {
  if (size_ != other.size_) return false;
  for (std::size_t i = 0; i < size_; ++i)
    if (bits_[i] != other.bits_[i]) return false;
  return true;
}

std::string BitLabel::str() const {
  std::string out;
  for (std::size_t i = 0; i < size_; ++i) out.push_back(bits_[i] ? '1' : '0');
  return out;
}

MeasurementFamily::MeasurementFamily(std::string name, std::vector<LabeledProjector> projectors)
    : name_(std::move(name)), projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw LinalgError("measurement family is empty");
  dim_ = projectors_.front().projector.rows();
  ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
  for (std::size_t a = 0; a < projectors_.size(); ++a) {
    const auto& p = projectors_[a].projector;
    if (p.rows() != dim_ || p.cols() != dim_) throw LinalgError(name_ + ": projector dimension mismatch");
    if (hermiticity_defect(p) > tol::kraus) throw LinalgError(name_ + ": projector not Hermitian");
    if ((p * p - p).cwiseAbs().maxCoeff() > tol::kraus)
      throw LinalgError(name_ + ": projector not idempotent");
    for (std::size_t b = 0; b < a; ++b) {
      if (projectors_[b].label == projectors_[a].label) throw LinalgError(name_ + ": duplicate label");
      if ((projectors_[b].projector * p).cwiseAbs().maxCoeff() > tol::kraus)
        throw LinalgError(name_ + ": projectors not orthogonal");
    }
    sum += p;
  }
  if ((sum - ComplexMatrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > tol::kraus)
    throw LinalgError(name_ + ": projectors are not complete");
}

const ComplexMatrix& MeasurementFamily::projector(const BitLabel& label) const {
  for (const auto& p : projectors_)
    if (p.label == label) return p.projector;
  throw std::out_of_range(name_ + ": no projector labeled " + label.str());
}

PureState ket(int bit) {
  check_bit(bit);
  ComplexVector v = ComplexVector::Zero(2);
  v(bit) = 1.0;
  return PureState(v);
}

PureState xbasis_vec(int a) {
  check_bit(a);
  ComplexVector v(2);
  v << kInvSqrt2, sign(a) * kInvSqrt2;
  return PureState(v);
}

PureState ghz3() { return g_state(0, 0, 0, 0); }

PureState bell(int x, int y) {
  check_bit(x);
  check_bit(y);
  ComplexVector v = ComplexVector::Zero(4);
  for (int l = 0; l < 2; ++l) v(2 * l + (x ^ l)) += sign(l * y) * kInvSqrt2;
  return PureState(v);
}

PureState g_state(int s, int i, int j, int k) {
  for (int b : {s, i, j, k}) check_bit(b);
  ComplexVector v = ComplexVector::Zero(8);
  for (int l = 0; l < 2; ++l) v(4 * l + 2 * (i ^ l) + (k ^ l)) += sign(l * (j ^ s)) * kInvSqrt2;
  return PureState(v);
}

ComplexMatrix encoding_unitary(int x, int y) {
  check_bit(x);
  check_bit(y);
  if (x == 0 && y == 0) return pauli::identity();
  if (x == 0) return pauli::z();
  if (y == 0) return pauli::x();
  return Complex(0, -1) * pauli::y();
}

MeasurementFamily alice_key_family(int s, int rank) {
  check_bit(s);
  std::vector<LabeledProjector> out;
  switch (rank) {
    case 1:
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) out.push_back({{i, j, k}, g_state(s, i, j, k).projector()});
      break;
    case 2:
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          out.push_back({{i, j}, g_state(s, i, j, 0).projector() + g_state(s, i, j, 1).projector()});
      break;
    case 4:
      for (int k = 0; k < 2; ++k) {
        ComplexMatrix p = ComplexMatrix::Zero(8, 8);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) p += g_state(s, i, j, k).projector();
        out.push_back({{k}, p});
      }
      break;
    default:
      throw std::invalid_argument("key family rank must be 1, 2 or 4");
  }
  return MeasurementFamily("alice_key_rank" + std::to_string(rank) + "_s" + std::to_string(s),
                           std::move(out));
}

MeasurementFamily alice_test_family_b1() {
  std::vector<LabeledProjector> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.push_back({{i, j}, tensor(ket(i).projector(), xbasis_vec(j).projector(), pauli::identity())});
  return MeasurementFamily("alice_test_b1", std::move(out));
}

MeasurementFamily alice_test_family_b2(int s) {
  check_bit(s);
  std::vector<LabeledProjector> out;
  for (int k = 0; k < 2; ++k)
    out.push_back({{k}, tensor(pauli::identity(), pauli::identity(), xbasis_vec(k ^ s).projector())});
  return MeasurementFamily("alice_test_b2_s" + std::to_string(s), std::move(out));
}

BobPurifiedFamilies bob_purified_families() {
  std::vector<LabeledProjector> key1, key2, test1, test2;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const ComplexMatrix bell_proj = bell(a, b).projector();
      key1.push_back({{a, b}, bell_proj});
      key2.push_back({{a, b}, bell_proj});
      test1.push_back({{a, b}, tensor(ket(a).projector(), xbasis_vec(b).projector())});
      test2.push_back({{a, b}, tensor(xbasis_vec(a).projector(), xbasis_vec(a ^ b).projector())});
    }
  }
  return {MeasurementFamily("bob1_key", std::move(key1)), MeasurementFamily("bob2_key", std::move(key2)),
          MeasurementFamily("bob1_test", std::move(test1)),
          MeasurementFamily("bob2_test", std::move(test2))};
}

}  // namespace sdc
