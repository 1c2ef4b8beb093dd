#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "sdc/linalg.hpp"

namespace sdc {

// Wire order for three-qubit operators: A (Alice), then the Bob1 wire, then
// the Bob2 wire. The first wire is the most significant index bit.
inline constexpr std::array<int, 3> kThreeQubits{2, 2, 2};
inline constexpr std::array<int, 2> kTwoQubits{2, 2};

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

// Ordered tuple of 1-3 bits.
class BitLabel {
 public:
  BitLabel(std::initializer_list<int> bits);

  std::size_t size() const { return size_; }
  int operator[](std::size_t i) const { return bits_[i]; }
  bool operator==(const BitLabel& other) const;
  std::string str() const;

 private:
  std::array<std::uint8_t, 3> bits_{};
  std::size_t size_ = 0;
};

struct LabeledProjector {
  BitLabel label;
  ComplexMatrix projector;
};

// Complete set of orthogonal projectors with unique labels.
class MeasurementFamily {
 public:
  MeasurementFamily(std::string name, std::vector<LabeledProjector> projectors);

  const std::string& name() const { return name_; }
  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return projectors_.size(); }
  const std::vector<LabeledProjector>& projectors() const { return projectors_; }
  const ComplexMatrix& projector(const BitLabel& label) const;

 private:
  std::string name_;
  std::vector<LabeledProjector> projectors_;
  Eigen::Index dim_ = 0;
};

PureState ket(int bit);
// (|0> + (-1)^a |1>)/sqrt(2)
PureState xbasis_vec(int a);

PureState ghz3();
// (1/sqrt2) sum_l (-1)^{l y} |l, x^l>
PureState bell(int x, int y);
// (1/sqrt2) sum_l (-1)^{l (j^s)} |l, i^l, k^l>
PureState g_state(int s, int i, int j, int k);

// U^00 = I, U^01 = sigma_z, U^10 = sigma_x, U^11 = -i sigma_y
ComplexMatrix encoding_unitary(int x, int y);

// Alice's decoding measurement for announced bit s. Rank 1 gives the full
// basis labeled (i,j,k); rank 2 the Bob1 key family labeled (i,j); rank 4 the
// Bob2 key family labeled (k).
MeasurementFamily alice_key_family(int s, int rank);

// |i><i|_A (x) |j_x><j_x|_{A1} (x) I_{A2}, labeled (i,j).
MeasurementFamily alice_test_family_b1();

// I (x) I (x) |(k^s)_x><(k^s)_x|, labeled (k).
MeasurementFamily alice_test_family_b2(int s);

// Two-qubit measurements on (travelling qubit, ancilla).
struct BobPurifiedFamilies {
  MeasurementFamily bob1_key;   // Bell projectors, labels (x,y)
  MeasurementFamily bob2_key;   // Bell projectors, labels (z,s)
  MeasurementFamily bob1_test;  // |x, y_x>, labels (x,y)
  MeasurementFamily bob2_test;  // |z_x, (z^s)_x>, labels (z,s)
};
BobPurifiedFamilies bob_purified_families();

}  // namespace sdc
