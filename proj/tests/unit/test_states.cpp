#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sdc/states.hpp"

using namespace sdc;
using sdc::testing::max_abs;

namespace {
const double r2 = 1.0 / std::sqrt(2.0);

double vec_diff(const ComplexVector& a, const ComplexVector& b) { return (a - b).cwiseAbs().maxCoeff(); }
}  // namespace

TEST_SUITE("states") {

TEST_CASE("GHZ amplitudes") {
  const auto g = ghz3();
  CHECK(std::abs(g[0] - r2) <= 1e-15);
  CHECK(std::abs(g[7] - r2) <= 1e-15);
  CHECK(std::abs(g[3]) == 0.0);
}

TEST_CASE("Bell states") {
  ComplexVector phi(4), psi_minus(4);
  phi << r2, 0, 0, r2;
  psi_minus << 0, r2, -r2, 0;
  CHECK(vec_diff(bell(0, 0).amplitudes(), phi) <= 1e-15);
  CHECK(vec_diff(bell(1, 1).amplitudes(), psi_minus) <= 1e-15);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Complex ip = bell(a >> 1, a & 1).amplitudes().dot(bell(b >> 1, b & 1).amplitudes());
      CHECK(std::abs(ip - Complex(a == b)) <= 1e-15);
    }
}

TEST_CASE("G basis examples") {
  CHECK(vec_diff(g_state(0, 0, 0, 0).amplitudes(), ghz3().amplitudes()) == 0.0);
  ComplexVector minus = ComplexVector::Zero(8);
  minus(0) = r2;
  minus(7) = -r2;
  CHECK(vec_diff(g_state(0, 0, 1, 0).amplitudes(), minus) <= 1e-15);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        CHECK(vec_diff(g_state(1, x, y, z).amplitudes(), g_state(0, x, y ^ 1, z).amplitudes()) == 0.0);
}

TEST_CASE("G basis is orthonormal and complete for each s") {
  for (int s = 0; s < 2; ++s) {
    ComplexMatrix sum = ComplexMatrix::Zero(8, 8);
    for (int a = 0; a < 8; ++a) {
      const auto ga = g_state(s, a >> 2, (a >> 1) & 1, a & 1);
      sum += ga.projector();
      for (int b = 0; b < 8; ++b) {
        const auto gb = g_state(s, b >> 2, (b >> 1) & 1, b & 1);
        CHECK(std::abs(ga.amplitudes().dot(gb.amplitudes()) - Complex(a == b)) <= 1e-12);
      }
    }
    CHECK(max_abs(sum - ComplexMatrix::Identity(8, 8)) <= 1e-12);
  }
}

TEST_CASE("encoding unitaries") {
  CHECK(max_abs(encoding_unitary(0, 0) - pauli::identity()) == 0.0);
  ComplexMatrix u11(2, 2);
  u11 << 0.0, -1.0, 1.0, 0.0;
  CHECK(max_abs(encoding_unitary(1, 1) - u11) == 0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Complex tr = (encoding_unitary(a >> 1, a & 1) * encoding_unitary(b >> 1, b & 1).adjoint()).trace();
      CHECK(std::abs(tr - Complex(a == b ? 2.0 : 0.0)) <= 1e-12);
    }
}

TEST_CASE("encoding the GHZ state yields G^s(x,y,z)") {
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        for (int s = 0; s < 2; ++s) {
          const ComplexVector enc =
              tensor(pauli::identity(), encoding_unitary(x, y), encoding_unitary(z, s)) * ghz3().amplitudes();
          CHECK(std::abs(std::norm(g_state(s, x, y, z).amplitudes().dot(enc)) - 1.0) <= 1e-12);
          // Same state under the swapped labeling of the second and fourth arguments.
          CHECK(std::abs(std::norm(g_state(y, x, s, z).amplitudes().dot(enc)) - 1.0) <= 1e-12);
        }
}

TEST_CASE("x basis vectors") {
  ComplexVector plus(2);
  plus << r2, r2;
  CHECK(vec_diff(xbasis_vec(0).amplitudes(), plus) <= 1e-15);
  CHECK(vec_diff(pauli::x() * xbasis_vec(1).amplitudes(), -xbasis_vec(1).amplitudes()) <= 1e-15);
  CHECK(std::abs(xbasis_vec(0).amplitudes().dot(xbasis_vec(1).amplitudes())) <= 1e-15);
}

TEST_CASE("bit arguments are validated") {
  CHECK_THROWS(ket(2));
  CHECK_THROWS(xbasis_vec(-1));
  CHECK_THROWS(g_state(0, 0, 3, 0));
  CHECK_THROWS(BitLabel({0, 1, 0, 1}));
}

TEST_CASE("Alice key families") {
  const auto r1 = alice_key_family(0, 1);
  CHECK(r1.size() == 8);
  for (const auto& p : r1.projectors()) CHECK(p.projector.trace().real() == doctest::Approx(1.0));

  const auto r2f = alice_key_family(0, 2);
  CHECK(r2f.size() == 4);
  for (const auto& p : r2f.projectors()) CHECK(p.projector.trace().real() == doctest::Approx(2.0));

  const auto r4 = alice_key_family(1, 4);
  CHECK(r4.size() == 2);
  ComplexMatrix sum = ComplexMatrix::Zero(8, 8);
  for (const auto& p : r4.projectors()) sum += p.projector;
  CHECK(max_abs(sum - ComplexMatrix::Identity(8, 8)) <= 1e-12);

  CHECK_THROWS(alice_key_family(0, 3));
}

TEST_CASE("Alice test families") {
  const auto t1 = alice_test_family_b1();
  CHECK(t1.size() == 4);
  for (const auto& p : t1.projectors()) CHECK(p.projector.trace().real() == doctest::Approx(2.0));
  const ComplexVector v = tensor(ket(0).amplitudes(), xbasis_vec(0).amplitudes(), ket(0).amplitudes());
  CHECK(vec_diff(t1.projector({0, 0}) * v, v) <= 1e-15);

  for (int s = 0; s < 2; ++s) {
    const auto t2 = alice_test_family_b2(s);
    CHECK(t2.size() == 2);
    for (const auto& p : t2.projectors()) CHECK(p.projector.trace().real() == doctest::Approx(4.0));
  }
  std::mt19937_64 gen(1);
  const ComplexVector psi = testing::random_matrix(4, 1, gen).normalized();
  const ComplexVector w = tensor(psi, xbasis_vec(0).amplitudes());
  CHECK(vec_diff(alice_test_family_b2(0).projector({0}) * w, w) <= 1e-14);
}

TEST_CASE("measurement family validation") {
  CHECK_THROWS_AS(MeasurementFamily("bad", {{{0}, ket(0).projector()}}), LinalgError);
  CHECK_THROWS_AS(MeasurementFamily("dup", {{{0}, ket(0).projector()}, {{0}, ket(1).projector()}}),
                  LinalgError);
  CHECK_THROWS_AS(MeasurementFamily("overlap", {{{0}, ket(0).projector()}, {{1}, xbasis_vec(0).projector()}}),
                  LinalgError);
  CHECK_THROWS_AS(MeasurementFamily("notproj", {{{0}, 0.5 * pauli::identity()}, {{1}, 0.5 * pauli::identity()}}),
                  LinalgError);
}

TEST_CASE("Bob purified families") {
  const auto f = bob_purified_families();
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) CHECK(max_abs(f.bob1_key.projector({x, y}) - bell(x, y).projector()) == 0.0);
  for (int s = 0; s < 2; ++s) {
    ComplexMatrix key = ComplexMatrix::Zero(4, 4), test = ComplexMatrix::Zero(4, 4);
    for (int z = 0; z < 2; ++z) {
      key += f.bob2_key.projector({z, s});
      test += f.bob2_test.projector({z, s});
    }
    CHECK(max_abs(key - test) <= 1e-12);
  }
  for (const auto* fam : {&f.bob1_key, &f.bob2_key, &f.bob1_test, &f.bob2_test}) {
    ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
    for (const auto& p : fam->projectors()) sum += p.projector;
    CHECK(max_abs(sum - ComplexMatrix::Identity(4, 4)) <= 1e-12);
  }
}

}  // TEST_SUITE
