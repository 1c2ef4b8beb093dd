#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sdc/protocol.hpp"
#include "sdc/states.hpp"

using namespace sdc;

namespace {

using Ops = std::vector<ComplexMatrix>;

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

// Single-qubit Kraus lists written out by hand.
Ops depol_ops(double l) {
  const Complex i(0, 1);
  return {std::sqrt(1 - 3 * l / 4) * mat2(1, 0, 0, 1), std::sqrt(l / 4) * mat2(0, 1, 1, 0),
          std::sqrt(l / 4) * mat2(0, -i, i, 0), std::sqrt(l / 4) * mat2(1, 0, 0, -1)};
}

Ops ampdamp_ops(double g) { return {mat2(1, 0, 0, std::sqrt(1 - g)), mat2(0, std::sqrt(g), 0, 0)}; }

// Two-qubit operators on (B1,B2), lifted with I on A.
Ops lift(const Ops& o1, const Ops& o2) {
  Ops out;
  for (const auto& a : o1)
    for (const auto& b : o2) out.push_back(kron(ComplexMatrix::Identity(2, 2), kron(a, b)));
  return out;
}

ComplexVector ghz_vec() {
  ComplexVector v = ComplexVector::Zero(8);
  v(0) = v(7) = 1 / std::sqrt(2.0);
  return v;
}

// sum_l (-1)^{l(j^s)} |l, i^l, k^l> / sqrt2 built from indices.
ComplexVector g_vec(int s, int i, int j, int k) {
  ComplexVector v = ComplexVector::Zero(8);
  for (int l = 0; l < 2; ++l) v((l << 2) | ((i ^ l) << 1) | (k ^ l)) = ((l & (j ^ s)) ? -1.0 : 1.0) / std::sqrt(2.0);
  return v;
}

ComplexMatrix u_enc(int x, int y) {
  const ComplexMatrix sx = mat2(0, 1, 1, 0), sz = mat2(1, 0, 0, -1);
  ComplexMatrix u = ComplexMatrix::Identity(2, 2);
  if (y) u = sz * u;
  if (x) u = sx * u;
  return u;
}

// Key-run probability summed over pure-state Kraus trajectories.
double trajectory_keygen(const Ops& fwd, const Ops& bwd, int i, int j, int k, int x, int y, int z, int s) {
  const ComplexMatrix u = kron(ComplexMatrix::Identity(2, 2), kron(u_enc(x, y), u_enc(z, s)));
  const ComplexVector g = g_vec(s, i, j, k), psi = ghz_vec();
  double p = 0.0;
  for (const auto& kf : fwd)
    for (const auto& kb : bwd) p += std::norm(g.dot(kb * u * kf * psi));
  return p / 16.0;
}

void check_against_trajectories(const NoiseScenario& sc, const Ops& fwd, const Ops& bwd) {
  const auto d = keygen_distribution(sc);
  double worst = 0.0;
  for (std::size_t cell = 0; cell < d.size(); ++cell) {
    int b[7];
    for (int v = 0; v < 7; ++v) b[v] = d.bit(cell, v);
    worst = std::max(worst, std::abs(d[cell] - trajectory_keygen(fwd, bwd, b[0], b[1], b[2], b[3], b[4], b[5], b[6])));
  }
  CHECK(worst <= 1e-12);
}

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("keygen distribution matches a pure-state trajectory oracle") {
  check_against_trajectories(identity_scenario(), lift({mat2(1, 0, 0, 1)}, {mat2(1, 0, 0, 1)}),
                             lift({mat2(1, 0, 0, 1)}, {mat2(1, 0, 0, 1)}));
  check_against_trajectories(depol_indep(0.3, 0.7), lift(depol_ops(0.3), depol_ops(0.7)),
                             lift(depol_ops(0.3), depol_ops(0.7)));
  check_against_trajectories(ampdamp_indep(0.2, 0.9), lift(ampdamp_ops(0.2), ampdamp_ops(0.9)),
                             lift(ampdamp_ops(0.2), ampdamp_ops(0.9)));
  check_against_trajectories(depol_backward_only(0.4, 0.1), lift({mat2(1, 0, 0, 1)}, {mat2(1, 0, 0, 1)}),
                             lift(depol_ops(0.4), depol_ops(0.1)));
}

TEST_CASE("closed forms are normalized") {
  for (double l : {0.0, 0.25, 0.5, 1.0})
    for (double d : {0.0, 0.3, 1.0}) {
      double sp = 0.0, sq = 0.0;
      for (int a = 0; a < 8; ++a) sp += closed_form_P(l, d, a >> 2, (a >> 1) & 1, a & 1);
      for (int a = 0; a < 4; ++a) sq += closed_form_Q(l, a >> 1, a & 1);
      CHECK(sp == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(sq == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(closed_form_qtilde(d, 0) + closed_form_qtilde(d, 1) == doctest::Approx(1.0));
    }
}

TEST_CASE("full depolarization gives uniform closed forms") {
  for (int a = 0; a < 8; ++a) CHECK(closed_form_P(1, 1, a >> 2, (a >> 1) & 1, a & 1) == doctest::Approx(0.125));
  for (int a = 0; a < 4; ++a) CHECK(closed_form_Q(1, a >> 1, a & 1) == doctest::Approx(0.25));
  CHECK(closed_form_qtilde(1, 0) == doctest::Approx(0.5));
}

TEST_CASE("conditional tables match the closed forms for independent depolarizing noise") {
  for (double l : {0.0, 0.1, 0.45, 1.0})
    for (double d : {0.0, 0.6, 1.0}) {
      const auto sc = depol_indep(l, d);
      const auto key = keygen_distribution(sc);
      const auto t1 = test_b1_distribution(sc);
      const auto t2 = test_b2_distribution(sc);
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          for (int z = 0; z < 2; ++z)
            for (int s = 0; s < 2; ++s) {
              const auto kc = key.condition({"x", "y", "z", "s"}, {x, y, z, s});
              const auto c1 = t1.condition({"x", "y", "z", "s"}, {x, y, z, s});
              const auto c2 = t2.condition({"x", "y", "z", "s"}, {x, y, z, s});
              REQUIRE(kc);
              REQUIRE(c1);
              REQUIRE(c2);
              for (int a = 0; a < 8; ++a) {
                const int i = a >> 2, j = (a >> 1) & 1, k = a & 1;
                CHECK(kc->dist.at({i, j, k}) ==
                      doctest::Approx(closed_form_P(l, d, i ^ x, j ^ y, k ^ z)).epsilon(1e-12));
              }
              for (int a = 0; a < 4; ++a) {
                const int i = a >> 1, j = a & 1;
                CHECK(c1->dist.at({i, j}) == doctest::Approx(closed_form_Q(l, i ^ x, j ^ y)).epsilon(1e-12));
              }
              for (int k = 0; k < 2; ++k)
                CHECK(c2->dist.at({k}) == doctest::Approx(closed_form_qtilde(d, k ^ z)).epsilon(1e-12));
            }
    }
}

TEST_CASE("announced labels are uniform in every run type") {
  for (const auto& sc : {identity_scenario(), depol_corr(0.3, 0.8), ampdamp_indep(0.6, 0.2)}) {
    const auto key = keygen_distribution(sc).marginal({"x", "y", "z", "s"});
    for (std::size_t c = 0; c < key.size(); ++c) CHECK(std::abs(key[c] - 1.0 / 16) <= 1e-12);
    const auto t1 = test_b1_distribution(sc).marginal({"y", "z", "s"});
    for (std::size_t c = 0; c < t1.size(); ++c) CHECK(std::abs(t1[c] - 1.0 / 8) <= 1e-12);
    const auto t2 = test_b2_distribution(sc).marginal({"x", "y", "s"});
    for (std::size_t c = 0; c < t2.size(); ++c) CHECK(std::abs(t2[c] - 1.0 / 8) <= 1e-12);
  }
}

TEST_CASE("noiseless tables are deterministic") {
  const auto sc = identity_scenario();
  const auto key = keygen_distribution(sc);
  for (std::size_t c = 0; c < key.size(); ++c) {
    const bool match = key.bit(c, 0) == key.bit(c, 3) && key.bit(c, 1) == key.bit(c, 4) && key.bit(c, 2) == key.bit(c, 5);
    CHECK(std::abs(key[c] - (match ? 1.0 / 16 : 0.0)) <= 1e-12);
  }
  const auto t1 = test_b1_distribution(sc);
  for (std::size_t c = 0; c < t1.size(); ++c) {
    const bool match = t1.bit(c, 0) == t1.bit(c, 2) && t1.bit(c, 1) == t1.bit(c, 3);
    CHECK(std::abs(t1[c] - (match ? 1.0 / 16 : 0.0)) <= 1e-12);
  }
  const auto t2 = test_b2_distribution(sc);
  for (std::size_t c = 0; c < t2.size(); ++c) {
    const bool match = t2.bit(c, 0) == t2.bit(c, 3);
    CHECK(std::abs(t2[c] - (match ? 1.0 / 16 : 0.0)) <= 1e-12);
  }
}

TEST_CASE("s = 1 conditionals are the s = 0 ones with j flipped when noiseless") {
  const auto key = keygen_distribution(identity_scenario());
  for (int a = 0; a < 8; ++a) {
    const int x = a >> 2, y = (a >> 1) & 1, z = a & 1;
    const auto c0 = key.condition({"x", "y", "z", "s"}, {x, y, z, 0});
    const auto c1 = key.condition({"x", "y", "z", "s"}, {x, y ^ 1, z, 1});
    REQUIRE(c0);
    REQUIRE(c1);
    for (int b = 0; b < 8; ++b) {
      const int i = b >> 2, j = (b >> 1) & 1, k = b & 1;
      CHECK(std::abs(c1->dist.at({i, j ^ 1, k}) - c0->dist.at({i, j, k})) <= 1e-12);
    }
  }
}

TEST_CASE("Bob2 test with full backward damping") {
  // gamma2 = 1 resets the returning qubit to |0>, so Alice's x outcome is a coin flip.
  const auto t2 = test_b2_distribution(ampdamp_indep(0.0, 1.0));
  const auto kz = t2.marginal({"k", "z"});
  for (std::size_t c = 0; c < kz.size(); ++c) CHECK(std::abs(kz[c] - 0.25) <= 1e-12);
}

TEST_CASE("test_both reduces to each single test") {
  const auto sc = depol_indep(0.2, 0.5);
  const auto both = test_both_distribution(sc);
  const auto t1 = test_b1_distribution(sc);
  const auto t2 = test_b2_distribution(sc);
  const auto b_ij = both.marginal({"i", "j", "x", "y"});
  const auto t_ij = t1.marginal({"i", "j", "x", "y"});
  for (std::size_t c = 0; c < b_ij.size(); ++c) CHECK(std::abs(b_ij[c] - t_ij[c]) <= 1e-12);
  const auto b_k = both.marginal({"k", "z"});
  const auto t_k = t2.marginal({"k", "z"});
  for (std::size_t c = 0; c < b_k.size(); ++c) CHECK(std::abs(b_k[c] - t_k[c]) <= 1e-12);
}

TEST_CASE("run_distribution dispatch") {
  const auto sc = depol_corr(0.4, 0.1);
  CHECK(run_distribution({RunType::Key, RunType::Key, sc}).variables().size() == 7);
  CHECK(run_distribution({RunType::Test, RunType::Key, sc}).variables().size() == 6);
  CHECK(run_distribution({RunType::Key, RunType::Test, sc}).variables().size() == 5);
  CHECK(run_distribution({RunType::Test, RunType::Test, sc}).has("k"));
}

TEST_CASE("labeled distribution contract") {
  CHECK_THROWS(LabeledDistribution({"a"}, {0.5, 0.6}));
  CHECK_THROWS(LabeledDistribution({"a"}, {1.0}));
  CHECK_THROWS(LabeledDistribution({"a", "a"}, {0.25, 0.25, 0.25, 0.25}));
  CHECK_THROWS(LabeledDistribution({"a"}, {1.1, -0.1}));
  CHECK_NOTHROW(LabeledDistribution({"a"}, {1.0 + 1e-13, -1e-13}));

  const LabeledDistribution d({"a", "b"}, {0.1, 0.2, 0.3, 0.4});
  CHECK(d.at({1, 0}) == doctest::Approx(0.3));
  CHECK(d.marginal({"b"}).at({1}) == doctest::Approx(0.6));
  const auto m = d.marginal({"b", "a"});
  CHECK(m.at({0, 1}) == doctest::Approx(0.3));
  const auto c = d.condition({"a"}, {1});
  REQUIRE(c);
  CHECK(c->weight == doctest::Approx(0.7));
  CHECK(c->dist.at({1}) == doctest::Approx(0.4 / 0.7));
  CHECK_FALSE(LabeledDistribution({"a"}, {1.0, 0.0}).condition({"a"}, {1}));
  CHECK_THROWS(d.index_of("z"));
  CHECK_THROWS(d.condition({"a", "a"}, {0, 0}));
}

}  // TEST_SUITE
