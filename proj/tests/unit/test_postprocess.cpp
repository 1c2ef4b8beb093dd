#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sdc/postprocess.hpp"
#include "sdc/rng.hpp"

using namespace sdc;

namespace {

BitString random_bits(std::size_t len, CounterRng& rng) {
  BitString out(len);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng.bit());
  return out;
}

BitString xor_bits(const BitString& a, const BitString& b) {
  BitString out(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) out[t] = a[t] ^ b[t];
  return out;
}

}  // namespace

TEST_SUITE("postprocess") {

TEST_CASE("counter rng is deterministic and stream separated") {
  CounterRng a(5, 0), b(5, 0), c(5, 1);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  double sum = 0.0;
  CounterRng u(9, 3);
  for (int t = 0; t < 100000; ++t) {
    const double v = u.uniform();
    CHECK_FALSE((v < 0.0 || v >= 1.0));
    sum += v;
  }
  CHECK(std::abs(sum / 100000 - 0.5) <= 3 * std::sqrt(1.0 / 12 / 100000));
}

TEST_CASE("Toeplitz hash structure") {
  const ToeplitzHash h(40, 0, 1);
  CHECK(h.apply(BitString(40, 1)).empty());
  CHECK_THROWS(ToeplitzHash(8, 9, 1));
  CHECK_THROWS(ToeplitzHash(8, 4, 1).apply(BitString(7, 0)));

  // Column c of the matrix is the image of e_c; each column is the previous shifted down by one.
  const ToeplitzHash t(20, 8, 77);
  std::vector<BitString> cols;
  for (std::size_t c = 0; c < 20; ++c) {
    BitString e(20, 0);
    e[c] = 1;
    cols.push_back(t.apply(e));
  }
  for (std::size_t c = 1; c < 20; ++c)
    for (std::size_t r = 1; r < 8; ++r) CHECK(cols[c][r] == cols[c - 1][r - 1]);
}

TEST_CASE("Toeplitz hash is linear over GF(2)") {
  CounterRng rng(2, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const ToeplitzHash h(97, 31, rng.next());
    const BitString a = random_bits(97, rng), b = random_bits(97, rng);
    CHECK(h.apply(xor_bits(a, b)) == xor_bits(h.apply(a), h.apply(b)));
    CHECK(toeplitz_apply(h, a) == h.apply(a));
  }
}

TEST_CASE("Toeplitz family collision rate is two-universal") {
  constexpr int trials = 200000;
  constexpr double p = 1.0 / 65536;
  CounterRng rng(3, 0);
  int collisions = 0;
  for (int t = 0; t < trials; ++t) {
    const BitString a = random_bits(64, rng);
    BitString b = random_bits(64, rng);
    if (a == b) b[0] ^= 1;
    const ToeplitzHash h(64, 16, rng.next());
    if (h.apply(a) == h.apply(b)) ++collisions;
  }
  const double bound = p + 3 * std::sqrt(p * (1 - p) / trials);
  CHECK(static_cast<double>(collisions) / trials <= bound);
}

TEST_CASE("sampling contract") {
  const auto sc = identity_scenario();
  CHECK_THROWS(sample_runs(sc, 0, 0.5, 1));
  CHECK_THROWS(sample_runs(sc, 10, 0.0, 1));
  CHECK_THROWS(sample_runs(sc, 10, 1.0, 1));

  const std::size_t n = 20000;
  const double pt = 0.3;
  const KeySession s = sample_runs(sc, n, pt, 42);
  CHECK(s.runs.size() == n);
  std::size_t t1 = 0, t2 = 0;
  for (const auto& r : s.runs) {
    t1 += r.bob1 == RunType::Test;
    t2 += r.bob2 == RunType::Test;
    if (r.bob1 == RunType::Key && r.bob2 == RunType::Key) {
      CHECK(r.bits[kI] == r.bits[kX]);
      CHECK(r.bits[kJ] == r.bits[kY]);
      CHECK(r.bits[kK] == r.bits[kZ]);
    }
  }
  const double sigma = std::sqrt(pt * (1 - pt) / n);
  CHECK(std::abs(static_cast<double>(t1) / n - pt) <= 3 * sigma);
  CHECK(std::abs(static_cast<double>(t2) / n - pt) <= 3 * sigma);

  const auto c = count_runs(s);
  CHECK(c.key + c.test_b1 + c.test_b2 + c.test_both == n);
}

TEST_CASE("sessions are deterministic in the seed") {
  const auto sc = depol_indep(0.2, 0.3);
  std::ostringstream a, b, c;
  export_session(sample_runs(sc, 500, 0.4, 9), a);
  export_session(sample_runs(sc, 500, 0.4, 9), b);
  export_session(sample_runs(sc, 500, 0.4, 10), c);
  CHECK(a.str() == b.str());
  CHECK(a.str() != c.str());
  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.size() == std::string("0 K K 0 0 0 0 0 0 0").size());
}

TEST_CASE("empirical tables cover only their own run types") {
  const KeySession s = sample_runs(depol_indep(0.3, 0.3), 4000, 0.5, 3);
  const auto c = count_runs(s);
  const auto k = empirical_keygen(s);
  double mass = 0.0;
  for (double p : k.probabilities()) mass += p;
  CHECK(mass == doctest::Approx(1.0));
  CHECK(k.variables().size() == 7);
  CHECK(empirical_test_b1(s).variables().size() == 6);
  CHECK(empirical_test_b2(s).variables().size() == 5);
  CHECK(c.key > 0);
}

TEST_CASE("estimate needs every run kind") {
  KeySession s;
  s.n = 4;
  RunRecord key;
  key.bits = {0, 0, 0, 0, 0, 0, 0};
  s.runs.assign(4, key);
  CHECK_THROWS_AS(estimate_and_decide(s), std::invalid_argument);
}

TEST_CASE("estimates on the noiseless channel and on heavy noise") {
  const Estimate id = estimate_and_decide(sample_runs(identity_scenario(), 10000, 0.3, 1));
  CHECK(std::abs(id.r1_est - 2.0) <= 0.05);
  CHECK(std::abs(id.r2_est - 1.0) <= 0.05);
  CHECK_FALSE(id.abort);

  const Estimate heavy = estimate_and_decide(sample_runs(depol_indep(0.8, 0.8), 10000, 0.3, 1));
  CHECK(heavy.abort);
  CHECK_THROWS_AS(reconcile(sample_runs(depol_indep(0.8, 0.8), 10000, 0.3, 1), heavy, {}), std::logic_error);
}

TEST_CASE("noiseless reconciliation needs only the margin") {
  const KeySession s = sample_runs(identity_scenario(), 3000, 0.2, 5);
  const Estimate e = estimate_and_decide(s);
  const Reconciliation r = reconcile(s, e, {10, 12, 5});
  CHECK(r.b1.alice == r.b1.bob);
  CHECK(r.b2.alice == r.b2.bob);
  CHECK(r.b1.failed_blocks == 0);
  CHECK(r.b2.failed_blocks == 0);

  ReconcileOptions zero{0, 12, 5};
  const Reconciliation z = reconcile(s, e, zero);
  CHECK(z.b1.leak_bits == 0);
  CHECK(z.b2.leak_bits == 0);
  CHECK(z.b1.alice == z.b1.bob);

  CHECK_THROWS(reconcile(s, e, {10, 21, 5}));
  CHECK_THROWS(reconcile(s, e, {10, 1, 5}));
}

TEST_CASE("block failure rate under light depolarizing noise") {
  const KeySession s = sample_runs(depol_indep(0.1, 0.1), 14000, 0.05, 8);
  // The exact rates are negative here, so the session would abort; reconcile anyway.
  Estimate e = estimate_and_decide(s);
  e.abort = false;
  const Reconciliation r = reconcile(s, e, {10, 12, 8});
  const std::size_t blocks = r.b1.blocks + r.b2.blocks;
  const std::size_t failed = r.b1.failed_blocks + r.b2.failed_blocks;
  CHECK(r.b1.blocks >= 1000);
  CHECK(r.b2.blocks >= 1000);
  CHECK(static_cast<double>(failed) / blocks <= 1e-3);
  const double runs = static_cast<double>(e.counts.key);
  CHECK(static_cast<double>(r.b1.leak_bits) >= runs * e.terms.h_key_b1);
  CHECK(static_cast<double>(r.b2.leak_bits) >= runs * e.terms.h_key_b2);
}

TEST_CASE("privacy amplification") {
  const BitString key(50, 1);
  CHECK(privacy_amplify(key, 0, 3).empty());
  CHECK(privacy_amplify(key, 20, 3) == privacy_amplify(key, 20, 3));
  CHECK_THROWS(privacy_amplify(key, 51, 3));

  constexpr int sessions = 10000;
  constexpr std::size_t out = 16;
  std::vector<int> ones(out, 0);
  for (int t = 0; t < sessions; ++t) {
    CounterRng rng(0xbeef, t);
    const BitString raw = random_bits(64, rng);
    const BitString f = privacy_amplify(raw, out, rng.next());
    for (std::size_t b = 0; b < out; ++b) ones[b] += f[b];
  }
  for (std::size_t b = 0; b < out; ++b) CHECK(std::abs(static_cast<double>(ones[b]) / sessions - 0.5) <= 0.02);
}

TEST_CASE("bit mutual information") {
  const BitString a{0, 1, 0, 1, 1, 0, 1, 0}, b{1, 1, 0, 0, 1, 1, 0, 0};
  CHECK(empirical_bit_mutual_information(a, a) == doctest::Approx(1.0));
  CHECK(empirical_bit_mutual_information(a, b) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(empirical_bit_mutual_information({}, a) == 0.0);
}

TEST_CASE("noiseless finite-key pipeline") {
  FiniteKeyOptions opt;
  opt.n = 10000;
  opt.p_test = 0.3;
  opt.seed = 4;
  opt.reconcile.seed = 4;
  const FiniteKeyReport r = run_finite_key(identity_scenario(), opt);
  REQUIRE(r.reconciled);
  CHECK_FALSE(r.final_alice_b1.empty());
  CHECK_FALSE(r.final_alice_b2.empty());
  CHECK(r.final_alice_b1 == r.final_bob1);
  CHECK(r.final_alice_b2 == r.final_bob2);
  CHECK(empirical_bit_mutual_information(r.final_alice_b1, r.final_alice_b2) <= 0.01);

  const FiniteKeyReport again = run_finite_key(identity_scenario(), opt);
  CHECK(again.final_alice_b1 == r.final_alice_b1);

  const FiniteKeyReport aborted = run_finite_key(depol_indep(0.9, 0.9), opt);
  CHECK(aborted.estimate.abort);
  CHECK_FALSE(aborted.reconciled);
  CHECK(aborted.final_alice_b1.empty());
}

}  // TEST_SUITE
