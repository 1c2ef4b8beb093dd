#include "sdc/postprocess.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "sdc/rng.hpp"

namespace sdc {

namespace {

constexpr std::uint64_t kHashStream = 0x68617368ULL;
constexpr double kLikelihoodSmoothing = 0.5;
constexpr std::size_t kMaxBlockBits = 20;

Slot slot_of(const std::string& name) {
  static constexpr std::array<const char*, kSlotCount> names{"i", "j", "k", "x", "y", "z", "s"};
  for (std::size_t s = 0; s < kSlotCount; ++s)
    if (name == names[s]) return static_cast<Slot>(s);
  throw std::logic_error("unknown outcome variable " + name);
}

struct Sampler {
  std::vector<Slot> slots;
  std::vector<double> cdf;
  int width;

  explicit Sampler(const LabeledDistribution& d) : width(static_cast<int>(d.variables().size())) {
    for (const auto& v : d.variables()) slots.push_back(slot_of(v));
    double acc = 0.0;
    for (double p : d.probabilities()) cdf.push_back(acc += p);
  }

  void draw(double u, RunRecord& rec) const {
    const double target = u * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    // upper_bound never lands on a zero-probability cell.
    std::size_t cell = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
    for (std::size_t v = 0; v < slots.size(); ++v)
      rec.bits[slots[v]] = static_cast<std::int8_t>((cell >> (width - 1 - v)) & 1u);
  }
};

int pair_index(RunType b1, RunType b2) { return (b1 == RunType::Test ? 2 : 0) + (b2 == RunType::Test ? 1 : 0); }

LabeledDistribution empirical(const KeySession& session, RunType b1, RunType b2,
                              const std::vector<std::string>& vars, const char* what) {
  std::vector<Slot> slots;
  for (const auto& v : vars) slots.push_back(slot_of(v));
  std::vector<double> counts(std::size_t{1} << vars.size(), 0.0);
  std::size_t total = 0;
  for (const auto& rec : session.runs) {
    if (rec.bob1 != b1 || rec.bob2 != b2) continue;
    std::size_t cell = 0;
    for (Slot s : slots) cell = (cell << 1) | static_cast<std::size_t>(rec.bits[s]);
    counts[cell] += 1.0;
    ++total;
  }
  if (total == 0) throw std::invalid_argument(std::string("session has no ") + what + " runs");
  for (double& c : counts) c /= static_cast<double>(total);
  return LabeledDistribution(vars, std::move(counts));
}

std::uint32_t pack(const BitString& bits) {
  std::uint32_t v = 0;
  for (std::size_t t = 0; t < bits.size(); ++t) v |= static_cast<std::uint32_t>(bits[t] & 1u) << t;
  return v;
}

// Alice's key string for one Bob with, per run, the context Bob decodes with.
struct PairData {
  int width;  // Alice bits per run
  int contexts;
  BitString alice;
  std::vector<int> context;
  std::vector<std::vector<double>> loglik;  // [context][alice value]
};

PairData pair_data(const KeySession& session, int bob) {
  PairData d;
  d.width = bob == 1 ? 2 : 1;
  d.contexts = bob == 1 ? 8 : 4;
  std::vector<std::vector<double>> counts(d.contexts, std::vector<double>(1u << d.width, kLikelihoodSmoothing));
  for (const auto& rec : session.runs) {
    if (rec.bob1 != RunType::Key || rec.bob2 != RunType::Key) continue;
    const int s = rec.bits[kS];
    int ctx, value;
    if (bob == 1) {
      ctx = (rec.bits[kX] << 2) | (rec.bits[kY] << 1) | s;
      value = (rec.bits[kI] << 1) | rec.bits[kJ];
      d.alice.push_back(static_cast<std::uint8_t>(rec.bits[kI]));
      d.alice.push_back(static_cast<std::uint8_t>(rec.bits[kJ]));
    } else {
      ctx = (rec.bits[kZ] << 1) | s;
      value = rec.bits[kK];
      d.alice.push_back(static_cast<std::uint8_t>(rec.bits[kK]));
    }
    d.context.push_back(ctx);
    counts[ctx][value] += 1.0;
  }
  d.loglik.resize(d.contexts);
  for (int c = 0; c < d.contexts; ++c) {
    double total = 0.0;
    for (double n : counts[c]) total += n;
    for (double n : counts[c]) d.loglik[c].push_back(std::log(n / total));
  }
  return d;
}

// Exhaustive maximum-likelihood search over all strings of the block,
// visited in Gray-code order so hash and likelihood update per flip.
BitString decode_block(const PairData& d, std::size_t first_run, std::size_t runs,
                       const std::vector<std::uint32_t>& columns, std::uint32_t syndrome) {
  const std::size_t len = runs * d.width;
  std::vector<int> value(runs, 0);
  double ll = 0.0;
  for (std::size_t r = 0; r < runs; ++r) ll += d.loglik[d.context[first_run + r]][0];
  std::uint32_t hash = 0;
  std::uint32_t cand = 0;

  bool found = hash == syndrome;
  double best_ll = found ? ll : -std::numeric_limits<double>::infinity();
  std::uint32_t best = 0;

  const std::uint32_t count = std::uint32_t{1} << len;
  for (std::uint32_t g = 1; g < count; ++g) {
    const int t = std::countr_zero(g);
    cand ^= std::uint32_t{1} << t;
    hash ^= columns[t];
    const std::size_t r = t / d.width;
    const int shift = d.width - 1 - static_cast<int>(t % d.width);
    const int old_value = value[r];
    value[r] ^= 1 << shift;
    const auto& table = d.loglik[d.context[first_run + r]];
    ll += table[value[r]] - table[old_value];
    if (hash == syndrome && (!found || ll > best_ll + 1e-9)) {
      found = true;
      best_ll = ll;
      best = cand;
    }
  }
  if (!found) throw std::runtime_error("reconciliation: no candidate matches the published hash");
  BitString out(len);
  for (std::size_t t = 0; t < len; ++t) out[t] = (best >> t) & 1u;
  return out;
}

PairReconciliation reconcile_pair(const KeySession& session, int bob, double h_per_run,
                                  const ReconcileOptions& opt, std::uint64_t seed) {
  const PairData d = pair_data(session, bob);
  const std::size_t runs_per_block = opt.block_bits / d.width;
  if (runs_per_block == 0) throw std::invalid_argument("block too short for one run");

  PairReconciliation out;
  out.alice = d.alice;
  const std::size_t total_runs = d.context.size();
  for (std::size_t first = 0; first < total_runs; first += runs_per_block) {
    const std::size_t runs = std::min(runs_per_block, total_runs - first);
    const std::size_t len = runs * d.width;
    const auto need = static_cast<std::size_t>(std::ceil(static_cast<double>(runs) * std::max(h_per_run, 0.0) - 1e-9));
    const std::size_t hash_len = std::min(len, need + opt.margin_bits);

    // A capped hash uses the identity matrix, the injective member of the
    // square Toeplitz family; a random square one is often singular.
    const ToeplitzHash h(len, hash_len, mix64(seed + out.blocks));
    const bool full = hash_len == len;
    std::vector<std::uint32_t> columns(len);
    for (std::size_t t = 0; t < len; ++t) {
      BitString unit(len, 0);
      unit[t] = 1;
      columns[t] = pack(full ? unit : h.apply(unit));
    }
    const BitString alice_block(d.alice.begin() + first * d.width, d.alice.begin() + first * d.width + len);
    const BitString decoded =
        decode_block(d, first, runs, columns, pack(full ? alice_block : h.apply(alice_block)));
    if (decoded != alice_block) ++out.failed_blocks;
    out.bob.insert(out.bob.end(), decoded.begin(), decoded.end());
    out.leak_bits += hash_len;
    ++out.blocks;
  }
  return out;
}

// floor(runs * rate), less the hash bits published beyond the runs * h_key
// the rate already charges for reconciliation.
std::size_t final_length(std::size_t key_runs, double rate, double h_key, std::size_t leak, std::size_t available) {
  const double runs = static_cast<double>(key_runs);
  const double excess = std::max(0.0, static_cast<double>(leak) - runs * h_key);
  const double len = std::floor(runs * rate - excess);
  if (!(len > 0.0)) return 0;
  return std::min(available, static_cast<std::size_t>(len));
}

}  // namespace

ToeplitzHash::ToeplitzHash(std::size_t in_len, std::size_t out_len, std::uint64_t seed)
    : in_len_(in_len), out_len_(out_len), seed_(seed) {
  if (out_len > in_len) throw std::invalid_argument("Toeplitz hash output longer than input");
  const std::size_t bits = in_len + out_len;
  CounterRng rng(seed, kHashStream);
  diagonal_.resize(bits / 64 + 2);
  for (auto& w : diagonal_) w = rng.next();
}

BitString ToeplitzHash::apply(const BitString& bits) const {
  if (bits.size() != in_len_) throw std::invalid_argument("Toeplitz hash input length mismatch");
  BitString out(out_len_, 0);
  if (out_len_ == 0) return out;
  // Reversed input so that row r reads the diagonal window t[r .. r + in_len).
  std::vector<std::uint64_t> packed(in_len_ / 64 + 1, 0);
  for (std::size_t c = 0; c < in_len_; ++c)
    if (bits[in_len_ - 1 - c] & 1u) packed[c >> 6] |= std::uint64_t{1} << (c & 63);
  for (std::size_t r = 0; r < out_len_; ++r) {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < packed.size(); ++w) {
      const std::size_t pos = r + 64 * w;
      const std::size_t idx = pos >> 6, sh = pos & 63;
      std::uint64_t window = diagonal_[idx] >> sh;
      if (sh != 0 && idx + 1 < diagonal_.size()) window |= diagonal_[idx + 1] << (64 - sh);
      acc ^= window & packed[w];
    }
    out[r] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
  }
  return out;
}

BitString toeplitz_apply(const ToeplitzHash& h, const BitString& bits) { return h.apply(bits); }

KeySession sample_runs(const NoiseScenario& scenario, std::size_t n, double p_test, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("session needs at least one run");
  if (!(p_test > 0.0 && p_test < 1.0)) throw std::invalid_argument("p_test must lie in (0,1)");

  const std::array<Sampler, 4> samplers{
      Sampler(keygen_distribution(scenario)), Sampler(test_b2_distribution(scenario)),
      Sampler(test_b1_distribution(scenario)), Sampler(test_both_distribution(scenario))};

  KeySession session{scenario.descriptor, n, p_test, seed, {}};
  session.runs.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    CounterRng rng(seed, r);
    RunRecord& rec = session.runs[r];
    rec.bob1 = rng.uniform() < p_test ? RunType::Test : RunType::Key;
    rec.bob2 = rng.uniform() < p_test ? RunType::Test : RunType::Key;
    samplers[pair_index(rec.bob1, rec.bob2)].draw(rng.uniform(), rec);
  }
  return session;
}

void export_session(const KeySession& session, std::ostream& out) {
  for (std::size_t r = 0; r < session.runs.size(); ++r) {
    const auto& rec = session.runs[r];
    out << r << ' ' << (rec.bob1 == RunType::Key ? 'K' : 'T') << ' ' << (rec.bob2 == RunType::Key ? 'K' : 'T');
    for (auto b : rec.bits) out << ' ' << (b < 0 ? '-' : static_cast<char>('0' + b));
    out << '\n';
  }
}

RunCounts count_runs(const KeySession& session) {
  RunCounts c;
  for (const auto& rec : session.runs) {
    switch (pair_index(rec.bob1, rec.bob2)) {
      case 0: ++c.key; break;
      case 1: ++c.test_b2; break;
      case 2: ++c.test_b1; break;
      default: ++c.test_both; break;
    }
  }
  return c;
}

LabeledDistribution empirical_keygen(const KeySession& session) {
  return empirical(session, RunType::Key, RunType::Key, {"i", "j", "k", "x", "y", "z", "s"}, "key");
}

LabeledDistribution empirical_test_b1(const KeySession& session) {
  return empirical(session, RunType::Test, RunType::Key, {"i", "j", "x", "y", "z", "s"}, "Bob1 test");
}

LabeledDistribution empirical_test_b2(const KeySession& session) {
  return empirical(session, RunType::Key, RunType::Test, {"k", "x", "y", "z", "s"}, "Bob2 test");
}

Estimate estimate_and_decide(const KeySession& session) {
  Estimate e;
  e.counts = count_runs(session);
  e.terms = entropy_terms(empirical_keygen(session), empirical_test_b1(session), empirical_test_b2(session));
  e.r1_est = rate_p1(e.terms);
  e.r2_est = rate_p2(e.terms);
  e.abort = e.r1_est < 0.0 || e.r2_est < 0.0;
  return e;
}

Reconciliation reconcile(const KeySession& session, const Estimate& estimate, const ReconcileOptions& options) {
  if (estimate.abort) throw std::logic_error("cannot reconcile an aborted session");
  if (options.block_bits == 0 || options.block_bits > kMaxBlockBits)
    throw std::invalid_argument("block length must lie in [1, 20] bits");
  return {reconcile_pair(session, 1, estimate.terms.h_key_b1, options, mix64(options.seed ^ 0xb1)),
          reconcile_pair(session, 2, estimate.terms.h_key_b2, options, mix64(options.seed ^ 0xb2))};
}

BitString privacy_amplify(const BitString& key, std::size_t target_len, std::uint64_t seed) {
  if (target_len > key.size()) throw std::invalid_argument("privacy amplification target exceeds key length");
  return ToeplitzHash(key.size(), target_len, seed).apply(key);
}

double empirical_bit_mutual_information(const BitString& a, const BitString& b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) return 0.0;
  std::vector<double> joint(4, 0.0);
  for (std::size_t t = 0; t < n; ++t) joint[((a[t] & 1u) << 1) | (b[t] & 1u)] += 1.0 / static_cast<double>(n);
  const LabeledDistribution d({"a", "b"}, std::move(joint));
  return mutual_information(d, {"a"}, {"b"});
}

FiniteKeyReport run_finite_key(const NoiseScenario& scenario, const FiniteKeyOptions& options) {
  const KeySession session = sample_runs(scenario, options.n, options.p_test, options.seed);
  FiniteKeyReport report;
  report.estimate = estimate_and_decide(session);
  if (report.estimate.abort) return report;

  report.reconciled = true;
  report.reconciliation = reconcile(session, report.estimate, options.reconcile);
  const auto& rec = report.reconciliation;
  const std::size_t runs = report.estimate.counts.key;
  const auto& e = report.estimate;
  const std::size_t len1 = final_length(runs, e.r1_est, e.terms.h_key_b1, rec.b1.leak_bits, rec.b1.alice.size());
  const std::size_t len2 = final_length(runs, e.r2_est, e.terms.h_key_b2, rec.b2.leak_bits, rec.b2.alice.size());
  const std::uint64_t pa1 = mix64(options.reconcile.seed ^ 0xa1), pa2 = mix64(options.reconcile.seed ^ 0xa2);
  report.final_alice_b1 = privacy_amplify(rec.b1.alice, len1, pa1);
  report.final_bob1 = privacy_amplify(rec.b1.bob, len1, pa1);
  report.final_alice_b2 = privacy_amplify(rec.b2.alice, len2, pa2);
  report.final_bob2 = privacy_amplify(rec.b2.bob, len2, pa2);
  return report;
}

}  // namespace sdc
