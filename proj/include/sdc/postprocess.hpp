#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sdc/channels.hpp"
#include "sdc/protocol.hpp"
#include "sdc/rates.hpp"

namespace sdc {

using BitString = std::vector<std::uint8_t>;

// Toeplitz matrix over GF(2) with entries T[r][c] = t[r + in_len - 1 - c];
// the in_len + out_len - 1 diagonal bits t come from `seed`.
class ToeplitzHash {
 public:
  ToeplitzHash(std::size_t in_len, std::size_t out_len, std::uint64_t seed);

  std::size_t in_len() const { return in_len_; }
  std::size_t out_len() const { return out_len_; }
  std::uint64_t seed() const { return seed_; }

  BitString apply(const BitString& bits) const;

 private:
  std::size_t in_len_;
  std::size_t out_len_;
  std::uint64_t seed_;
  std::vector<std::uint64_t> diagonal_;  // packed t, least significant bit first
};

BitString toeplitz_apply(const ToeplitzHash& h, const BitString& bits);

// Outcome slots of a run record. Unset slots hold -1.
enum Slot : std::size_t { kI, kJ, kK, kX, kY, kZ, kS, kSlotCount };

struct RunRecord {
  RunType bob1 = RunType::Key;
  RunType bob2 = RunType::Key;
  std::array<std::int8_t, kSlotCount> bits{-1, -1, -1, -1, -1, -1, -1};
};

struct KeySession {
  ScenarioDescriptor scenario;
  std::size_t n = 0;
  double p_test = 0.0;
  std::uint64_t seed = 0;
  std::vector<RunRecord> runs;
};

// n runs; each Bob independently tests with probability p_test; outcomes are
// drawn from the exact distribution of the realized run-type pair. Run r uses
// RNG stream r.
KeySession sample_runs(const NoiseScenario& scenario, std::size_t n, double p_test, std::uint64_t seed);

// One run per line: index, Bob1 and Bob2 run types (K/T), then i j k x y z s
// with '-' for outcomes the run does not define.
void export_session(const KeySession& session, std::ostream& out);

struct RunCounts {
  std::size_t key = 0;      // both Bobs in key mode
  std::size_t test_b1 = 0;  // Bob1 tests, Bob2 keys
  std::size_t test_b2 = 0;  // Bob1 keys, Bob2 tests
  std::size_t test_both = 0;
};

struct Estimate {
  RunCounts counts;
  EntropyTerms terms;
  double r1_est = 0.0;
  double r2_est = 0.0;
  bool abort = false;
};

RunCounts count_runs(const KeySession& session);
// Plug-in empirical tables for the three run-type pairs used by the rates.
LabeledDistribution empirical_keygen(const KeySession& session);
LabeledDistribution empirical_test_b1(const KeySession& session);
LabeledDistribution empirical_test_b2(const KeySession& session);

// Aborts iff either plug-in rate is negative.
Estimate estimate_and_decide(const KeySession& session);

struct PairReconciliation {
  BitString alice;
  BitString bob;  // Bob's decoded copy of Alice's string
  std::size_t leak_bits = 0;
  std::size_t blocks = 0;
  std::size_t failed_blocks = 0;
};

struct Reconciliation {
  PairReconciliation b1;  // Alice's (i,j) against Bob1's (x,y)
  PairReconciliation b2;  // Alice's k against Bob2's z
};

struct ReconcileOptions {
  std::size_t margin_bits = 10;
  std::size_t block_bits = 12;  // at most 20; Bob1 blocks hold whole runs
  std::uint64_t seed = 0;
};

// Blockwise hash-and-decode. Per block Alice publishes a Toeplitz hash of
// ceil(runs * H(K_A|K_B)) + margin bits (capped at the block length, where
// the identity matrix is used); Bob returns the most likely string with that
// hash under the session's smoothed empirical conditional. Failed blocks are
// counted, not hidden.
Reconciliation reconcile(const KeySession& session, const Estimate& estimate,
                         const ReconcileOptions& options);

BitString privacy_amplify(const BitString& key, std::size_t target_len, std::uint64_t seed);

// I(a_t : b_t) of the empirical joint of aligned bit pairs, over the common
// prefix.
double empirical_bit_mutual_information(const BitString& a, const BitString& b);

struct FiniteKeyOptions {
  std::size_t n = 10000;
  double p_test = 0.5;
  std::uint64_t seed = 1;
  ReconcileOptions reconcile;
};

// Final key length per pair: floor(runs * r_est - excess leak), where the
// excess is the published hash length beyond runs * H(K_A|K_B).
struct FiniteKeyReport {
  Estimate estimate;
  bool reconciled = false;  // false when aborted
  Reconciliation reconciliation;
  BitString final_alice_b1, final_bob1;
  BitString final_alice_b2, final_bob2;
};

FiniteKeyReport run_finite_key(const NoiseScenario& scenario, const FiniteKeyOptions& options);

}  // namespace sdc
