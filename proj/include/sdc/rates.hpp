#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sdc/channels.hpp"
#include "sdc/linalg.hpp"
#include "sdc/protocol.hpp"

namespace sdc {

using VarList = std::vector<std::string>;

// All entropies are in bits; probabilities below 1e-12 contribute nothing.
double shannon_entropy(const LabeledDistribution& d, const VarList& vars);
double conditional_entropy(const LabeledDistribution& d, const VarList& target, const VarList& given);
double mutual_information(const LabeledDistribution& d, const VarList& a, const VarList& b);
// sum_c p(c) H(target | given)_{d|c}, summed over assignments c of `over`.
// Cells of zero weight are skipped.
double averaged_conditional_entropy(const LabeledDistribution& d, const VarList& target,
                                    const VarList& given, const VarList& over);
double von_neumann_entropy(const DensityOp& rho);

// sqrt(T) K sqrt(T) for Alice's Bob1 test projector T^{i,j} and key projector
// Kbar^{i',j'}_s, and the analogous Bob2 pair.
ComplexMatrix overlap_operator_c(int s, int i, int j, int ip, int jp);
ComplexMatrix overlap_operator_ctilde(int s, int k, int kp);
// Maximal overlaps over all labels and both s.
double overlap_c();
double overlap_ctilde();

struct EntropyTerms {
  double h_test_b1 = 0.0;  // sum_{z,s} p(z,s) H(T_A1 | T_B1)
  double h_test_b2 = 0.0;  // sum_{x,y,s} p(x,y,s) H(T_A2 | T_B2)
  double h_key_b1 = 0.0;   // sum_s p(s) H(K_A1 | K_B1)
  double h_key_b2 = 0.0;   // sum_s p(s) H(K_A2 | K_B2)
};

// Works for exact and empirical tables alike.
EntropyTerms entropy_terms(const LabeledDistribution& keygen, const LabeledDistribution& test_b1,
                           const LabeledDistribution& test_b2);
double rate_p1(const EntropyTerms& t);
double rate_p2(const EntropyTerms& t);

struct RatePoint {
  ScenarioDescriptor scenario;
  double r1_lower = 0.0;
  double r2_lower = 0.0;
  EntropyTerms terms;
  bool abort_p1 = false;
  bool abort_p2 = false;
};

double key_rate_p1(const NoiseScenario& scenario);
double key_rate_p2(const NoiseScenario& scenario);
RatePoint evaluate_rates(const NoiseScenario& scenario);

struct Theorem1Bounds {
  double r1;
  double r2;
};
Theorem1Bounds theorem1_bounds(double i_a1b1, double i_a1e_given_b2, double i_a2b2,
                               double i_a2e_given_b1, double d1, double d2, double d3);

struct LemmaGroups {
  VarList a1{"i", "j"};
  VarList b1{"x", "y"};
  VarList a2{"k"};
  VarList b2{"z"};
};

struct LemmaReport {
  double lemma1_min_slack = 0.0;
  double lemma2_min_slack = 0.0;
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;

  double min_slack() const { return std::min(lemma1_min_slack, lemma2_min_slack); }
  bool holds(double tolerance = 1e-9) const { return min_slack() >= -tolerance; }
};

// Lemma 2 over every ordered choice of three distinct groups, and Lemma 1's
// two conclusions with d1 = H(A1|B1), d2 = H(A2|B2), d3 = I(B1:B2).
LemmaReport check_lemma_inequalities(const LabeledDistribution& d, const LemmaGroups& groups = {});

}  // namespace sdc
