#include "sdc/rates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "sdc/states.hpp"

namespace sdc {

namespace {

constexpr double kEntropyFloor = 1e-12;

VarList join(const VarList& a, const VarList& b) {
  VarList out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void require_disjoint(const VarList& a, const VarList& b) {
  for (const auto& v : a)
    if (std::find(b.begin(), b.end(), v) != b.end())
      throw std::invalid_argument("variable subsets overlap on '" + v + "'");
}

double entropy_of(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > kEntropyFloor) h -= p * std::log2(p);
  return h;
}

}  // namespace

double shannon_entropy(const LabeledDistribution& d, const VarList& vars) {
  if (vars.empty()) throw std::invalid_argument("entropy of an empty variable set");
  return entropy_of(d.marginal(vars).probabilities());
}

double conditional_entropy(const LabeledDistribution& d, const VarList& target, const VarList& given) {
  require_disjoint(target, given);
  if (given.empty()) return shannon_entropy(d, target);
  return shannon_entropy(d, join(target, given)) - shannon_entropy(d, given);
}

double mutual_information(const LabeledDistribution& d, const VarList& a, const VarList& b) {
  require_disjoint(a, b);
  return shannon_entropy(d, a) + shannon_entropy(d, b) - shannon_entropy(d, join(a, b));
}

double averaged_conditional_entropy(const LabeledDistribution& d, const VarList& target,
                                    const VarList& given, const VarList& over) {
  if (over.empty()) return conditional_entropy(d, target, given);
  double h = 0.0;
  std::vector<int> values(over.size());
  for (std::size_t c = 0; c < (std::size_t{1} << over.size()); ++c) {
    for (std::size_t v = 0; v < over.size(); ++v)
      values[v] = static_cast<int>((c >> (over.size() - 1 - v)) & 1u);
    const auto cond = d.condition(over, values);
    if (!cond) continue;
    h += cond->weight * conditional_entropy(cond->dist, target, given);
  }
  return h;
}

double von_neumann_entropy(const DensityOp& rho) {
  const auto ev = hermitian_eigenvalues(rho.matrix());
  return entropy_of(ev);
}

ComplexMatrix overlap_operator_c(int s, int i, int j, int ip, int jp) {
  const ComplexMatrix root_t = psd_sqrt(alice_test_family_b1().projector({i, j}));
  const ComplexMatrix k = alice_key_family(s, 2).projector({ip, jp});
  return root_t * k * root_t;
}

ComplexMatrix overlap_operator_ctilde(int s, int k, int kp) {
  const ComplexMatrix root_t = psd_sqrt(alice_test_family_b2(s).projector({k}));
  const ComplexMatrix key = alice_key_family(s, 4).projector({kp});
  return root_t * key * root_t;
}

// ||sqrt(K) sqrt(T)||^2 = ||sqrt(T) K sqrt(T)|| for projectors K.
double overlap_c() {
  double best = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int ip = 0; ip < 2; ++ip)
          for (int jp = 0; jp < 2; ++jp)
            best = std::max(best, operator_inf_norm(overlap_operator_c(s, i, j, ip, jp)));
  return best;
}

double overlap_ctilde() {
  double best = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int k = 0; k < 2; ++k)
      for (int kp = 0; kp < 2; ++kp)
        best = std::max(best, operator_inf_norm(overlap_operator_ctilde(s, k, kp)));
  return best;
}

EntropyTerms entropy_terms(const LabeledDistribution& keygen, const LabeledDistribution& test_b1,
                           const LabeledDistribution& test_b2) {
  EntropyTerms t;
  t.h_test_b1 = averaged_conditional_entropy(test_b1, {"i", "j"}, {"x", "y"}, {"z", "s"});
  t.h_test_b2 = averaged_conditional_entropy(test_b2, {"k"}, {"z"}, {"x", "y", "s"});
  t.h_key_b1 = averaged_conditional_entropy(keygen, {"i", "j"}, {"x", "y"}, {"s"});
  t.h_key_b2 = averaged_conditional_entropy(keygen, {"k"}, {"z"}, {"s"});
  return t;
}

namespace {
const double& log_inv_c() {
  static const double v = std::log2(1.0 / overlap_c());
  return v;
}
const double& log_inv_ctilde() {
  static const double v = std::log2(1.0 / overlap_ctilde());
  return v;
}
}  // namespace

double rate_p1(const EntropyTerms& t) { return log_inv_c() - t.h_test_b1 - t.h_key_b1 - t.h_key_b2; }
double rate_p2(const EntropyTerms& t) { return log_inv_ctilde() - t.h_test_b2 - t.h_key_b1 - t.h_key_b2; }

RatePoint evaluate_rates(const NoiseScenario& scenario) {
  RatePoint p;
  p.scenario = scenario.descriptor;
  p.terms = entropy_terms(keygen_distribution(scenario), test_b1_distribution(scenario),
                          test_b2_distribution(scenario));
  p.r1_lower = rate_p1(p.terms);
  p.r2_lower = rate_p2(p.terms);
  p.abort_p1 = p.r1_lower < 0.0;
  p.abort_p2 = p.r2_lower < 0.0;
  return p;
}

double key_rate_p1(const NoiseScenario& scenario) {
  const auto keygen = keygen_distribution(scenario);
  EntropyTerms t;
  t.h_test_b1 = averaged_conditional_entropy(test_b1_distribution(scenario), {"i", "j"}, {"x", "y"}, {"z", "s"});
  t.h_key_b1 = averaged_conditional_entropy(keygen, {"i", "j"}, {"x", "y"}, {"s"});
  t.h_key_b2 = averaged_conditional_entropy(keygen, {"k"}, {"z"}, {"s"});
  return rate_p1(t);
}

double key_rate_p2(const NoiseScenario& scenario) {
  const auto keygen = keygen_distribution(scenario);
  EntropyTerms t;
  t.h_test_b2 = averaged_conditional_entropy(test_b2_distribution(scenario), {"k"}, {"z"}, {"x", "y", "s"});
  t.h_key_b1 = averaged_conditional_entropy(keygen, {"i", "j"}, {"x", "y"}, {"s"});
  t.h_key_b2 = averaged_conditional_entropy(keygen, {"k"}, {"z"}, {"s"});
  return rate_p2(t);
}

Theorem1Bounds theorem1_bounds(double i_a1b1, double i_a1e_given_b2, double i_a2b2,
                               double i_a2e_given_b1, double d1, double d2, double d3) {
  for (double v : {i_a1b1, i_a1e_given_b2, i_a2b2, i_a2e_given_b1, d1, d2, d3})
    if (!std::isfinite(v)) throw std::invalid_argument("theorem1_bounds: non-finite input");
  if (d1 < 0.0 || d2 < 0.0 || d3 < 0.0) throw std::invalid_argument("theorem1_bounds: negative delta");
  return {i_a1b1 - i_a1e_given_b2 - d1 - 2.0 * d2 - d3, i_a2b2 - i_a2e_given_b1 - 2.0 * d1 - d2 - d3};
}

LemmaReport check_lemma_inequalities(const LabeledDistribution& d, const LemmaGroups& g) {
  for (const auto* group : {&g.a1, &g.b1, &g.a2, &g.b2}) {
    if (group->empty()) throw std::invalid_argument("lemma check: empty variable group");
    for (const auto& v : *group)
      if (!d.has(v)) throw std::invalid_argument("lemma check: missing variable '" + v + "'");
  }

  LemmaReport r;
  r.d1 = conditional_entropy(d, g.a1, g.b1);
  r.d2 = conditional_entropy(d, g.a2, g.b2);
  r.d3 = mutual_information(d, g.b1, g.b2);
  const double budget = r.d1 + r.d2 + r.d3;
  r.lemma1_min_slack = std::min(budget - mutual_information(d, g.a1, join(g.a2, g.b2)),
                                budget - mutual_information(d, join(g.a1, g.b1), g.a2));

  const std::array<const VarList*, 4> groups{&g.a1, &g.b1, &g.a2, &g.b2};
  r.lemma2_min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c) {
        if (a == b || b == c || a == c) continue;
        const VarList& S = *groups[a];
        const VarList& T = *groups[b];
        const VarList& U = *groups[c];
        const double lhs = mutual_information(d, S, T) + mutual_information(d, T, U);
        const double rhs = mutual_information(d, S, U) + mutual_information(d, T, join(S, U));
        r.lemma2_min_slack = std::min(r.lemma2_min_slack, rhs - lhs);
      }
  return r;
}

}  // namespace sdc
