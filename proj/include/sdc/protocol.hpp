#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdc/channels.hpp"
#include "sdc/linalg.hpp"

namespace sdc {

struct ConditionedDistribution;

// Dense joint table over named binary variables. The first variable is the
// most significant bit of the cell index.
class LabeledDistribution {
 public:
  // Entries >= -1e-12 are clamped to 0; the sum must be within 1e-9 of 1.
  LabeledDistribution(std::vector<std::string> variables, std::vector<double> probabilities);

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<double>& probabilities() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  std::size_t index_of(std::string_view name) const;
  bool has(std::string_view name) const;

  double operator[](std::size_t cell) const { return probs_[cell]; }
  // Probability of a full assignment given in variable order.
  double at(std::initializer_list<int> bits) const;
  // Bit of `variable` in cell `cell`.
  int bit(std::size_t cell, std::size_t variable) const;

  LabeledDistribution marginal(const std::vector<std::string>& vars) const;

  using Conditioned = ConditionedDistribution;
  // Restricts to cells with vars == values and renormalizes; the conditioning
  // variables are dropped. nullopt when the event has probability < 1e-14.
  std::optional<Conditioned> condition(const std::vector<std::string>& vars,
                                       const std::vector<int>& values) const;

 private:
  std::vector<std::string> variables_;
  std::vector<double> probs_;
};

struct ConditionedDistribution {
  LabeledDistribution dist;
  double weight;
};

enum class RunType { Key, Test };

struct RunConfig {
  RunType bob1 = RunType::Key;
  RunType bob2 = RunType::Key;
  NoiseScenario scenario;
};

// Forward channel applied to the Bob1/Bob2 wires of |GHZ><GHZ|.
DensityOp shared_state(const NoiseScenario& scenario);

// Both Bobs encode, Alice measures in the G^s basis. Variables i,j,k,x,y,z,s.
LabeledDistribution keygen_distribution(const NoiseScenario& scenario);

// Bob1 measures sigma_z (outcome x) and sends |y_x>; Bob2 encodes (z,s); Alice
// measures sigma_z (x) sigma_x on (A, A1). Variables i,j,x,y,z,s.
LabeledDistribution test_b1_distribution(const NoiseScenario& scenario);

// Bob1 encodes (x,y); Bob2 measures sigma_x (outcome z), sends |w_x> and
// announces s = z^w; Alice measures sigma_x on A2 with outcome k^s. Variables
// k,x,y,z,s.
LabeledDistribution test_b2_distribution(const NoiseScenario& scenario);

// Both Bobs test; Alice measures both commuting test observables.
// Variables i,j,k,x,y,z,s.
LabeledDistribution test_both_distribution(const NoiseScenario& scenario);

LabeledDistribution run_distribution(const RunConfig& config);

// Printed closed forms for independent depolarizing noise, indexed by the
// XOR offsets (i^x, j^y, k^z), (i^x, j^y) and k^z.
double closed_form_P(double lambda, double delta, int i, int j, int k);
double closed_form_Q(double lambda, int i, int j);
double closed_form_qtilde(double delta, int flip);

}  // namespace sdc
