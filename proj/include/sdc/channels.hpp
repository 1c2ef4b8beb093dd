#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "sdc/linalg.hpp"

namespace sdc {

KrausSet depolarizing(double lambda);
KrausSet amplitude_damping(double gamma);
// Fully correlated Pauli channel on two qubits: identity plus sigma_i (x) sigma_i.
KrausSet correlated_depolarizing(double lambda);
// All pairwise products c1[a] (x) c2[b]; c1 acts on the more significant qubit.
KrausSet product2(const KrausSet& c1, const KrausSet& c2);

enum class NoiseModel {
  Identity,
  DepolIndep,
  DepolForwardOnly,
  DepolBackwardOnly,
  DepolCorr,
  AmpDampIndep,
};

inline constexpr std::array<NoiseModel, 6> kAllNoiseModels{
    NoiseModel::Identity,          NoiseModel::DepolIndep, NoiseModel::DepolForwardOnly,
    NoiseModel::DepolBackwardOnly, NoiseModel::DepolCorr,  NoiseModel::AmpDampIndep};

std::string_view model_name(NoiseModel model);
NoiseModel parse_model(std::string_view name);
// Names of the model's parameters, in order ("lambda", "delta", "lambda_f", ...).
std::vector<std::string_view> parameter_names(NoiseModel model);

struct ScenarioDescriptor {
  NoiseModel model = NoiseModel::Identity;
  std::vector<double> params;  // length == parameter_names(model).size()

  std::string str() const;
};

// Forward channel acts on the (Bob1, Bob2) wires on the way out; the backward
// channel on the two returning wires. Both are two-qubit CPTP maps.
struct NoiseScenario {
  KrausSet forward;
  KrausSet backward;
  ScenarioDescriptor descriptor;
};

NoiseScenario make_scenario(const ScenarioDescriptor& descriptor);

// Convenience constructors.
NoiseScenario identity_scenario();
NoiseScenario depol_indep(double lambda, double delta);
NoiseScenario depol_forward_only(double lambda, double delta);
NoiseScenario depol_backward_only(double lambda, double delta);
NoiseScenario depol_corr(double lambda_f, double lambda_b);
NoiseScenario ampdamp_indep(double gamma1, double gamma2);

// Raw Kraus operator lists of a scenario, before completeness validation.
struct RawScenarioOperators {
  std::vector<ComplexMatrix> forward;
  std::vector<ComplexMatrix> backward;
};
RawScenarioOperators raw_operators(const NoiseScenario& scenario);

}  // namespace sdc
