#include "sdc/channels.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sdc/states.hpp"

namespace sdc {

namespace {

void check_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
}

}  // namespace

KrausSet depolarizing(double lambda) {
  check_unit_interval(lambda, "depolarizing parameter");
  const double w0 = std::sqrt(1.0 - 3.0 * lambda / 4.0);
  const double w = std::sqrt(lambda / 4.0);
  return KrausSet({w0 * pauli::identity(), w * pauli::x(), w * pauli::y(), w * pauli::z()});
}

KrausSet amplitude_damping(double gamma) {
  check_unit_interval(gamma, "amplitude damping parameter");
  ComplexMatrix a0(2, 2), a1(2, 2);
  a0 << 1.0, 0.0, 0.0, std::sqrt(1.0 - gamma);
  a1 << 0.0, std::sqrt(gamma), 0.0, 0.0;
  return KrausSet({a0, a1});
}

KrausSet correlated_depolarizing(double lambda) {
  check_unit_interval(lambda, "correlated depolarizing parameter");
  const double w0 = std::sqrt(1.0 - 3.0 * lambda / 4.0);
  const double w = std::sqrt(lambda / 4.0);
  return KrausSet({w0 * ComplexMatrix::Identity(4, 4), w * tensor(pauli::x(), pauli::x()),
                   w * tensor(pauli::y(), pauli::y()), w * tensor(pauli::z(), pauli::z())});
}

KrausSet product2(const KrausSet& c1, const KrausSet& c2) {
  if (c1.dim() != 2 || c2.dim() != 2) throw std::invalid_argument("product2 expects single-qubit channels");
  std::vector<ComplexMatrix> ops;
  for (const auto& a : c1.operators())
    for (const auto& b : c2.operators()) ops.push_back(tensor(a, b));
  return KrausSet(std::move(ops));
}

std::string_view model_name(NoiseModel model) {
  switch (model) {
    case NoiseModel::Identity: return "identity";
    case NoiseModel::DepolIndep: return "depol-indep";
    case NoiseModel::DepolForwardOnly: return "depol-forward-only";
    case NoiseModel::DepolBackwardOnly: return "depol-backward-only";
    case NoiseModel::DepolCorr: return "depol-corr";
    case NoiseModel::AmpDampIndep: return "ampdamp-indep";
  }
  throw std::logic_error("unhandled noise model");
}

NoiseModel parse_model(std::string_view name) {
  for (NoiseModel m : kAllNoiseModels)
    if (model_name(m) == name) return m;
  throw std::invalid_argument("unknown noise model '" + std::string(name) + "'");
}

std::vector<std::string_view> parameter_names(NoiseModel model) {
  switch (model) {
    case NoiseModel::Identity: return {};
    case NoiseModel::DepolIndep:
    case NoiseModel::DepolForwardOnly:
    case NoiseModel::DepolBackwardOnly: return {"lambda", "delta"};
    case NoiseModel::DepolCorr: return {"lambda_f", "lambda_b"};
    case NoiseModel::AmpDampIndep: return {"gamma1", "gamma2"};
  }
  throw std::logic_error("unhandled noise model");
}

std::string ScenarioDescriptor::str() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(12);
  os << model_name(model);
  const auto names = parameter_names(model);
  for (std::size_t i = 0; i < names.size() && i < params.size(); ++i)
    os << ' ' << names[i] << '=' << params[i];
  return os.str();
}

NoiseScenario make_scenario(const ScenarioDescriptor& d) {
  const auto names = parameter_names(d.model);
  if (d.params.size() != names.size())
    throw std::invalid_argument(std::string(model_name(d.model)) + " expects " +
                                std::to_string(names.size()) + " parameter(s)");
  for (std::size_t i = 0; i < names.size(); ++i)
    check_unit_interval(d.params[i], std::string(names[i]).c_str());

  const KrausSet id4 = KrausSet::identity(4);
  switch (d.model) {
    case NoiseModel::Identity:
      return {id4, id4, d};
    case NoiseModel::DepolIndep: {
      KrausSet ch = product2(depolarizing(d.params[0]), depolarizing(d.params[1]));
      return {ch, ch, d};
    }
    case NoiseModel::DepolForwardOnly:
      return {product2(depolarizing(d.params[0]), depolarizing(d.params[1])), id4, d};
    case NoiseModel::DepolBackwardOnly:
      return {id4, product2(depolarizing(d.params[0]), depolarizing(d.params[1])), d};
    case NoiseModel::DepolCorr:
      return {correlated_depolarizing(d.params[0]), correlated_depolarizing(d.params[1]), d};
    case NoiseModel::AmpDampIndep: {
      KrausSet ch = product2(amplitude_damping(d.params[0]), amplitude_damping(d.params[1]));
      return {ch, ch, d};
    }
  }
  throw std::logic_error("unhandled noise model");
}

NoiseScenario identity_scenario() { return make_scenario({NoiseModel::Identity, {}}); }
NoiseScenario depol_indep(double lambda, double delta) {
  return make_scenario({NoiseModel::DepolIndep, {lambda, delta}});
}
NoiseScenario depol_forward_only(double lambda, double delta) {
  return make_scenario({NoiseModel::DepolForwardOnly, {lambda, delta}});
}
NoiseScenario depol_backward_only(double lambda, double delta) {
  return make_scenario({NoiseModel::DepolBackwardOnly, {lambda, delta}});
}
NoiseScenario depol_corr(double lambda_f, double lambda_b) {
  return make_scenario({NoiseModel::DepolCorr, {lambda_f, lambda_b}});
}
NoiseScenario ampdamp_indep(double gamma1, double gamma2) {
  return make_scenario({NoiseModel::AmpDampIndep, {gamma1, gamma2}});
}

RawScenarioOperators raw_operators(const NoiseScenario& scenario) {
  return {scenario.forward.operators(), scenario.backward.operators()};
}

}  // namespace sdc
