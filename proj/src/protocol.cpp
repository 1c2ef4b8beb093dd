#include "sdc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sdc/states.hpp"

namespace sdc {

namespace {

constexpr double kNegativeClamp = 1e-12;
constexpr double kSumTolerance = 1e-9;
constexpr double kNullEvent = 1e-14;

void check_bit(int b) {
  if (b != 0 && b != 1) throw std::invalid_argument("bit value must be 0 or 1");
}

void check_unit_interval(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("noise parameter must lie in [0,1]");
}

// Kraus operators of the two-qubit channel lifted to I_A (x) K.
std::vector<ComplexMatrix> lift_to_bob_wires(const KrausSet& channel) {
  std::vector<ComplexMatrix> out;
  out.reserve(channel.operators().size());
  for (const auto& k : channel.operators()) out.push_back(tensor(pauli::identity(), k));
  return out;
}

ComplexMatrix apply_lifted(const std::vector<ComplexMatrix>& ops, const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : ops) out.noalias() += k * rho * k.adjoint();
  return out;
}

double expectation(const ComplexMatrix& projector, const ComplexMatrix& rho) {
  return (projector * rho).trace().real();
}

// |to><from| on a single qubit.
ComplexMatrix transition(const PureState& to, const PureState& from) {
  return to.amplitudes() * from.amplitudes().adjoint();
}

}  // namespace

LabeledDistribution::LabeledDistribution(std::vector<std::string> variables,
                                         std::vector<double> probabilities)
    : variables_(std::move(variables)), probs_(std::move(probabilities)) {
  if (variables_.size() > 20) throw std::invalid_argument("too many variables");
  if (probs_.size() != (std::size_t{1} << variables_.size()))
    throw std::invalid_argument("probability table size does not match variable count");
  for (std::size_t a = 0; a < variables_.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (variables_[a] == variables_[b]) throw std::invalid_argument("duplicate variable name");
  double sum = 0.0;
  for (double& p : probs_) {
    if (!std::isfinite(p) || p < -kNegativeClamp)
      throw std::invalid_argument("probability entry is negative or non-finite");
    p = std::max(p, 0.0);
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) throw std::invalid_argument("probabilities do not sum to 1");
}

std::size_t LabeledDistribution::index_of(std::string_view name) const {
  for (std::size_t v = 0; v < variables_.size(); ++v)
    if (variables_[v] == name) return v;
  throw std::out_of_range("unknown variable '" + std::string(name) + "'");
}

bool LabeledDistribution::has(std::string_view name) const {
  return std::find(variables_.begin(), variables_.end(), name) != variables_.end();
}

int LabeledDistribution::bit(std::size_t cell, std::size_t variable) const {
  return static_cast<int>((cell >> (variables_.size() - 1 - variable)) & 1u);
}

double LabeledDistribution::at(std::initializer_list<int> bits) const {
  if (bits.size() != variables_.size()) throw std::invalid_argument("assignment length mismatch");
  std::size_t cell = 0;
  for (int b : bits) {
    check_bit(b);
    cell = (cell << 1) | static_cast<std::size_t>(b);
  }
  return probs_[cell];
}

LabeledDistribution LabeledDistribution::marginal(const std::vector<std::string>& vars) const {
  std::vector<std::size_t> pos;
  for (const auto& v : vars) pos.push_back(index_of(v));
  std::vector<double> out(std::size_t{1} << vars.size(), 0.0);
  for (std::size_t cell = 0; cell < probs_.size(); ++cell) {
    std::size_t m = 0;
    for (std::size_t p : pos) m = (m << 1) | static_cast<std::size_t>(bit(cell, p));
    out[m] += probs_[cell];
  }
  return LabeledDistribution(vars, std::move(out));
}

std::optional<LabeledDistribution::Conditioned> LabeledDistribution::condition(
    const std::vector<std::string>& vars, const std::vector<int>& values) const {
  if (vars.size() != values.size()) throw std::invalid_argument("condition arity mismatch");
  std::vector<bool> fixed(variables_.size(), false);
  std::vector<int> want(variables_.size(), 0);
  for (std::size_t c = 0; c < vars.size(); ++c) {
    check_bit(values[c]);
    const auto p = index_of(vars[c]);
    if (fixed[p]) throw std::invalid_argument("variable conditioned twice");
    fixed[p] = true;
    want[p] = values[c];
  }
  std::vector<std::string> rest;
  std::vector<std::size_t> rest_pos;
  for (std::size_t v = 0; v < variables_.size(); ++v)
    if (!fixed[v]) {
      rest.push_back(variables_[v]);
      rest_pos.push_back(v);
    }

  std::vector<double> out(std::size_t{1} << rest.size(), 0.0);
  double weight = 0.0;
  for (std::size_t cell = 0; cell < probs_.size(); ++cell) {
    bool match = true;
    for (std::size_t v = 0; v < variables_.size() && match; ++v)
      if (fixed[v] && bit(cell, v) != want[v]) match = false;
    if (!match) continue;
    std::size_t m = 0;
    for (std::size_t p : rest_pos) m = (m << 1) | static_cast<std::size_t>(bit(cell, p));
    out[m] += probs_[cell];
    weight += probs_[cell];
  }
  if (weight < kNullEvent) return std::nullopt;
  for (double& p : out) p /= weight;
  return Conditioned{LabeledDistribution(std::move(rest), std::move(out)), weight};
}

DensityOp shared_state(const NoiseScenario& scenario) {
  const ComplexMatrix ghz = ghz3().projector();
  return DensityOp(apply_lifted(lift_to_bob_wires(scenario.forward), ghz));
}

LabeledDistribution keygen_distribution(const NoiseScenario& scenario) {
  const ComplexMatrix rho = shared_state(scenario).matrix();
  const auto backward = lift_to_bob_wires(scenario.backward);
  const MeasurementFamily families[2] = {alice_key_family(0, 1), alice_key_family(1, 1)};

  // cell index: i j k x y z s
  std::vector<double> p(128, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        for (int s = 0; s < 2; ++s) {
          const ComplexMatrix u =
              tensor(pauli::identity(), encoding_unitary(x, y), encoding_unitary(z, s));
          const ComplexMatrix out = apply_lifted(backward, u * rho * u.adjoint());
          for (const auto& [label, proj] : families[s].projectors()) {
            const std::size_t cell = (std::size_t(label[0]) << 6) | (std::size_t(label[1]) << 5) |
                                     (std::size_t(label[2]) << 4) | (std::size_t(x) << 3) |
                                     (std::size_t(y) << 2) | (std::size_t(z) << 1) | std::size_t(s);
            p[cell] = expectation(proj, out) / 16.0;
          }
        }
  return LabeledDistribution({"i", "j", "k", "x", "y", "z", "s"}, std::move(p));
}

LabeledDistribution test_b1_distribution(const NoiseScenario& scenario) {
  const ComplexMatrix rho = shared_state(scenario).matrix();
  const auto backward = lift_to_bob_wires(scenario.backward);
  const MeasurementFamily alice = alice_test_family_b1();

  // cell index: i j x y z s
  std::vector<double> p(64, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      // Project wire B1 onto |x>, then resend it as |y_x>.
      const ComplexMatrix swap_in = transition(xbasis_vec(y), ket(x));
      for (int z = 0; z < 2; ++z)
        for (int s = 0; s < 2; ++s) {
          const ComplexMatrix op = tensor(pauli::identity(), swap_in, encoding_unitary(z, s));
          const ComplexMatrix out = apply_lifted(backward, op * rho * op.adjoint());
          for (const auto& [label, proj] : alice.projectors()) {
            const std::size_t cell = (std::size_t(label[0]) << 5) | (std::size_t(label[1]) << 4) |
                                     (std::size_t(x) << 3) | (std::size_t(y) << 2) |
                                     (std::size_t(z) << 1) | std::size_t(s);
            p[cell] = expectation(proj, out) / 8.0;
          }
        }
    }
  return LabeledDistribution({"i", "j", "x", "y", "z", "s"}, std::move(p));
}

LabeledDistribution test_b2_distribution(const NoiseScenario& scenario) {
  const ComplexMatrix rho = shared_state(scenario).matrix();
  const auto backward = lift_to_bob_wires(scenario.backward);
  const MeasurementFamily alice[2] = {alice_test_family_b2(0), alice_test_family_b2(1)};

  // cell index: k x y z s
  std::vector<double> p(32, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        for (int s = 0; s < 2; ++s) {
          // Measured x-basis outcome z, prepared |w_x> with w = z^s.
          const ComplexMatrix swap_in = transition(xbasis_vec(z ^ s), xbasis_vec(z));
          const ComplexMatrix op = tensor(pauli::identity(), encoding_unitary(x, y), swap_in);
          const ComplexMatrix out = apply_lifted(backward, op * rho * op.adjoint());
          for (const auto& [label, proj] : alice[s].projectors()) {
            const std::size_t cell = (std::size_t(label[0]) << 4) | (std::size_t(x) << 3) |
                                     (std::size_t(y) << 2) | (std::size_t(z) << 1) | std::size_t(s);
            p[cell] = expectation(proj, out) / 8.0;
          }
        }
  return LabeledDistribution({"k", "x", "y", "z", "s"}, std::move(p));
}

LabeledDistribution test_both_distribution(const NoiseScenario& scenario) {
  const ComplexMatrix rho = shared_state(scenario).matrix();
  const auto backward = lift_to_bob_wires(scenario.backward);
  const MeasurementFamily b1 = alice_test_family_b1();
  const MeasurementFamily b2[2] = {alice_test_family_b2(0), alice_test_family_b2(1)};

  std::vector<double> p(128, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        for (int s = 0; s < 2; ++s) {
          const ComplexMatrix op = tensor(pauli::identity(), transition(xbasis_vec(y), ket(x)),
                                          transition(xbasis_vec(z ^ s), xbasis_vec(z)));
          const ComplexMatrix out = apply_lifted(backward, op * rho * op.adjoint());
          for (const auto& [l1, p1] : b1.projectors())
            for (const auto& [l2, p2] : b2[s].projectors()) {
              const std::size_t cell = (std::size_t(l1[0]) << 6) | (std::size_t(l1[1]) << 5) |
                                       (std::size_t(l2[0]) << 4) | (std::size_t(x) << 3) |
                                       (std::size_t(y) << 2) | (std::size_t(z) << 1) | std::size_t(s);
              p[cell] = expectation(p1 * p2, out) / 4.0;
            }
        }
  return LabeledDistribution({"i", "j", "k", "x", "y", "z", "s"}, std::move(p));
}

LabeledDistribution run_distribution(const RunConfig& config) {
  if (config.bob1 == RunType::Key && config.bob2 == RunType::Key)
    return keygen_distribution(config.scenario);
  if (config.bob1 == RunType::Test && config.bob2 == RunType::Key)
    return test_b1_distribution(config.scenario);
  if (config.bob1 == RunType::Key && config.bob2 == RunType::Test)
    return test_b2_distribution(config.scenario);
  return test_both_distribution(config.scenario);
}

double closed_form_P(double lambda, double delta, int i, int j, int k) {
  check_unit_interval(lambda);
  check_unit_interval(delta);
  check_bit(i);
  check_bit(j);
  check_bit(k);
  const double a = lambda * (2.0 - lambda);
  const double b = delta * (2.0 - delta);
  switch ((i << 2) | (j << 1) | k) {
    case 0b000: return 1.0 + 5.0 / 8.0 * a * b - 3.0 / 4.0 * (a + b);
    case 0b001: return (2.0 - a) * b / 8.0;
    case 0b010: return (a + b) / 4.0 - 3.0 / 8.0 * a * b;
    case 0b011: return (2.0 - a) * b / 8.0;
    case 0b100: return (2.0 - b) * a / 8.0;
    case 0b101: return a * b / 8.0;
    case 0b110: return (2.0 - b) * a / 8.0;
    default: return a * b / 8.0;
  }
}

double closed_form_Q(double lambda, int i, int j) {
  check_unit_interval(lambda);
  check_bit(i);
  check_bit(j);
  if (i == 0 && j == 0) return (2.0 - lambda) * (2.0 - lambda) / 4.0;
  if (i == 1 && j == 1) return lambda * lambda / 4.0;
  return lambda * (2.0 - lambda) / 4.0;
}

double closed_form_qtilde(double delta, int flip) {
  check_unit_interval(delta);
  check_bit(flip);
  return flip == 0 ? 1.0 - delta / 2.0 : delta / 2.0;
}

}  // namespace sdc
