#include "sdc/purification.hpp"

#include <algorithm>
#include <cmath>

namespace sdc {

namespace {

constexpr std::array<int, 3> kAliceWires{0, 4, 6};
constexpr std::array<int, 4> kBobWires{1, 3, 2, 5};  // (B1,B'1), (B2,B'2)

ComplexMatrix phi_plus() { return bell(0, 0).projector(); }

const ComplexMatrix& bob_projector(const BobPurifiedFamilies& f, int bob, RunType type,
                                   const BitLabel& label) {
  if (bob == 1) return type == RunType::Key ? f.bob1_key.projector(label) : f.bob1_test.projector(label);
  return type == RunType::Key ? f.bob2_key.projector(label) : f.bob2_test.projector(label);
}

const BobPurifiedFamilies& families() {
  static const BobPurifiedFamilies f = bob_purified_families();
  return f;
}

ComplexMatrix lifted_on_bob_wires(const ComplexMatrix& op) { return tensor(pauli::identity(), op); }

ComplexMatrix conjugate(const ComplexMatrix& op, const ComplexMatrix& rho) {
  return op * rho * op.adjoint();
}

ComplexMatrix project_and_reduce(const ComplexMatrix& extended, RunType bob1,
                                 const BitLabel& label1, RunType bob2, const BitLabel& label2) {
  const auto& f = families();
  const ComplexMatrix p = embed(tensor(bob_projector(f, 1, bob1, label1), bob_projector(f, 2, bob2, label2)),
                                kPurifiedWires, kBobWires);
  return partial_trace(ComplexMatrix(p * extended * p), kPurifiedWires, kAliceWires);
}

ComplexMatrix extend(const ComplexMatrix& rho) {
  if (rho.rows() != 8 || rho.cols() != 8) throw LinalgError("purification expects an 8-dimensional operator");
  const ComplexMatrix phi = phi_plus();
  return tensor(rho, phi, phi);
}

}  // namespace

double purification_factor(RunType type) { return type == RunType::Key ? 4.0 : 2.0; }

ComplexMatrix purified_branch(const ComplexMatrix& rho, RunType bob1, const BitLabel& label1,
                              RunType bob2, const BitLabel& label2) {
  return project_and_reduce(extend(rho), bob1, label1, bob2, label2);
}

double purified_outcome_probability(const DensityOp& rho, int x, int y, int z, int s) {
  return purified_branch(rho.matrix(), RunType::Key, {x, y}, RunType::Key, {z, s}).trace().real();
}

DensityOp purified_encoding(const DensityOp& rho, int x, int y, int z, int s) {
  return DensityOp(16.0 * purified_branch(rho.matrix(), RunType::Key, {x, y}, RunType::Key, {z, s}));
}

ComplexMatrix direct_bob1_operator(RunType type, int a, int b) {
  if (type == RunType::Key) return encoding_unitary(a, b);
  return xbasis_vec(b).amplitudes() * ket(a).amplitudes().adjoint();
}

ComplexMatrix direct_bob2_operator(RunType type, int a, int b) {
  if (type == RunType::Key) return encoding_unitary(a, b);
  return xbasis_vec(a ^ b).amplitudes() * xbasis_vec(a).amplitudes().adjoint();
}

double verify_encoding_purification(const NoiseScenario& scenario) {
  const DensityOp rho = shared_state(scenario);
  double worst = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        for (int s = 0; s < 2; ++s) {
          const ComplexMatrix u = lifted_on_bob_wires(tensor(encoding_unitary(x, y), encoding_unitary(z, s)));
          const DensityOp direct(conjugate(u, rho.matrix()));
          worst = std::max(worst, trace_distance(direct, purified_encoding(rho, x, y, z, s)));
        }
  return worst;
}

double verify_mixed_purifications(const NoiseScenario& scenario) {
  const ComplexMatrix rho = shared_state(scenario).matrix();
  const ComplexMatrix extended = extend(rho);
  constexpr std::array<std::pair<RunType, RunType>, 3> cases{{
      {RunType::Test, RunType::Key},
      {RunType::Key, RunType::Test},
      {RunType::Test, RunType::Test},
  }};

  double worst = 0.0;
  for (const auto& [t1, t2] : cases) {
    const double factor = purification_factor(t1) * purification_factor(t2);
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int a2 = 0; a2 < 2; ++a2)
          for (int b2 = 0; b2 < 2; ++b2) {
            const ComplexMatrix op = lifted_on_bob_wires(
                tensor(direct_bob1_operator(t1, a1, b1), direct_bob2_operator(t2, a2, b2)));
            const ComplexMatrix direct = conjugate(op, rho);
            const ComplexMatrix purified =
                factor * project_and_reduce(extended, t1, {a1, b1}, t2, {a2, b2});
            worst = std::max(worst, trace_distance(direct, purified));

            if (t1 == RunType::Test && t2 == RunType::Test) {
              // Alice's wire decouples from the freshly prepared ones.
              const ComplexMatrix alice = partial_trace(purified, kThreeQubits, std::array{0});
              const ComplexMatrix product =
                  tensor(alice, xbasis_vec(b1).projector(), xbasis_vec(a2 ^ b2).projector());
              worst = std::max(worst, trace_distance(product, purified));
            }
          }
  }
  return worst;
}

double verify_backward_commutation(const NoiseScenario& scenario) {
  const ComplexMatrix rho = shared_state(scenario).matrix();
  const ComplexMatrix extended = extend(rho);
  constexpr std::array<int, 2> x_wires{4, 6};
  const ComplexMatrix noisy_first = apply_kraus(scenario.backward, extended, kPurifiedWires, x_wires);

  double worst = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        for (int s = 0; s < 2; ++s) {
          const ComplexMatrix after = apply_kraus(
              scenario.backward, project_and_reduce(extended, RunType::Key, {x, y}, RunType::Key, {z, s}),
              kThreeQubits, std::array{1, 2});
          const ComplexMatrix before =
              project_and_reduce(noisy_first, RunType::Key, {x, y}, RunType::Key, {z, s});
          worst = std::max(worst, (after - before).cwiseAbs().maxCoeff());
        }
  return worst;
}

double verify_uniform_outcome_probability(const NoiseScenario& scenario) {
  const LabeledDistribution m = keygen_distribution(scenario).marginal({"x", "y", "z", "s"});
  double worst = 0.0;
  for (double p : m.probabilities()) worst = std::max(worst, std::abs(p - 1.0 / 16.0));
  return worst;
}

}  // namespace sdc
