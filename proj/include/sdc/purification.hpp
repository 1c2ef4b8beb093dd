#pragma once

#include "sdc/channels.hpp"
#include "sdc/linalg.hpp"
#include "sdc/protocol.hpp"
#include "sdc/states.hpp"

namespace sdc {

// Wire order of the purified picture:
//   0 A, 1 B1, 2 B2, 3 B'1, 4 X1, 5 B'2, 6 X2
// (B'_i, X_i) start in |phi+>. Each Bob measures (B_i, B'_i) with a key
// (Bell) or test projector; Alice keeps (A, X1, X2).
inline constexpr std::array<int, 7> kPurifiedWires{2, 2, 2, 2, 2, 2, 2};

// Normalization restoring the direct construction for one Bob's projector:
// 4 for a Bell projector, 2 for a test projector.
double purification_factor(RunType type);

// Unnormalized post-measurement operator on (A, X1, X2) for the given Bob
// projectors, without the normalization factor.
ComplexMatrix purified_branch(const ComplexMatrix& rho, RunType bob1, const BitLabel& label1,
                              RunType bob2, const BitLabel& label2);

// Probability of the joint Bell outcome (x,y),(z,s).
double purified_outcome_probability(const DensityOp& rho, int x, int y, int z, int s);

// 16 x purified_branch for Bell outcomes (x,y),(z,s).
DensityOp purified_encoding(const DensityOp& rho, int x, int y, int z, int s);

// Direct single-wire operation of one Bob for a run type: U^{ab} for a key
// run; for a test run, |b_x><a| (Bob1) or |(a^b)_x><a_x| (Bob2).
ComplexMatrix direct_bob1_operator(RunType type, int a, int b);
ComplexMatrix direct_bob2_operator(RunType type, int a, int b);

// Max trace distance, over all 16 labels, between the unitary encoding of
// shared_state and its purified form.
double verify_encoding_purification(const NoiseScenario& scenario);

// Max trace distance between the direct project-insert-encode construction and
// the purified one, over the (test,key), (key,test) and (test,test) cases and
// all labels, including the product form of the (test,test) output.
double verify_mixed_purifications(const NoiseScenario& scenario);

// Max deviation between applying the backward channel to (X1, X2) before and
// after the Bell projections.
double verify_backward_commutation(const NoiseScenario& scenario);

// Max over (x,y,z,s) of |p(x,y;z,s) - 1/16| from keygen_distribution.
double verify_uniform_outcome_probability(const NoiseScenario& scenario);

}  // namespace sdc
