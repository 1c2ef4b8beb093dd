#pragma once

#include <string>
#include <vector>

#include "sdc/channels.hpp"

namespace sdc {

struct VerifyCheck {
  std::string name;
  double value = 0.0;      // worst deviation found
  double tolerance = 0.0;  // pass iff value <= tolerance
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  // Scales one forward Kraus operator by (1 + 1e-6) before the CPTP check.
  bool perturb_kraus = false;
};

// identity, depol-indep(0.3,0.6), depol-corr(0.5,0.5), ampdamp-indep(0.5,0.5),
// depol-backward-only(0.2,0.4)
std::vector<NoiseScenario> canned_scenarios();

// Grid {0, 0.1, ..., 1}^2 for the closed-form table checks.
struct ClosedFormDeviation {
  double p = 0.0;
  double q = 0.0;
  double qtilde = 0.0;
};
ClosedFormDeviation closed_form_deviation(double lambda, double delta);

std::vector<VerifyCheck> run_verification(const VerifyOptions& options = {});

}  // namespace sdc
