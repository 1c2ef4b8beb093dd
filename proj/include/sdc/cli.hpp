#pragma once

#include <iosfwd>
#include <string>

#include "sdc/rates.hpp"

namespace sdc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

// Decimal, 12 significant digits, independent of the global locale.
std::string format_number(double v);

// Lines of `key=value` for one rate evaluation.
std::string format_rate_point(const RatePoint& p);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdc
