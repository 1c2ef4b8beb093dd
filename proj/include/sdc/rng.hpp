#pragma once

#include <cstdint>

namespace sdc {

// Counter-based generator: output n of stream t under key k is a fixed
// function of (k, t, n), so streams can be created anywhere without shared
// state. Mixing is the splitmix64 finalizer.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  int bit() { return static_cast<int>(next() >> 63); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace sdc
