#include "sdc/rng.hpp"

namespace sdc {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed + kGolden) ^ (stream * kGolden + 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterRng::next() { return mix64(key_ + kGolden * ++counter_); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

}  // namespace sdc
