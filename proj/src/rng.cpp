#include "fracplate/rng.hpp"

#include <cmath>
#include <numbers>

namespace fracplate {

std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t x = (seed ^ (stream * 0xD1B54A32D192ED03ULL)) + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return static_cast<double>(counter_bits(seed, stream, counter) >> 11) * 0x1.0p-53;
}

double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
  const double u1 = 1.0 - uniform01(seed, stream, 2 * k);
  const double u2 = uniform01(seed, stream, 2 * k + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace fracplate
