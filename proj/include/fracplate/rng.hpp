#pragma once

#include <cstdint>

namespace fracplate {

/// Counter-based random numbers: every draw is a pure function of
/// (seed, stream, counter), so streams can be regenerated in any order and in
/// any language.
///
///   key  = seed ^ (stream * 0xD1B54A32D192ED03)
///   x    = key + (counter + 1) * 0x9E3779B97F4A7C15      (mod 2^64)
///   bits = splitmix64 finalizer of x:
///            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9
///            x = (x ^ (x >> 27)) * 0x94D049BB133111EB
///            x =  x ^ (x >> 31)
std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// (bits >> 11) * 2^-53, in [0, 1).
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Box-Muller: u1 = 1 - uniform01(.., 2k), u2 = uniform01(.., 2k + 1),
/// returns sqrt(-2 ln u1) cos(2 pi u2).
double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t k);

}  // namespace fracplate
