#pragma once

#include <cstdint>
#include <random>

namespace planpeer {

/// Uniform integer in [0, n) by rejection, independent of the standard
/// library's distribution implementations. Requires n > 0.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace planpeer
