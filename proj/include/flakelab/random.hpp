#pragma once

#include <cstdint>
#include <random>

namespace flakelab {

/// Unbiased integer in [0, bound) from a 64-bit engine (rejection sampling),
/// independent of the standard library's distribution implementations.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace flakelab
