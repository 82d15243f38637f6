#pragma once

#include <cstdint>
#include <random>

namespace sosgap {

/// The single generator used everywhere: 64-bit Mersenne twister.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Sub-seed for stream `index` under `base`:
///   splitmix64(base ^ splitmix64(index + 1)).
/// Used for (grid point, replicate) streams so replicates are reproducible
/// independently of execution order.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::uint64_t index) noexcept {
  return splitmix64(base ^ splitmix64(index + 1));
}

}  // namespace sosgap
