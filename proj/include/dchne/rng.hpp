#pragma once

#include <cstdint>

namespace dchne {

// Counter-based random streams. Every stochastic decision in a run is a pure
// function of (seed, stream, a, b), so runs are reproducible regardless of
// evaluation order or thread count, and two policies sharing a seed see the
// same placement and the same event pattern.
enum class Stream : std::uint64_t {
  kPlacement = 1,
  kPartition = 2,
  kLeachCoin = 3,
  kAwake = 4,
  kEvent = 5,
  kMobility = 6,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_bits(std::uint64_t seed, Stream stream,
                                    std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ a);
  return splitmix64(h ^ b);
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double stream_unit(std::uint64_t seed, Stream stream, std::uint64_t a = 0,
                             std::uint64_t b = 0) {
  return static_cast<double>(stream_bits(seed, stream, a, b) >> 11) * 0x1.0p-53;
}

}  // namespace dchne
