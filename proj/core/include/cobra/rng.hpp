#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace cobra {

using Engine = std::mt19937_64;

// Purpose tags for independent random streams derived from one run seed.
enum class StreamPurpose : std::uint32_t {
  kReward = 1,
  kAlgorithm = 2,
  kAdversary = 3,
};

// Deterministic engine for (seed, purpose, a, b). std::seed_seq and
// mt19937_64 are both fully specified, so streams match across platforms.
Engine make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t a = 0,
                   std::uint64_t b = 0);

// Uniform double in [0,1) with 53 random bits.
inline double uniform01(Engine& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Engine& g, double p) { return uniform01(g) < p; }

// Uniform integer in [0, n) by rejection; n must be positive.
std::size_t uniform_index(Engine& g, std::size_t n);

}  // namespace cobra
