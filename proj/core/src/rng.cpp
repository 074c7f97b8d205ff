#include "cobra/rng.hpp"

#include <limits>

namespace cobra {

Engine make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose),
                    static_cast<std::uint32_t>(a & 0xffffffffu),
                    static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b & 0xffffffffu),
                    static_cast<std::uint32_t>(b >> 32)};
  return Engine(seq);
}

std::size_t uniform_index(Engine& g, std::size_t n) {
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = g();
  while (x >= limit) x = g();
  return static_cast<std::size_t>(x % range);
}

}  // namespace cobra
