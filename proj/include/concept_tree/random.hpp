#pragma once

// Deterministic random streams.
//
// Every random decision in the library goes through Rng, which wraps the
// 64-bit Mersenne Twister (std::mt19937_64, whose output sequence is fixed by
// the C++ standard). The standard distributions are implementation-defined,
// so bounded integers and normals are derived here from the raw 64-bit words:
//
//   uniform_index(n)  rejection sampling on the raw word: draws are rejected
//                     while word >= 2^64 - (2^64 mod n), then word mod n.
//   uniform01()       (word >> 11) * 2^-53, in [0, 1).
//   normal()          Box-Muller on two uniform01 draws u1, u2:
//                     sqrt(-2 ln(1 - u1)) * cos(2 pi u2). One word pair per call.
//
// Independent sub-streams (per fold, per tree node, per estimator) use
// derive_seed(base, stream), a SplitMix64 mix of the base seed and stream id.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace ctree {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return splitmix64(base ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  std::uint64_t uniform_index(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
    std::uint64_t word = engine_();
    while (word > limit) word = engine_();
    return word % n;
  }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ctree
