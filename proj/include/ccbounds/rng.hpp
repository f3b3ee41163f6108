#ifndef CCBOUNDS_RNG_HPP
#define CCBOUNDS_RNG_HPP

#include <cstdint>

namespace ccbounds {

/**
 * SplitMix64 generator. Small, fast, and fully specified here, so streams are
 * reproducible across platforms and standard-library versions.
 */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 bits of precision.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Lemire's multiply-shift with rejection,
  // so the result depends only on the draw sequence, never on the platform.
  std::uint64_t below(std::uint64_t bound) {
    for (;;) {
      std::uint64_t x = next();
      __uint128_t m = static_cast<__uint128_t>(x) * bound;
      auto lo = static_cast<std::uint64_t>(m);
      if (lo < bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        if (lo < threshold) continue;
      }
      return static_cast<std::uint64_t>(m >> 64);
    }
  }

 private:
  std::uint64_t state_;
};

/**
 * Counter-based stream derivation: stream t of a root seed is the second
 * SplitMix64 output of (root XOR golden-ratio * (t+1)). Trials seeded this way
 * are independent of evaluation order.
 */
inline std::uint64_t derive_stream(std::uint64_t root, std::uint64_t stream) {
  SplitMix64 g(root ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
  g.next();
  return g.next();
}

}  // namespace ccbounds

#endif
