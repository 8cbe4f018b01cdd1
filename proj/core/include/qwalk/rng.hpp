#pragma once

#include <cmath>
#include <cstdint>

namespace qwalk {

/// SplitMix64 generator.
///
/// Every sampling API in this library takes an explicit 64-bit seed and all
/// draws go through this generator, so runs are reproducible byte-for-byte
/// across platforms and standard libraries. (std::uniform_real_distribution
/// and friends are not bit-stable across implementations, which would break
/// the determinism contract of the CLI.)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Exponential variate with the given rate.
  double next_exponential(double rate) {
    // next_double() < 1, so the argument of log1p stays in (-1, 0].
    return -std::log1p(-next_double()) / rate;
  }

 private:
  std::uint64_t state_;
};

/// Deterministic per-replica seed derivation. Child streams of a base seed
/// are decorrelated by running the index through the generator itself.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  SplitMix64 g(base ^ (0xA0761D6478BD642FULL + index));
  g.next_u64();
  return g.next_u64();
}

}  // namespace qwalk
