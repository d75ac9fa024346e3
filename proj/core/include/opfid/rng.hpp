#pragma once

#include <cstdint>
#include <random>

namespace opfid {

/// SplitMix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream. Streams are keyed by (seed, draw_index) so
/// independent draws can run in parallel and still reproduce bit-for-bit:
/// draw k uses mt19937_64 seeded with mix64(seed + GOLDEN * (k + 1)).
///
/// normal() is an explicit Marsaglia polar transform rather than
/// std::normal_distribution, whose algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

  static Rng for_draw(std::uint64_t seed, std::uint64_t draw_index) {
    return Rng(seed + 0x9e3779b97f4a7c15ULL * (draw_index + 1));
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal deviate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Exponential deviate with unit mean.
  double exponential() { return -std::log1p(-uniform()); }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace opfid
