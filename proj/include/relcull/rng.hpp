#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace relcull {

/// Deterministic random source. All randomness in the library flows through
/// this class so that results are reproducible bit-for-bit across platforms:
/// std::mt19937_64 has a standardized output sequence, and the mapping from
/// raw 64-bit draws to uniforms below is fixed here instead of relying on
/// std::uniform_*_distribution, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection sampling; unbiased and platform-independent.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  int uniform_int(int lo, int hi_inclusive) {
    return lo + static_cast<int>(uniform_index(
                    static_cast<std::uint64_t>(hi_inclusive - lo + 1)));
  }

  bool coin() { return (engine_() & 1u) != 0; }

  /// Standard normal via Box-Muller (fixed algorithm, no libm variance
  /// beyond sin/cos/log/sqrt which are correctly-rounded enough in practice).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// In-place Fisher-Yates shuffle with a fixed traversal order.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      const std::size_t j = uniform_index(i + 1);
      std::swap(v[i], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace relcull
