#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace denserec {

/// Seeded random source used everywhere randomness is needed. Wraps
/// std::mt19937_64 (whose output sequence is pinned by the standard) and
/// derives doubles with fixed arithmetic, so identical seeds give identical
/// streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller. Consumes two uniforms per call, no
  /// cached spare, so the draw count per sample is fixed.
  double gaussian();

  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

/// FNV-1a over raw bytes. Used for input digests in run manifests and for
/// deriving per-user seeds from user ids.
std::uint64_t fnv1a64(std::string_view bytes);

/// Deterministic combination of two seeds (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace denserec
