#pragma once

#include <cstdint>

namespace lps {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Combines a master seed with stream coordinates into an independent seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
  return mix64(mix64(master ^ mix64(a + 0x632BE59BD9B4E019ULL)) ^ mix64(b + 0x85157AF5ULL));
}

/// Counter-based generator: the k-th draw is a pure function of (key, k), so
/// streams are reproducible regardless of which thread consumes them.
/// Normals use Box-Muller on our own uniforms rather than
/// std::normal_distribution, whose output is implementation-defined.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

  std::uint64_t next_u64() noexcept { return mix64(key_ + 0xD1B54A32D192ED03ULL * counter_++); }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), n > 0 (Lemire multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) noexcept;

  double normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lps
