#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace lipgm {

/// SplitMix64 step. Used for seeding and for deriving independent streams.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Mixes a parent seed with a stream index into a new seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// xoshiro256++ seeded through SplitMix64. Uniform and normal variates are
/// produced by fixed algorithms (53-bit mantissa uniforms, Marsaglia polar
/// normals) so every stream is reproducible independently of the standard
/// library's distribution implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }
  result_type next() noexcept;

  /// Uniform on [0, 1).
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n). n must be positive.
  std::size_t index(std::size_t n) noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }
  double normal() noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lipgm
