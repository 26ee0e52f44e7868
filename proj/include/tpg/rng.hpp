#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace tpg {

/// xoshiro256** seeded through splitmix64.
///
/// Sequences are defined entirely by integer arithmetic, so equal seeds give
/// equal streams on every platform. All derived draws (indices, reals,
/// Bernoulli trials) are implemented here rather than through <random>
/// distributions, whose algorithms differ between standard libraries.
class Rng {
 public:
  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed) { reset(seed); }

  void reset(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform in [0, 1): the top 53 bits of a draw scaled by 2^-53.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, bound). bound must be > 0. Unbiased (rejection).
  std::uint64_t uniform_index(std::uint64_t bound);

  /// One draw; true with probability p.
  bool bernoulli(double p) { return uniform01() < p; }

  /// Number of 64-bit draws taken since construction or the last reset.
  std::uint64_t draw_count() const noexcept { return draws_; }

  bool operator==(const Rng& other) const = default;

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t draws_ = 0;
};

}  // namespace tpg
