#pragma once

// Reproducible random streams.
//
// Generator: xoshiro256** 1.0 (Blackman & Vigna), state expanded from a
// 64-bit seed with SplitMix64.  Child streams are derived with
// derive_seed(parent, index), so replication r of a study always sees the
// same stream regardless of how replications are scheduled.
//
// Every distribution below is implemented here rather than through
// <random> distributions, whose output is implementation-defined.

#include <cstddef>
#include <cstdint>
#include <span>

namespace tailmax {

inline constexpr const char* kRngName = "xoshiro256**/splitmix64 v1";

/// One SplitMix64 step; advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Seed of child stream `index` of `parent`.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept;

class Rng {
public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Uniform on (0, 1): never returns 0.
  double uniform_open() noexcept;

  /// Uniform integer on [0, bound), bound > 0 (Lemire's rejection method).
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Standard normal via the Marsaglia polar method.
  double normal() noexcept;

  /// Exponential with unit rate.
  double exponential() noexcept;

  template <typename T>
  void shuffle(std::span<T> values) noexcept {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

private:
  std::uint64_t s_[4];
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace tailmax
