#pragma once

#include <cstdint>
#include <span>

namespace helssvr {

/// Counter-based 64-bit generator (SplitMix64 mixing of a Weyl sequence).
///
/// Every draw is a pure function of (seed, draw index), so streams are
/// reproducible across platforms and standard-library implementations. All
/// distributions below are implemented here rather than via <random>, whose
/// distribution algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;
  /// Unbiased integer in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Standard normal (Marsaglia polar method).
  double normal() noexcept;
  /// Chi-square with integer degrees of freedom (sum of squared normals).
  double chi_square(unsigned dof) noexcept;
  /// Student-t with integer degrees of freedom: Z / sqrt(chi2 / dof).
  double student_t(unsigned dof) noexcept;

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives an independent stream seed from a master seed and a stream index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Moves `count` uniformly chosen elements of `indices` to its front
/// (partial Fisher-Yates). count is clamped to indices.size().
void partial_shuffle(std::span<std::size_t> indices, std::size_t count, Rng& rng) noexcept;

}  // namespace helssvr
