#include "helssvr/random.hpp"

#include <cmath>
#include <utility>

namespace helssvr {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() noexcept {
  ++counter_;
  return mix64(seed_ + counter_ * kGolden);
}

double Rng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  // Rejection on the top of the range keeps the result unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t x = next_u64();
  while (x < threshold) x = next_u64();
  return x % bound;
}

double Rng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

double Rng::chi_square(unsigned dof) noexcept {
  double sum = 0.0;
  for (unsigned i = 0; i < dof; ++i) {
    const double z = normal();
    sum += z * z;
  }
  return sum;
}

double Rng::student_t(unsigned dof) noexcept {
  const double z = normal();
  const double chi2 = chi_square(dof);
  return z / std::sqrt(chi2 / static_cast<double>(dof));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix64(mix64(master) ^ mix64(stream + kGolden));
}

void partial_shuffle(std::span<std::size_t> indices, std::size_t count, Rng& rng) noexcept {
  const std::size_t n = indices.size();
  if (count > n) count = n;
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t r = j + static_cast<std::size_t>(rng.below(n - j));
    std::swap(indices[j], indices[r]);
  }
}

}  // namespace helssvr
