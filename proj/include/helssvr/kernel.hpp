#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "helssvr/types.hpp"

namespace helssvr {

enum class KernelKind { Rbf, Linear };

/// Kernel family and parameters. RBF uses exp(-||x - z||^2 / sigma^2).
class KernelSpec {
 public:
  /// Throws ConfigError unless sigma is finite and > 0.
  static KernelSpec rbf(double sigma);
  static KernelSpec linear() noexcept { return KernelSpec(KernelKind::Linear, 0.0); }

  KernelKind kind() const noexcept { return kind_; }
  /// RBF width; 0 for the linear kernel.
  double sigma() const noexcept { return sigma_; }

  /// Throws ShapeError when x and z differ in length.
  double operator()(std::span<const double> x, std::span<const double> z) const;

 private:
  KernelSpec(KernelKind kind, double sigma) noexcept : kind_(kind), sigma_(sigma) {}

  KernelKind kind_;
  double sigma_;
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> z);

/// Symmetric N x N matrix of pairwise kernel values, stored dense and
/// row-major (8 N^2 bytes).
class GramMatrix {
 public:
  /// Wraps precomputed values; throws ShapeError unless square and non-empty.
  explicit GramMatrix(Matrix values);

  Eigen::Index n() const noexcept { return values_.rows(); }
  const Matrix& values() const noexcept { return values_; }
  double operator()(Eigen::Index i, Eigen::Index k) const noexcept { return values_(i, k); }
  auto row(Eigen::Index i) const noexcept { return values_.row(i); }

 private:
  Matrix values_;
};

/// Throws DomainError for empty X.
GramMatrix gram_matrix(const KernelSpec& spec, const Matrix& X);

/// Entry k is kernel_eval(spec, x, row k of X_train).
Vector kernel_row(const KernelSpec& spec, std::span<const double> x, const Matrix& X_train);

inline std::span<const double> row_span(const Matrix& m, Eigen::Index i) noexcept {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

std::string_view to_string(KernelKind kind) noexcept;
std::optional<KernelKind> parse_kernel_kind(std::string_view name) noexcept;

}  // namespace helssvr
