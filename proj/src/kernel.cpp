#include "helssvr/kernel.hpp"

#include <cmath>
#include <string>

#include "helssvr/errors.hpp"

namespace helssvr {

KernelSpec KernelSpec::rbf(double sigma) {
  if (!std::isfinite(sigma) || sigma <= 0.0) {
    throw ConfigError("invalid kernel parameter 'sigma': must be finite and > 0");
  }
  return KernelSpec(KernelKind::Rbf, sigma);
}

double KernelSpec::operator()(std::span<const double> x, std::span<const double> z) const {
  if (x.size() != z.size()) {
    throw ShapeError("kernel_eval: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                     std::to_string(z.size()) + ")");
  }
  double acc = 0.0;
  if (kind_ == KernelKind::Linear) {
    for (std::size_t j = 0; j < x.size(); ++j) acc += x[j] * z[j];
    return acc;
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - z[j];
    acc += d * d;
  }
  return std::exp(-acc / (sigma_ * sigma_));
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> z) {
  return spec(x, z);
}

GramMatrix::GramMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() == 0 || values_.rows() != values_.cols()) {
    throw ShapeError("GramMatrix: expected a non-empty square matrix");
  }
}

GramMatrix gram_matrix(const KernelSpec& spec, const Matrix& X) {
  if (X.rows() == 0) throw DomainError("gram_matrix: empty feature matrix");
  const Eigen::Index n = X.rows();
  Matrix values(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto xi = row_span(X, i);
    values(i, i) = spec(xi, xi);
    for (Eigen::Index k = i + 1; k < n; ++k) {
      const double v = spec(xi, row_span(X, k));
      values(i, k) = v;
      values(k, i) = v;
    }
  }
  return GramMatrix(std::move(values));
}

Vector kernel_row(const KernelSpec& spec, std::span<const double> x, const Matrix& X_train) {
  if (static_cast<Eigen::Index>(x.size()) != X_train.cols()) {
    throw ShapeError("kernel_row: feature dimension " + std::to_string(x.size()) +
                     " does not match training dimension " + std::to_string(X_train.cols()));
  }
  Vector out(X_train.rows());
  for (Eigen::Index k = 0; k < X_train.rows(); ++k) out(k) = spec(x, row_span(X_train, k));
  return out;
}

std::string_view to_string(KernelKind kind) noexcept {
  return kind == KernelKind::Rbf ? "rbf" : "linear";
}

std::optional<KernelKind> parse_kernel_kind(std::string_view name) noexcept {
  if (name == "rbf") return KernelKind::Rbf;
  if (name == "linear") return KernelKind::Linear;
  return std::nullopt;
}

}  // namespace helssvr
