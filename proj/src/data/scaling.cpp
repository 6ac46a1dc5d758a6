#include <cmath>

#include "helssvr/data.hpp"
#include "helssvr/errors.hpp"

namespace helssvr {

namespace {

std::pair<double, double> column_stats(const auto& column, ScalingMode mode) {
  const auto n = column.size();
  if (mode == ScalingMode::None || n == 0) return {0.0, 1.0};
  if (mode == ScalingMode::MinMax) {
    const double lo = column.minCoeff();
    const double hi = column.maxCoeff();
    return {lo, hi - lo};
  }
  const double mean = column.mean();
  double ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) ss += (column(i) - mean) * (column(i) - mean);
  return {mean, std::sqrt(ss / static_cast<double>(n))};
}

double forward(double x, double center, double spread) noexcept {
  return spread > 0.0 ? (x - center) / spread : 0.0;
}

double backward(double s, double center, double spread) noexcept {
  return spread > 0.0 ? s * spread + center : center;
}

}  // namespace

void Dataset::validate() const {
  if (X.rows() != y.size()) {
    throw ShapeError("dataset: " + std::to_string(X.rows()) + " feature rows but " +
                     std::to_string(y.size()) + " targets");
  }
  if (y_true && y_true->size() != y.size()) {
    throw ShapeError("dataset: noise-free target length differs from targets");
  }
  if (!feature_names.empty() && static_cast<Eigen::Index>(feature_names.size()) != X.cols()) {
    throw ShapeError("dataset: feature name count differs from column count");
  }
  if (!X.allFinite() || !y.allFinite() || (y_true && !y_true->allFinite())) {
    throw DataError("dataset: non-finite value");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.feature_names = feature_names;
  out.target_name = target_name;
  out.name = name;
  const auto n = static_cast<Eigen::Index>(rows.size());
  out.X.resize(n, X.cols());
  out.y.resize(n);
  if (y_true) out.y_true = Vector(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]);
    if (src >= X.rows()) throw DomainError("dataset subset: row index out of range");
    out.X.row(i) = X.row(src);
    out.y(i) = y(src);
    if (y_true) (*out.y_true)(i) = (*y_true)(src);
  }
  return out;
}

Matrix ScalingState::transform_features(const Matrix& X) const {
  if (mode == ScalingMode::None) return X;
  if (static_cast<std::size_t>(X.cols()) != feature_center.size()) {
    throw ShapeError("scaling: feature dimension mismatch");
  }
  Matrix out(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const auto c = feature_center[static_cast<std::size_t>(j)];
    const auto s = feature_spread[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < X.rows(); ++i) out(i, j) = forward(X(i, j), c, s);
  }
  return out;
}

Matrix ScalingState::inverse_features(const Matrix& X) const {
  if (mode == ScalingMode::None) return X;
  if (static_cast<std::size_t>(X.cols()) != feature_center.size()) {
    throw ShapeError("scaling: feature dimension mismatch");
  }
  Matrix out(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const auto c = feature_center[static_cast<std::size_t>(j)];
    const auto s = feature_spread[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < X.rows(); ++i) out(i, j) = backward(X(i, j), c, s);
  }
  return out;
}

Vector ScalingState::transform_targets(const Vector& y) const {
  if (mode == ScalingMode::None) return y;
  Vector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out(i) = forward(y(i), target_center, target_spread);
  return out;
}

Vector ScalingState::inverse_targets(const Vector& y) const {
  if (mode == ScalingMode::None) return y;
  Vector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out(i) = backward(y(i), target_center, target_spread);
  return out;
}

ScalingState fit_scaling(const Matrix& X, const Vector& y, ScalingMode mode) {
  ScalingState state;
  state.mode = mode;
  if (mode == ScalingMode::None) return state;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const auto [c, s] = column_stats(X.col(j), mode);
    state.feature_center.push_back(c);
    state.feature_spread.push_back(s);
  }
  const auto [c, s] = column_stats(y, mode);
  state.target_center = c;
  state.target_spread = s;
  return state;
}

std::pair<Dataset, ScalingState> scale_fit_transform(const Dataset& ds, ScalingMode mode) {
  ScalingState state = fit_scaling(ds.X, ds.y, mode);
  Dataset out = ds;
  out.X = state.transform_features(ds.X);
  out.y = state.transform_targets(ds.y);
  if (ds.y_true) out.y_true = state.transform_targets(*ds.y_true);
  return {std::move(out), std::move(state)};
}

std::string_view to_string(ScalingMode mode) noexcept {
  switch (mode) {
    case ScalingMode::None: return "none";
    case ScalingMode::MinMax: return "minmax";
    case ScalingMode::ZScore: return "zscore";
  }
  return "none";
}

std::optional<ScalingMode> parse_scaling_mode(std::string_view name) noexcept {
  if (name == "none") return ScalingMode::None;
  if (name == "minmax") return ScalingMode::MinMax;
  if (name == "zscore") return ScalingMode::ZScore;
  return std::nullopt;
}

}  // namespace helssvr
