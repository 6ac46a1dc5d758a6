#include "helssvr/model.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "helssvr/errors.hpp"

namespace helssvr {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

TrainedModel::TrainedModel(Vector alpha, Matrix x_train, KernelSpec kernel, LossSpec loss,
                           double C, ScalingState scaling)
    : alpha_(std::move(alpha)),
      x_train_(std::move(x_train)),
      kernel_(kernel),
      loss_(std::move(loss)),
      C_(C),
      scaling_(std::move(scaling)) {
  if (alpha_.size() != x_train_.rows()) {
    throw ShapeError("model: " + std::to_string(alpha_.size()) + " coefficients for " +
                     std::to_string(x_train_.rows()) + " training rows");
  }
  if (!alpha_.allFinite() || !x_train_.allFinite() || !std::isfinite(C_)) {
    throw DataError("model: non-finite stored value");
  }
  if (scaling_.mode != ScalingMode::None &&
      scaling_.feature_center.size() != static_cast<std::size_t>(x_train_.cols())) {
    throw ShapeError("model: scaling state does not match feature dimension");
  }
}

Vector TrainedModel::predict_scaled(const Matrix& X_scaled) const {
  if (X_scaled.cols() != x_train_.cols()) {
    throw ShapeError("predict: expected " + std::to_string(x_train_.cols()) +
                     " features, got " + std::to_string(X_scaled.cols()));
  }
  Vector out(X_scaled.rows());
  for (Eigen::Index q = 0; q < X_scaled.rows(); ++q) {
    out(q) = kernel_row(kernel_, row_span(X_scaled, q), x_train_).dot(alpha_);
  }
  return out;
}

Vector TrainedModel::predict(const Matrix& X_new) const {
  if (X_new.cols() != x_train_.cols()) {
    throw ShapeError("predict: expected " + std::to_string(x_train_.cols()) +
                     " features, got " + std::to_string(X_new.cols()));
  }
  return scaling_.inverse_targets(predict_scaled(scaling_.transform_features(X_new)));
}

FitResult fit(const Matrix& X, const Vector& y, const KernelSpec& kernel, const LossSpec& loss,
              double C, const AdamConfig& adam, ScalingMode scaling) {
  if (X.rows() == 0) throw DomainError("fit: empty training set");
  if (X.rows() != y.size()) throw ShapeError("fit: X and y row counts differ");
  if (!X.allFinite() || !y.allFinite()) throw DataError("fit: non-finite training data");
  if (!std::isfinite(C) || C <= 0.0) throw ConfigError("invalid model parameter 'C': must be > 0");
  adam.validate();

  ScalingState state = fit_scaling(X, y, scaling);
  Matrix xs = state.transform_features(X);
  const Vector ys = state.transform_targets(y);

  const auto gram_start = std::chrono::steady_clock::now();
  const GramMatrix gram = gram_matrix(kernel, xs);
  const double gram_seconds = seconds_since(gram_start);

  const auto train_start = std::chrono::steady_clock::now();
  TrainResult trained = train_adam(gram, ys, C, loss, adam);
  const double train_seconds = seconds_since(train_start);

  FitReport report;
  report.initial_objective = trained.initial_objective;
  report.final_objective = trained.final_objective;
  report.iterations = trained.iterations;
  report.wall_time_seconds = train_seconds;
  report.gram_seconds = gram_seconds;
  report.trace = std::move(trained.trace);
  return FitResult{TrainedModel(std::move(trained.alpha), std::move(xs), kernel, loss, C,
                                std::move(state)),
                   std::move(report)};
}

}  // namespace helssvr
