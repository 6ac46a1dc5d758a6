#pragma once

#include <vector>

#include "helssvr/data.hpp"
#include "helssvr/kernel.hpp"
#include "helssvr/loss.hpp"
#include "helssvr/optimizer.hpp"
#include "helssvr/types.hpp"

namespace helssvr {

/// A fitted kernel expansion f(x) = sum_k alpha_k K(x, x_k).
///
/// The retained training matrix holds the *scaled* features the kernel was
/// evaluated on; predict() scales new inputs with the stored state and maps
/// outputs back to target units. There is no separate bias term.
class TrainedModel {
 public:
  /// Throws ShapeError if alpha and x_train disagree in length, DataError if
  /// any stored value is non-finite.
  TrainedModel(Vector alpha, Matrix x_train, KernelSpec kernel, LossSpec loss, double C,
               ScalingState scaling);

  const Vector& alpha() const noexcept { return alpha_; }
  const Matrix& x_train() const noexcept { return x_train_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  const LossSpec& loss() const noexcept { return loss_; }
  double C() const noexcept { return C_; }
  const ScalingState& scaling() const noexcept { return scaling_; }

  /// Predictions in original target units; throws ShapeError on a feature
  /// dimension mismatch.
  Vector predict(const Matrix& X_new) const;
  /// The kernel expansion on already-scaled inputs, in scaled target units.
  Vector predict_scaled(const Matrix& X_scaled) const;

 private:
  Vector alpha_;
  Matrix x_train_;
  KernelSpec kernel_;
  LossSpec loss_;
  double C_;
  ScalingState scaling_;
};

struct FitReport {
  double initial_objective = 0.0;
  double final_objective = 0.0;
  std::size_t iterations = 0;
  /// Wall time of the optimizer alone.
  double wall_time_seconds = 0.0;
  /// Wall time of the Gram matrix construction, reported separately.
  double gram_seconds = 0.0;
  std::vector<double> trace;
};

struct FitResult {
  TrainedModel model;
  FitReport report;
};

/// Scales (X, y) with `scaling` fitted on this data, builds the Gram matrix,
/// and minimizes the regularized empirical risk with mini-batch Adam.
/// Throws DomainError for N = 0, DataError for non-finite data, ConfigError
/// for an invalid C or Adam configuration.
FitResult fit(const Matrix& X, const Vector& y, const KernelSpec& kernel, const LossSpec& loss,
              double C, const AdamConfig& adam, ScalingMode scaling = ScalingMode::MinMax);

inline Vector predict(const TrainedModel& model, const Matrix& X_new) {
  return model.predict(X_new);
}

}  // namespace helssvr
