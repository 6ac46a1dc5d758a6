#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "helssvr/kernel.hpp"
#include "helssvr/loss.hpp"
#include "helssvr/types.hpp"

namespace helssvr {

/// Where the stabilizing constant enters the parameter update.
///
/// InsideSqrt:  alpha -= gamma * m_hat / sqrt(v_hat + delta)
/// OutsideSqrt: alpha -= gamma * m_hat / (sqrt(v_hat) + delta)   (Kingma & Ba)
enum class DeltaPlacement { InsideSqrt, OutsideSqrt };

struct AdamConfig {
  double gamma = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double delta = 1e-8;
  std::size_t batch_size = 32;
  std::size_t max_iter = 1000;
  // Scalars broadcast to every coordinate of alpha, m and v.
  double alpha0 = 0.01;
  double m0 = 0.01;
  double v0 = 0.01;
  std::uint64_t seed = 0;
  DeltaPlacement delta_placement = DeltaPlacement::InsideSqrt;

  // Stop once |H_t - H_{t-1}| < early_stop_tol for early_stop_patience
  // consecutive iterations. Off by default: exactly max_iter steps run.
  bool early_stop = false;
  double early_stop_tol = 1e-10;
  std::size_t early_stop_patience = 20;

  bool record_trace = false;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

struct AdamState {
  Vector alpha;
  Vector m;
  Vector v;
  std::size_t t = 0;

  static AdamState initial(Eigen::Index n, const AdamConfig& cfg);
};

/// H(alpha) = 1/2 alpha' K alpha + C * sum_i L(xi_i),  xi = y - K alpha.
double objective_value(const Vector& alpha, const GramMatrix& gram, const Vector& y, double C,
                       const LossSpec& loss);

/// Gradient of H restricted to the loss terms in `batch`:
///
///   K alpha - C * loss_weight * sum_{i in batch} L'(xi_i) K_i
///
/// where xi uses the full expansion over all N training points and K_i is row
/// i of the Gram matrix. With batch = all indices and loss_weight = 1 this is
/// the exact gradient. Throws DomainError for an out-of-range index.
Vector objective_gradient(const Vector& alpha, const GramMatrix& gram, const Vector& y, double C,
                          const LossSpec& loss, std::span<const std::size_t> batch,
                          double loss_weight = 1.0);

/// One bias-corrected Adam update; increments state.t before correcting.
AdamState adam_step(AdamState state, const Vector& grad, const AdamConfig& cfg);

struct TrainResult {
  Vector alpha;
  std::size_t iterations = 0;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  /// Objective after each iteration, when cfg.record_trace is set.
  std::vector<double> trace;
};

/// Mini-batch Adam on H(alpha).
///
/// Each iteration draws min(batch_size, N) distinct indices uniformly at
/// random, evaluates the residuals of the drawn points against the full
/// kernel expansion, and forms the gradient with the exact regularizer term
/// plus the batch loss term rescaled by N / |batch| (an unbiased estimate of
/// the full loss gradient). When batch_size >= N every point is used every
/// iteration and the run is deterministic gradient descent with Adam scaling.
///
/// Bit-reproducible for a fixed cfg.seed. Throws DomainError when N = 0.
TrainResult train_adam(const GramMatrix& gram, const Vector& y, double C, const LossSpec& loss,
                       const AdamConfig& cfg);

std::string_view to_string(DeltaPlacement placement) noexcept;
std::optional<DeltaPlacement> parse_delta_placement(std::string_view name) noexcept;

}  // namespace helssvr
