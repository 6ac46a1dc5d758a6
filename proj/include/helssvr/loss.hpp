#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace helssvr {

enum class LossKind {
  HawkEye,
  LeastSquares,
  Absolute,
  Huber,
  Insensitive,
  RampInsensitive,
  NonconvexLeastSquares,
  RampInsensitiveLeastSquares,
  QuadraticNonconvexInsensitive,
  Canal,
  BoundedLeastSquares,
};

/// Named loss hyperparameters: "epsilon", "a", "lambda", "theta", "t".
using LossParams = std::map<std::string, double, std::less<>>;

/// Qualitative characteristics of a loss (robust, insensitive zone, bounded,
/// convex, smooth). Stored as static metadata per kind.
struct LossCharacteristics {
  bool robust = false;
  bool insensitive_zone = false;
  bool bounded = false;
  bool convex = false;
  bool smooth = false;

  friend bool operator==(const LossCharacteristics&, const LossCharacteristics&) = default;
};

/// A validated, immutable loss function over a scalar residual r = y - f(x).
///
/// The HawkEye loss is
///
///   L(r) = lambda * [1 - (a(|r| - eps) + 1) * exp(-a(|r| - eps))]   for |r| >= eps
///   L(r) = 0                                                         otherwise
///
/// with eps > 0, a > 0, lambda > 0. It is zero inside the insensitive zone,
/// smooth everywhere, and saturates at lambda. The remaining kinds are the
/// usual regression baselines, parameterized with epsilon / theta / t.
///
/// Non-smooth kinds return the subgradient 0 at their kink points.
class LossSpec {
 public:
  /// Validates `params` against the domain of `kind`; throws ConfigError
  /// naming the offending parameter. Parameters the kind does not use are
  /// rejected too.
  static LossSpec make(LossKind kind, const LossParams& params = {});

  static LossSpec hawkeye(double epsilon, double a, double lambda);
  static LossSpec least_squares();
  static LossSpec absolute();
  static LossSpec huber(double theta);
  static LossSpec insensitive(double epsilon);
  static LossSpec ramp_insensitive(double epsilon, double theta);
  static LossSpec nonconvex_least_squares(double theta);
  static LossSpec ramp_insensitive_least_squares(double epsilon, double theta);
  static LossSpec quadratic_nonconvex_insensitive(double epsilon, double t, double theta);
  static LossSpec canal(double epsilon, double theta);
  static LossSpec bounded_least_squares(double theta, double t);

  LossKind kind() const noexcept { return kind_; }
  const LossParams& params() const noexcept { return params_; }
  /// Value of a parameter used by this kind; throws ConfigError otherwise.
  double param(std::string_view name) const;

  /// Throws DomainError for non-finite r.
  double value(double r) const;
  /// dL/dr; throws DomainError for non-finite r.
  double derivative(double r) const;

  LossCharacteristics characteristics() const noexcept;

 private:
  LossSpec(LossKind kind, LossParams params);

  LossKind kind_;
  LossParams params_;
  // Resolved copies of params_, read on the hot path.
  double epsilon_ = 0.0;
  double a_ = 0.0;
  double lambda_ = 0.0;
  double theta_ = 0.0;
  double t_ = 0.0;
};

inline double loss_value(const LossSpec& spec, double r) { return spec.value(r); }
inline double loss_derivative(const LossSpec& spec, double r) { return spec.derivative(r); }

LossCharacteristics characteristics(LossKind kind) noexcept;
inline LossCharacteristics characteristics(const LossSpec& spec) noexcept {
  return characteristics(spec.kind());
}

/// Parameter names a kind requires, in canonical order.
std::span<const std::string_view> loss_param_names(LossKind kind) noexcept;
bool loss_uses_param(LossKind kind, std::string_view name) noexcept;

std::string_view to_string(LossKind kind) noexcept;
/// Accepts the canonical short names ("hawkeye", "leastsquares", "huber", ...).
std::optional<LossKind> parse_loss_kind(std::string_view name) noexcept;
std::span<const LossKind> all_loss_kinds() noexcept;

}  // namespace helssvr
