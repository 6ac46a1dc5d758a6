#include "helssvr/loss.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "helssvr/errors.hpp"

namespace helssvr {

namespace {

// Beyond this exponent the saturating tail is below double resolution of
// the bound, so the loss equals lambda and the derivative is 0.
constexpr double kMaxExponent = 700.0;

constexpr std::array kAllKinds = {
    LossKind::HawkEye,
    LossKind::LeastSquares,
    LossKind::Absolute,
    LossKind::Huber,
    LossKind::Insensitive,
    LossKind::RampInsensitive,
    LossKind::NonconvexLeastSquares,
    LossKind::RampInsensitiveLeastSquares,
    LossKind::QuadraticNonconvexInsensitive,
    LossKind::Canal,
    LossKind::BoundedLeastSquares,
};

constexpr std::array<std::string_view, 3> kHawkEyeParams = {"epsilon", "a", "lambda"};
constexpr std::array<std::string_view, 1> kThetaParams = {"theta"};
constexpr std::array<std::string_view, 1> kEpsilonParams = {"epsilon"};
constexpr std::array<std::string_view, 2> kEpsilonThetaParams = {"epsilon", "theta"};
constexpr std::array<std::string_view, 3> kQniParams = {"epsilon", "t", "theta"};
constexpr std::array<std::string_view, 2> kBlsParams = {"theta", "t"};

double sign(double r) noexcept { return r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0); }

// 1 - (1 + z) e^{-z} for z >= 0, accurate near z = 0 where the closed form
// cancels.
double saturating_profile(double z) noexcept {
  if (z > kMaxExponent) return 1.0;
  if (z < 0.25) {
    // sum_{k>=2} (-1)^k (k-1) z^k / k!
    double power_over_fact = z;  // z^k / k! at k = 1
    double sum = 0.0;
    for (int k = 2; k < 30; ++k) {
      power_over_fact *= z / k;
      const double term = (k - 1) * power_over_fact;
      sum += (k % 2 == 0) ? term : -term;
      if (term < 1e-18 * sum) break;
    }
    return sum;
  }
  return 1.0 - (1.0 + z) * std::exp(-z);
}

void require_finite(double r, const char* what) {
  if (!std::isfinite(r)) {
    throw DomainError(std::string(what) + ": residual must be finite");
  }
}

double lookup(const LossParams& params, std::string_view name) {
  const auto it = params.find(name);
  return it == params.end() ? 0.0 : it->second;
}

void check(bool ok, LossKind kind, std::string_view name, const char* rule) {
  if (!ok) {
    throw ConfigError("invalid " + std::string(to_string(kind)) + " loss parameter '" +
                      std::string(name) + "': must satisfy " + rule);
  }
}

}  // namespace

LossSpec::LossSpec(LossKind kind, LossParams params)
    : kind_(kind),
      params_(std::move(params)),
      epsilon_(lookup(params_, "epsilon")),
      a_(lookup(params_, "a")),
      lambda_(lookup(params_, "lambda")),
      theta_(lookup(params_, "theta")),
      t_(lookup(params_, "t")) {}

LossSpec LossSpec::make(LossKind kind, const LossParams& params) {
  const auto names = loss_param_names(kind);
  for (const auto& [name, value] : params) {
    if (!loss_uses_param(kind, name)) {
      throw ConfigError("loss '" + std::string(to_string(kind)) + "' does not take parameter '" +
                        name + "'");
    }
    check(std::isfinite(value), kind, name, "finite value");
  }
  LossParams resolved;
  for (const auto name : names) {
    const auto it = params.find(name);
    if (it == params.end()) {
      throw ConfigError("loss '" + std::string(to_string(kind)) + "' requires parameter '" +
                        std::string(name) + "'");
    }
    resolved.emplace(std::string(name), it->second);
  }

  const double eps = lookup(resolved, "epsilon");
  const double theta = lookup(resolved, "theta");
  const double t = lookup(resolved, "t");
  switch (kind) {
    case LossKind::HawkEye:
      check(eps > 0.0, kind, "epsilon", "epsilon > 0");
      check(lookup(resolved, "a") > 0.0, kind, "a", "a > 0");
      check(lookup(resolved, "lambda") > 0.0, kind, "lambda", "lambda > 0");
      break;
    case LossKind::LeastSquares:
    case LossKind::Absolute:
      break;
    case LossKind::Huber:
    case LossKind::NonconvexLeastSquares:
      check(theta >= 0.0, kind, "theta", "theta >= 0");
      break;
    case LossKind::Insensitive:
      check(eps >= 0.0, kind, "epsilon", "epsilon >= 0");
      break;
    case LossKind::RampInsensitive:
    case LossKind::RampInsensitiveLeastSquares:
    case LossKind::Canal:
      check(eps >= 0.0, kind, "epsilon", "epsilon >= 0");
      check(theta >= eps, kind, "theta", "theta >= epsilon");
      break;
    case LossKind::QuadraticNonconvexInsensitive:
      check(eps >= 0.0, kind, "epsilon", "epsilon >= 0");
      check(t >= eps, kind, "t", "t >= epsilon");
      check(theta >= 0.0, kind, "theta", "theta >= 0");
      break;
    case LossKind::BoundedLeastSquares:
      check(theta >= 0.0, kind, "theta", "theta >= 0");
      check(t > 0.0, kind, "t", "t > 0");
      break;
  }
  return LossSpec(kind, std::move(resolved));
}

LossSpec LossSpec::hawkeye(double epsilon, double a, double lambda) {
  return make(LossKind::HawkEye, {{"epsilon", epsilon}, {"a", a}, {"lambda", lambda}});
}
LossSpec LossSpec::least_squares() { return make(LossKind::LeastSquares); }
LossSpec LossSpec::absolute() { return make(LossKind::Absolute); }
LossSpec LossSpec::huber(double theta) { return make(LossKind::Huber, {{"theta", theta}}); }
LossSpec LossSpec::insensitive(double epsilon) {
  return make(LossKind::Insensitive, {{"epsilon", epsilon}});
}
LossSpec LossSpec::ramp_insensitive(double epsilon, double theta) {
  return make(LossKind::RampInsensitive, {{"epsilon", epsilon}, {"theta", theta}});
}
LossSpec LossSpec::nonconvex_least_squares(double theta) {
  return make(LossKind::NonconvexLeastSquares, {{"theta", theta}});
}
LossSpec LossSpec::ramp_insensitive_least_squares(double epsilon, double theta) {
  return make(LossKind::RampInsensitiveLeastSquares, {{"epsilon", epsilon}, {"theta", theta}});
}
LossSpec LossSpec::quadratic_nonconvex_insensitive(double epsilon, double t, double theta) {
  return make(LossKind::QuadraticNonconvexInsensitive,
              {{"epsilon", epsilon}, {"t", t}, {"theta", theta}});
}
LossSpec LossSpec::canal(double epsilon, double theta) {
  return make(LossKind::Canal, {{"epsilon", epsilon}, {"theta", theta}});
}
LossSpec LossSpec::bounded_least_squares(double theta, double t) {
  return make(LossKind::BoundedLeastSquares, {{"theta", theta}, {"t", t}});
}

double LossSpec::param(std::string_view name) const {
  const auto it = params_.find(name);
  if (it == params_.end()) {
    throw ConfigError("loss '" + std::string(to_string(kind_)) + "' has no parameter '" +
                      std::string(name) + "'");
  }
  return it->second;
}

double LossSpec::value(double r) const {
  require_finite(r, "loss_value");
  const double abs_r = std::abs(r);
  switch (kind_) {
    case LossKind::HawkEye: {
      const double excess = abs_r - epsilon_;
      if (excess <= 0.0) return 0.0;
      return lambda_ * saturating_profile(a_ * excess);
    }
    case LossKind::LeastSquares:
      return r * r;
    case LossKind::Absolute:
      return abs_r;
    case LossKind::Huber:
      return abs_r >= theta_ ? theta_ * abs_r - 0.5 * theta_ * theta_ : 0.5 * r * r;
    case LossKind::Insensitive:
      return std::max(0.0, abs_r - epsilon_);
    case LossKind::RampInsensitive:
    case LossKind::Canal:
      return std::min(theta_ - epsilon_, std::max(0.0, abs_r - epsilon_));
    case LossKind::NonconvexLeastSquares:
      return abs_r <= theta_ ? r * r : theta_ * theta_;
    case LossKind::RampInsensitiveLeastSquares: {
      if (abs_r < epsilon_) return 0.0;
      const double capped = std::min(abs_r, theta_) - epsilon_;
      return capped * capped;
    }
    case LossKind::QuadraticNonconvexInsensitive: {
      if (abs_r < epsilon_) return 0.0;
      if (abs_r <= t_) return (abs_r - epsilon_) * (abs_r - epsilon_);
      return (t_ - epsilon_) * (t_ - epsilon_) + theta_ * abs_r - theta_ * t_;
    }
    case LossKind::BoundedLeastSquares:
      return (1.0 - 1.0 / (1.0 + theta_ * r * r)) / t_;
  }
  return 0.0;
}

double LossSpec::derivative(double r) const {
  require_finite(r, "loss_derivative");
  const double abs_r = std::abs(r);
  const double s = sign(r);
  switch (kind_) {
    case LossKind::HawkEye: {
      const double excess = abs_r - epsilon_;
      if (excess <= 0.0) return 0.0;
      const double z = a_ * excess;
      if (z > kMaxExponent) return 0.0;
      return s * lambda_ * a_ * a_ * excess * std::exp(-z);
    }
    case LossKind::LeastSquares:
      return 2.0 * r;
    case LossKind::Absolute:
      return s;
    case LossKind::Huber:
      return abs_r >= theta_ ? s * theta_ : r;
    case LossKind::Insensitive:
      return abs_r > epsilon_ ? s : 0.0;
    case LossKind::RampInsensitive:
    case LossKind::Canal:
      return (abs_r > epsilon_ && abs_r < theta_) ? s : 0.0;
    case LossKind::NonconvexLeastSquares:
      return abs_r < theta_ ? 2.0 * r : 0.0;
    case LossKind::RampInsensitiveLeastSquares:
      return (abs_r > epsilon_ && abs_r < theta_) ? 2.0 * s * (abs_r - epsilon_) : 0.0;
    case LossKind::QuadraticNonconvexInsensitive:
      if (abs_r > epsilon_ && abs_r < t_) return 2.0 * s * (abs_r - epsilon_);
      if (abs_r > t_) return s * theta_;
      return 0.0;
    case LossKind::BoundedLeastSquares: {
      const double denom = 1.0 + theta_ * r * r;
      return 2.0 * theta_ * r / (t_ * denom * denom);
    }
  }
  return 0.0;
}

LossCharacteristics LossSpec::characteristics() const noexcept {
  return helssvr::characteristics(kind_);
}

LossCharacteristics characteristics(LossKind kind) noexcept {
  //                 robust  zone   bounded convex smooth
  switch (kind) {
    case LossKind::LeastSquares:
      return {false, false, false, true, true};
    case LossKind::Absolute:
      return {false, false, false, true, false};
    case LossKind::Huber:
      return {false, false, false, true, true};
    case LossKind::Insensitive:
      return {false, true, false, true, false};
    case LossKind::RampInsensitive:
      return {true, true, true, false, false};
    case LossKind::NonconvexLeastSquares:
      return {true, false, true, false, false};
    case LossKind::RampInsensitiveLeastSquares:
      return {true, true, true, false, false};
    case LossKind::QuadraticNonconvexInsensitive:
      return {true, true, true, false, false};
    case LossKind::Canal:
      return {true, true, true, false, false};
    case LossKind::BoundedLeastSquares:
      return {true, false, true, false, true};
    case LossKind::HawkEye:
      return {true, true, true, false, true};
  }
  return {};
}

std::span<const std::string_view> loss_param_names(LossKind kind) noexcept {
  switch (kind) {
    case LossKind::HawkEye:
      return kHawkEyeParams;
    case LossKind::LeastSquares:
    case LossKind::Absolute:
      return {};
    case LossKind::Huber:
    case LossKind::NonconvexLeastSquares:
      return kThetaParams;
    case LossKind::Insensitive:
      return kEpsilonParams;
    case LossKind::RampInsensitive:
    case LossKind::RampInsensitiveLeastSquares:
    case LossKind::Canal:
      return kEpsilonThetaParams;
    case LossKind::QuadraticNonconvexInsensitive:
      return kQniParams;
    case LossKind::BoundedLeastSquares:
      return kBlsParams;
  }
  return {};
}

bool loss_uses_param(LossKind kind, std::string_view name) noexcept {
  for (const auto n : loss_param_names(kind)) {
    if (n == name) return true;
  }
  return false;
}

std::string_view to_string(LossKind kind) noexcept {
  switch (kind) {
    case LossKind::HawkEye: return "hawkeye";
    case LossKind::LeastSquares: return "leastsquares";
    case LossKind::Absolute: return "absolute";
    case LossKind::Huber: return "huber";
    case LossKind::Insensitive: return "insensitive";
    case LossKind::RampInsensitive: return "rampinsensitive";
    case LossKind::NonconvexLeastSquares: return "nonconvexls";
    case LossKind::RampInsensitiveLeastSquares: return "rampinsensitivels";
    case LossKind::QuadraticNonconvexInsensitive: return "qnonconvexinsensitive";
    case LossKind::Canal: return "canal";
    case LossKind::BoundedLeastSquares: return "boundedls";
  }
  return "unknown";
}

std::optional<LossKind> parse_loss_kind(std::string_view name) noexcept {
  for (const auto kind : kAllKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::span<const LossKind> all_loss_kinds() noexcept { return kAllKinds; }

}  // namespace helssvr
