#include "helssvr/optimizer.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "helssvr/errors.hpp"
#include "helssvr/random.hpp"

#if defined(__SSE2__)
#include <immintrin.h>
#endif

namespace helssvr {

namespace {

// Far-apart RBF pairs leave subnormal Gram entries, and arithmetic on them is
// very slow on x86. Treating subnormals as zero inside the training loop only
// changes values below 2.2e-308. Restores the caller's mode on exit.
class FlushSubnormals {
 public:
#if defined(__SSE2__)
  FlushSubnormals() noexcept : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushSubnormals() { _mm_setcsr(saved_); }

 private:
  unsigned saved_;
#endif
};

void require(bool ok, const char* field, const char* rule) {
  if (!ok) throw ConfigError(std::string("invalid adam parameter '") + field + "': " + rule);
}

void check_sizes(const GramMatrix& gram, const Vector& alpha, const Vector& y) {
  if (alpha.size() != gram.n() || y.size() != gram.n()) {
    throw ShapeError("objective: alpha, y and Gram matrix sizes differ");
  }
}

}  // namespace

void AdamConfig::validate() const {
  require(std::isfinite(gamma) && gamma > 0.0, "gamma", "must be > 0");
  require(beta1 >= 0.0 && beta1 < 1.0, "beta1", "must lie in [0, 1)");
  require(beta2 >= 0.0 && beta2 < 1.0, "beta2", "must lie in [0, 1)");
  require(std::isfinite(delta) && delta > 0.0, "delta", "must be > 0");
  require(batch_size >= 1, "batch_size", "must be >= 1");
  require(max_iter >= 1, "max_iter", "must be >= 1");
  require(std::isfinite(alpha0), "alpha0", "must be finite");
  require(std::isfinite(m0), "m0", "must be finite");
  require(std::isfinite(v0) && v0 >= 0.0, "v0", "must be finite and >= 0");
  require(std::isfinite(early_stop_tol) && early_stop_tol >= 0.0, "early_stop_tol",
          "must be >= 0");
  require(early_stop_patience >= 1, "early_stop_patience", "must be >= 1");
}

AdamState AdamState::initial(Eigen::Index n, const AdamConfig& cfg) {
  AdamState s;
  s.alpha = Vector::Constant(n, cfg.alpha0);
  s.m = Vector::Constant(n, cfg.m0);
  s.v = Vector::Constant(n, cfg.v0);
  s.t = 0;
  return s;
}

double objective_value(const Vector& alpha, const GramMatrix& gram, const Vector& y, double C,
                       const LossSpec& loss) {
  check_sizes(gram, alpha, y);
  const Vector k_alpha = gram.values() * alpha;
  double risk = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) risk += loss.value(y(i) - k_alpha(i));
  return 0.5 * alpha.dot(k_alpha) + C * risk;
}

Vector objective_gradient(const Vector& alpha, const GramMatrix& gram, const Vector& y, double C,
                          const LossSpec& loss, std::span<const std::size_t> batch,
                          double loss_weight) {
  check_sizes(gram, alpha, y);
  const auto n = static_cast<std::size_t>(gram.n());
  for (const std::size_t i : batch) {
    if (i >= n) {
      throw DomainError("objective_gradient: batch index " + std::to_string(i) +
                        " out of range for N = " + std::to_string(n));
    }
  }
  const Vector k_alpha = gram.values() * alpha;
  Vector grad = k_alpha;
  const double scale = C * loss_weight;
  for (const std::size_t i : batch) {
    const auto row = static_cast<Eigen::Index>(i);
    const double d = loss.derivative(y(row) - k_alpha(row));
    if (d != 0.0) grad.noalias() -= (scale * d) * gram.row(row).transpose();
  }
  return grad;
}

AdamState adam_step(AdamState state, const Vector& grad, const AdamConfig& cfg) {
  state.t += 1;
  const double t = static_cast<double>(state.t);
  state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad;
  state.v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  const auto m_hat = state.m.array() / c1;
  const auto v_hat = state.v.array() / c2;
  if (cfg.delta_placement == DeltaPlacement::InsideSqrt) {
    state.alpha.array() -= cfg.gamma * m_hat / (v_hat + cfg.delta).sqrt();
  } else {
    state.alpha.array() -= cfg.gamma * m_hat / (v_hat.sqrt() + cfg.delta);
  }
  return state;
}

TrainResult train_adam(const GramMatrix& gram, const Vector& y, double C, const LossSpec& loss,
                       const AdamConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(gram.n());
  if (n == 0) throw DomainError("train_adam: empty training set");
  if (static_cast<std::size_t>(y.size()) != n) {
    throw ShapeError("train_adam: target length does not match Gram matrix");
  }

  const FlushSubnormals flush;
  Rng rng(cfg.seed);
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  const std::size_t batch = std::min(cfg.batch_size, n);
  const double loss_weight = static_cast<double>(n) / static_cast<double>(batch);
  const bool full_batch = batch == n;

  AdamState state = AdamState::initial(gram.n(), cfg);
  TrainResult result;
  result.initial_objective = objective_value(state.alpha, gram, y, C, loss);
  const bool track = cfg.record_trace || cfg.early_stop;
  if (cfg.record_trace) result.trace.reserve(cfg.max_iter);

  double previous = result.initial_objective;
  std::size_t calm = 0;
  for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
    if (!full_batch) partial_shuffle(indices, batch, rng);
    const std::span<const std::size_t> drawn(indices.data(), batch);
    const Vector grad = objective_gradient(state.alpha, gram, y, C, loss, drawn, loss_weight);
    state = adam_step(std::move(state), grad, cfg);
    result.iterations = iter + 1;

    if (track) {
      const double h = objective_value(state.alpha, gram, y, C, loss);
      if (cfg.record_trace) result.trace.push_back(h);
      if (cfg.early_stop) {
        calm = std::abs(h - previous) < cfg.early_stop_tol ? calm + 1 : 0;
        if (calm >= cfg.early_stop_patience) break;
      }
      previous = h;
    }
  }
  result.final_objective =
      track ? previous : objective_value(state.alpha, gram, y, C, loss);
  result.alpha = std::move(state.alpha);
  return result;
}

std::string_view to_string(DeltaPlacement placement) noexcept {
  return placement == DeltaPlacement::InsideSqrt ? "inside_sqrt" : "outside_sqrt";
}

std::optional<DeltaPlacement> parse_delta_placement(std::string_view name) noexcept {
  if (name == "inside_sqrt") return DeltaPlacement::InsideSqrt;
  if (name == "outside_sqrt") return DeltaPlacement::OutsideSqrt;
  return std::nullopt;
}

}  // namespace helssvr
