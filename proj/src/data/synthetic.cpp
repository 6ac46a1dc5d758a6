#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "helssvr/data.hpp"
#include "helssvr/errors.hpp"

namespace helssvr {

namespace {

constexpr double kNoiseScale = 0.2;
constexpr unsigned kStudentDof = 10;

double sinc3(double x) noexcept {
  const double u = 3.0 * x;
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  }
  return std::sin(u) / u;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (function_id < 1 || function_id > 5) {
    throw ConfigError("invalid synthetic function id " + std::to_string(function_id) +
                      " (expected 1..5)");
  }
  if (n_samples == 0) throw ConfigError("invalid synthetic sample count: must be > 0");
}

double synthetic_function(int function_id, double x) {
  switch (function_id) {
    case 1: return std::sin(x);
    case 2: return sinc3(x);
    case 3: return std::sin(x) * std::cos(x * x);
    case 4: return x * std::cos(x);
    case 5: return (1.0 - x + 2.0 * x * x) * std::exp(-x * x / 2.0);
    default: break;
  }
  throw ConfigError("invalid synthetic function id " + std::to_string(function_id));
}

std::pair<double, double> synthetic_domain(int function_id) {
  switch (function_id) {
    case 1:
    case 3: return {0.0, 2.0 * std::numbers::pi};
    case 2:
    case 4:
    case 5: return {-4.0, 4.0};
    default: break;
  }
  throw ConfigError("invalid synthetic function id " + std::to_string(function_id));
}

double draw_noise(NoiseKind noise, Rng& rng) {
  switch (noise) {
    case NoiseKind::Gaussian: return kNoiseScale * rng.normal();
    case NoiseKind::Uniform: return rng.uniform(-kNoiseScale, kNoiseScale);
    case NoiseKind::StudentT: return rng.student_t(kStudentDof);
  }
  return 0.0;
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const auto [lo, hi] = synthetic_domain(spec.function_id);
  const auto n = static_cast<Eigen::Index>(spec.n_samples);

  Dataset ds;
  ds.name = "F" + std::to_string(spec.function_id) + "_" + std::string(to_string(spec.noise));
  ds.feature_names = {"x"};
  ds.target_name = "y";
  ds.X.resize(n, 1);
  ds.y.resize(n);
  Vector truth(n);

  Rng x_rng(derive_seed(spec.seed, 0));
  Rng noise_rng(derive_seed(spec.seed, 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    double x = 0.0;
    if (spec.sampling == SamplingKind::Grid) {
      x = n == 1 ? 0.5 * (lo + hi)
                 : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    } else {
      x = x_rng.uniform(lo, hi);
    }
    const double f = synthetic_function(spec.function_id, x);
    ds.X(i, 0) = x;
    truth(i) = f;
    ds.y(i) = spec.add_noise ? f + draw_noise(spec.noise, noise_rng) : f;
  }
  ds.y_true = std::move(truth);
  return ds;
}

void write_synthetic_csv(const Dataset& ds, std::ostream& out) {
  if (ds.dims() != 1) throw ShapeError("write_synthetic_csv: expected a single feature");
  out << "x,y,y_true\n";
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    const double truth = ds.y_true ? (*ds.y_true)(i) : ds.y(i);
    out << format_double(ds.X(i, 0)) << ',' << format_double(ds.y(i)) << ','
        << format_double(truth) << '\n';
  }
}

std::string_view to_string(NoiseKind noise) noexcept {
  switch (noise) {
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Uniform: return "uniform";
    case NoiseKind::StudentT: return "student";
  }
  return "gaussian";
}

std::optional<NoiseKind> parse_noise_kind(std::string_view name) noexcept {
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "uniform") return NoiseKind::Uniform;
  if (name == "student") return NoiseKind::StudentT;
  return std::nullopt;
}

}  // namespace helssvr
