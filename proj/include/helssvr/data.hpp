#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "helssvr/random.hpp"
#include "helssvr/types.hpp"

namespace helssvr {

/// Features X (N x m), targets y (N), and an optional noise-free target
/// vector for synthetic data.
struct Dataset {
  Matrix X;
  Vector y;
  std::vector<std::string> feature_names;
  std::string target_name = "y";
  std::string name;
  std::optional<Vector> y_true;

  Eigen::Index size() const noexcept { return X.rows(); }
  Eigen::Index dims() const noexcept { return X.cols(); }

  /// Throws ShapeError for inconsistent sizes and DataError for non-finite
  /// entries.
  void validate() const;

  /// Rows `rows`, in the given order.
  Dataset subset(std::span<const std::size_t> rows) const;
};

// ---------------------------------------------------------------------------
// CSV ingestion

struct CsvOptions {
  bool has_header = true;
  /// Header name or zero-based column index of the target; empty selects the
  /// last column other than the truth column.
  std::string target_column;
  char delimiter = ',';
  /// Column holding the noise-free target, kept out of the features when
  /// present. Ignored when the file has no such column.
  std::string truth_column = "y_true";
};

struct CsvLoadResult {
  Dataset dataset;
  std::size_t rejected_rows = 0;
  /// One-based line numbers of rows dropped for missing or non-numeric cells.
  std::vector<std::size_t> rejected_lines;
};

/// Parses a numeric CSV. Rows with an empty or non-numeric cell are rejected
/// and counted; a row with the wrong number of fields is a FormatError; no
/// usable rows is a DataError.
CsvLoadResult parse_csv(std::istream& in, const CsvOptions& options, std::string name = {});
/// Throws IoError when the file cannot be read.
CsvLoadResult load_csv(const std::filesystem::path& path, const CsvOptions& options);

/// Plain numeric table: optional header row, every other row parsed as
/// doubles with the same rules as parse_csv (no target extraction).
struct CsvTable {
  std::vector<std::string> header;
  Matrix values;
  std::size_t rejected_rows = 0;
};
CsvTable parse_feature_csv(std::istream& in, bool has_header, char delimiter);

// ---------------------------------------------------------------------------
// Scaling

enum class ScalingMode { None, MinMax, ZScore };

/// Per-column affine map x -> (x - center) / spread. For MinMax, center is
/// the column minimum and spread max - min; for ZScore, the mean and the
/// population standard deviation. A spread of 0 marks a constant column,
/// which maps to 0 and inverts to its center.
struct ScalingState {
  ScalingMode mode = ScalingMode::None;
  std::vector<double> feature_center;
  std::vector<double> feature_spread;
  double target_center = 0.0;
  double target_spread = 1.0;

  Matrix transform_features(const Matrix& X) const;
  Matrix inverse_features(const Matrix& X) const;
  Vector transform_targets(const Vector& y) const;
  Vector inverse_targets(const Vector& y) const;
};

/// Computes the state on (X, y); columns and targets are handled independently.
ScalingState fit_scaling(const Matrix& X, const Vector& y, ScalingMode mode);

/// Fits on ds and returns the scaled copy together with the state.
std::pair<Dataset, ScalingState> scale_fit_transform(const Dataset& ds, ScalingMode mode);

std::string_view to_string(ScalingMode mode) noexcept;
std::optional<ScalingMode> parse_scaling_mode(std::string_view name) noexcept;

// ---------------------------------------------------------------------------
// Cross-validation folds

/// k disjoint index sets partitioning [0, n), sizes differing by at most one,
/// shuffled by seed; each fold is sorted. Throws DomainError unless 2 <= k <= n.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Synthetic benchmarks

enum class NoiseKind { Gaussian, Uniform, StudentT };

enum class SamplingKind { UniformRandom, Grid };

struct SyntheticSpec {
  int function_id = 1;  // 1..5
  NoiseKind noise = NoiseKind::Gaussian;
  std::size_t n_samples = 500;
  std::uint64_t seed = 0;
  bool add_noise = true;
  SamplingKind sampling = SamplingKind::UniformRandom;

  /// Throws ConfigError for an unknown function id or n_samples = 0.
  void validate() const;
};

/// Noise-free benchmark function; F2 defines sin(3x)/(3x) as 1 at x = 0.
///   F1 sin x            on [0, 2 pi]
///   F2 sin(3x) / (3x)   on [-4, 4]
///   F3 sin x cos x^2    on [0, 2 pi]
///   F4 x cos x          on [-4, 4]
///   F5 (1 - x + 2x^2) exp(-x^2 / 2) on [-4, 4]
double synthetic_function(int function_id, double x);
std::pair<double, double> synthetic_domain(int function_id);

/// One noise draw: N(0, 0.2^2), U[-0.2, 0.2], or Student-t with 10 d.o.f.
double draw_noise(NoiseKind noise, Rng& rng);

/// Single-feature dataset "x" -> "y" with y_true filled in.
Dataset generate_synthetic(const SyntheticSpec& spec);

/// Writes columns x,y,y_true with round-trip precision.
void write_synthetic_csv(const Dataset& ds, std::ostream& out);

std::string_view to_string(NoiseKind noise) noexcept;
std::optional<NoiseKind> parse_noise_kind(std::string_view name) noexcept;

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace helssvr
