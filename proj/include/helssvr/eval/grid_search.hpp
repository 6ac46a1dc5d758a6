#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "helssvr/data.hpp"
#include "helssvr/eval/metrics.hpp"
#include "helssvr/kernel.hpp"
#include "helssvr/loss.hpp"
#include "helssvr/optimizer.hpp"

namespace helssvr {

/// Candidate values per hyperparameter axis plus the fold count. Axes are
/// deduplicated and sorted ascending before iteration; axes a recipe does not
/// use (epsilon for least squares, sigma for the linear kernel, ...) collapse
/// to a single unused entry.
struct GridSpec {
  std::vector<double> C_values{1.0};
  std::vector<double> sigma_values{1.0};
  std::vector<double> epsilon_values{0.05};
  std::vector<double> lambda_values{1.0};
  std::vector<double> a_values{1.0};
  std::vector<double> gamma_values{0.01};
  std::size_t k = 5;

  /// Throws ConfigError for an empty axis, a non-finite value or k < 2.
  void validate() const;

  /// C and sigma in {1e-6, 1e-4, ..., 1e6}, epsilon in {0.001, ..., 0.25},
  /// lambda in 0.1:0.2:1.9, a in 0.1:0.2:4.9, gamma in {1e-4, 1e-3, 1e-2}.
  static GridSpec full();
};

/// What is being tuned: a loss kind with any parameters that are not grid
/// axes (theta, t), and the kernel family.
struct ModelRecipe {
  std::string name;
  LossKind loss = LossKind::HawkEye;
  LossParams fixed_params;
  KernelKind kernel = KernelKind::Rbf;

  /// Recipe for `kind` with default values for its non-grid parameters.
  static ModelRecipe for_loss(LossKind kind);
};

/// One grid cell. Unused axes are empty.
struct Hyperparameters {
  double C = 1.0;
  std::optional<double> sigma;
  std::optional<double> epsilon;
  std::optional<double> lambda;
  std::optional<double> a;
  double gamma = 0.01;

  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

KernelSpec make_kernel(const ModelRecipe& recipe, const Hyperparameters& hp);
/// Throws ConfigError when the combination violates the loss domain.
LossSpec make_loss(const ModelRecipe& recipe, const Hyperparameters& hp);

/// Cartesian product in nested order C, sigma, epsilon, lambda, a, gamma
/// (gamma varies fastest).
std::vector<Hyperparameters> expand_grid(const GridSpec& grid, const ModelRecipe& recipe);

enum class SelectionCriterion { BestFold, MeanFold };

struct GridSearchOptions {
  /// Base optimizer settings; gamma and seed are overridden per cell.
  AdamConfig adam;
  ScalingMode scaling = ScalingMode::MinMax;
  SelectionCriterion criterion = SelectionCriterion::BestFold;
  std::size_t threads = 1;
  /// Fold assignment uses this seed directly; cell i trains with
  /// derive_seed(seed, i).
  std::uint64_t seed = 0;
};

struct FoldResult {
  MetricsReport metrics;
  /// Against the noise-free target when the dataset carries one.
  std::optional<MetricsReport> truth_metrics;
  double train_seconds = 0.0;
  double gram_seconds = 0.0;
};

struct GridCellResult {
  std::size_t index = 0;
  Hyperparameters hp;
  std::vector<FoldResult> folds;
  std::size_t best_fold = 0;
  double best_fold_rmse = 0.0;
  double mean_rmse = 0.0;
  /// best_fold_rmse or mean_rmse, per the selection criterion.
  double score = 0.0;
};

struct GridSearchResult {
  std::size_t best_index = 0;
  Hyperparameters best;
  double best_score = 0.0;
  /// One entry per cell in iteration order, independent of thread count.
  std::vector<GridCellResult> cells;
};

/// k-fold cross-validated grid search. Each cell is trained on k - 1 folds
/// and scored by held-out RMSE in target units; the minimal score wins and
/// ties go to the earliest cell. A cell whose fit produces non-finite
/// predictions scores +infinity. Throws DomainError when k exceeds the
/// dataset size, ConfigError for an invalid grid or recipe.
GridSearchResult grid_search_cv(const Dataset& ds, const GridSpec& grid, const ModelRecipe& recipe,
                                const GridSearchOptions& options);

std::string_view to_string(SelectionCriterion c) noexcept;
std::optional<SelectionCriterion> parse_selection_criterion(std::string_view name) noexcept;

}  // namespace helssvr
