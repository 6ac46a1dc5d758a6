#include "helssvr/eval/grid_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "helssvr/errors.hpp"
#include "helssvr/model.hpp"
#include "helssvr/parallel.hpp"
#include "helssvr/random.hpp"

namespace helssvr {

namespace {

void check_axis(const std::vector<double>& values, const char* name) {
  if (values.empty()) throw ConfigError(std::string("grid axis '") + name + "' is empty");
  for (const double v : values) {
    if (!std::isfinite(v)) throw ConfigError(std::string("grid axis '") + name + "' has a non-finite value");
  }
}

std::vector<double> canonical(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

// An unused axis contributes exactly one empty slot.
std::vector<std::optional<double>> axis(const std::vector<double>& values, bool used) {
  if (!used) return {std::nullopt};
  std::vector<std::optional<double>> out;
  for (const double v : canonical(values)) out.emplace_back(v);
  return out;
}

std::vector<double> powers_of_ten(int lo, int hi, int step) {
  std::vector<double> out;
  for (int i = lo; i <= hi; i += step) out.push_back(std::pow(10.0, i));
  return out;
}

std::vector<double> range(double lo, double step, double hi) {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = lo + step * i;
    if (v > hi + 1e-12) break;
    out.push_back(std::round(v * 1e10) / 1e10);
  }
  return out;
}

std::vector<std::size_t> complement(const std::vector<std::vector<std::size_t>>& folds,
                                    std::size_t held_out) {
  std::vector<std::size_t> rows;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f != held_out) rows.insert(rows.end(), folds[f].begin(), folds[f].end());
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

void GridSpec::validate() const {
  check_axis(C_values, "C");
  check_axis(sigma_values, "sigma");
  check_axis(epsilon_values, "epsilon");
  check_axis(lambda_values, "lambda");
  check_axis(a_values, "a");
  check_axis(gamma_values, "gamma");
  if (k < 2) throw ConfigError("invalid grid parameter 'k': must be >= 2");
}

GridSpec GridSpec::full() {
  GridSpec g;
  g.C_values = powers_of_ten(-6, 6, 2);
  g.sigma_values = powers_of_ten(-6, 6, 2);
  g.epsilon_values = {0.001, 0.005, 0.01, 0.05, 0.1, 0.15, 0.2, 0.25};
  g.lambda_values = range(0.1, 0.2, 2.0);
  g.a_values = range(0.1, 0.2, 5.0);
  g.gamma_values = {0.0001, 0.001, 0.01};
  g.k = 5;
  return g;
}

ModelRecipe ModelRecipe::for_loss(LossKind kind) {
  ModelRecipe r;
  r.name = std::string(to_string(kind));
  r.loss = kind;
  switch (kind) {
    case LossKind::Huber:
      r.fixed_params = {{"theta", 0.1}};
      break;
    case LossKind::NonconvexLeastSquares:
    case LossKind::RampInsensitive:
    case LossKind::RampInsensitiveLeastSquares:
    case LossKind::Canal:
      r.fixed_params = {{"theta", 0.5}};
      break;
    case LossKind::QuadraticNonconvexInsensitive:
      r.fixed_params = {{"t", 0.5}, {"theta", 0.5}};
      break;
    case LossKind::BoundedLeastSquares:
      r.fixed_params = {{"theta", 1.0}, {"t", 1.0}};
      break;
    default:
      break;
  }
  return r;
}

KernelSpec make_kernel(const ModelRecipe& recipe, const Hyperparameters& hp) {
  if (recipe.kernel == KernelKind::Linear) return KernelSpec::linear();
  if (!hp.sigma) throw ConfigError("RBF kernel requires 'sigma'");
  return KernelSpec::rbf(*hp.sigma);
}

LossSpec make_loss(const ModelRecipe& recipe, const Hyperparameters& hp) {
  LossParams params;
  for (const auto& [name, value] : recipe.fixed_params) {
    if (name == "epsilon" || name == "lambda" || name == "a") {
      throw ConfigError("loss parameter '" + name + "' is a grid axis, not a fixed parameter");
    }
    params[name] = value;
  }
  if (hp.epsilon) params["epsilon"] = *hp.epsilon;
  if (hp.lambda) params["lambda"] = *hp.lambda;
  if (hp.a) params["a"] = *hp.a;
  return LossSpec::make(recipe.loss, params);
}

std::vector<Hyperparameters> expand_grid(const GridSpec& grid, const ModelRecipe& recipe) {
  grid.validate();
  const auto Cs = canonical(grid.C_values);
  const auto sigmas = axis(grid.sigma_values, recipe.kernel == KernelKind::Rbf);
  const auto epsilons = axis(grid.epsilon_values, loss_uses_param(recipe.loss, "epsilon"));
  const auto lambdas = axis(grid.lambda_values, loss_uses_param(recipe.loss, "lambda"));
  const auto as = axis(grid.a_values, loss_uses_param(recipe.loss, "a"));
  const auto gammas = canonical(grid.gamma_values);

  std::vector<Hyperparameters> cells;
  cells.reserve(Cs.size() * sigmas.size() * epsilons.size() * lambdas.size() * as.size() *
                gammas.size());
  for (const double C : Cs)
    for (const auto& sigma : sigmas)
      for (const auto& eps : epsilons)
        for (const auto& lambda : lambdas)
          for (const auto& a : as)
            for (const double gamma : gammas) cells.push_back({C, sigma, eps, lambda, a, gamma});
  return cells;
}

GridSearchResult grid_search_cv(const Dataset& ds, const GridSpec& grid, const ModelRecipe& recipe,
                                const GridSearchOptions& options) {
  ds.validate();
  const auto n = static_cast<std::size_t>(ds.size());
  if (grid.k > n) {
    throw DomainError("grid search: " + std::to_string(grid.k) + " folds need at least as many rows, got " +
                      std::to_string(n));
  }
  const std::vector<Hyperparameters> cells = expand_grid(grid, recipe);
  // Surface invalid combinations before spending any time training.
  for (const auto& hp : cells) {
    make_kernel(recipe, hp);
    make_loss(recipe, hp);
    if (!(hp.C > 0.0)) throw ConfigError("invalid grid value for 'C': must be > 0");
    if (!(hp.gamma > 0.0)) throw ConfigError("invalid grid value for 'gamma': must be > 0");
  }
  options.adam.validate();

  const auto folds = kfold_split(n, grid.k, options.seed);
  std::vector<Dataset> train_sets, test_sets;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    train_sets.push_back(ds.subset(complement(folds, f)));
    test_sets.push_back(ds.subset(folds[f]));
  }

  GridSearchResult result;
  result.cells.resize(cells.size());
  parallel_for(cells.size(), options.threads, [&](std::size_t c) {
    GridCellResult& cell = result.cells[c];
    cell.index = c;
    cell.hp = cells[c];
    const KernelSpec kernel = make_kernel(recipe, cell.hp);
    const LossSpec loss = make_loss(recipe, cell.hp);
    AdamConfig adam = options.adam;
    adam.gamma = cell.hp.gamma;
    adam.record_trace = false;
    const std::uint64_t cell_seed = derive_seed(options.seed, c);

    double best = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      adam.seed = derive_seed(cell_seed, f);
      FoldResult fold;
      double rmse = std::numeric_limits<double>::infinity();
      try {
        const FitResult fitted =
            fit(train_sets[f].X, train_sets[f].y, kernel, loss, cell.hp.C, adam, options.scaling);
        const Vector pred = fitted.model.predict(test_sets[f].X);
        fold.train_seconds = fitted.report.wall_time_seconds;
        fold.gram_seconds = fitted.report.gram_seconds;
        if (pred.allFinite()) {
          fold.metrics = compute_metrics(test_sets[f].y, pred);
          if (test_sets[f].y_true) fold.truth_metrics = compute_metrics(*test_sets[f].y_true, pred);
          rmse = fold.metrics.rmse;
        }
      } catch (const DataError&) {
        // Diverged run: non-finite coefficients. Scored as +inf.
      }
      if (!std::isfinite(rmse)) {
        fold.metrics.rmse = rmse;
        fold.metrics.mae = rmse;
        fold.metrics.n = folds[f].size();
      }
      if (rmse < best) {
        best = rmse;
        cell.best_fold = f;
      }
      total += rmse;
      cell.folds.push_back(std::move(fold));
    }
    cell.best_fold_rmse = best;
    cell.mean_rmse = total / static_cast<double>(folds.size());
    cell.score = options.criterion == SelectionCriterion::BestFold ? cell.best_fold_rmse : cell.mean_rmse;
  });

  result.best_index = 0;
  result.best_score = std::numeric_limits<double>::infinity();
  for (const auto& cell : result.cells) {
    if (cell.score < result.best_score) {
      result.best_score = cell.score;
      result.best_index = cell.index;
    }
  }
  result.best = result.cells[result.best_index].hp;
  return result;
}

std::string_view to_string(SelectionCriterion c) noexcept {
  return c == SelectionCriterion::BestFold ? "best_fold" : "mean";
}

std::optional<SelectionCriterion> parse_selection_criterion(std::string_view name) noexcept {
  if (name == "best_fold") return SelectionCriterion::BestFold;
  if (name == "mean") return SelectionCriterion::MeanFold;
  return std::nullopt;
}

}  // namespace helssvr
