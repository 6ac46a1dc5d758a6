#include "helssvr/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "helssvr/data.hpp"
#include "helssvr/errors.hpp"
#include "helssvr/eval/grid_search.hpp"
#include "helssvr/eval/metrics.hpp"
#include "helssvr/eval/ranking.hpp"
#include "helssvr/model.hpp"
#include "helssvr/random.hpp"
#include "helssvr/serialization.hpp"

namespace helssvr::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

const std::string& require_path(const Config& cfg, std::string_view key, std::string_view flag) {
  const auto& v = cfg.get(key);
  if (v.empty()) throw ConfigError("missing " + std::string(flag) + " (config key '" + std::string(key) + "')");
  return v;
}

std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string metrics_fields(const MetricsReport& m) {
  return format_double(m.rmse) + "," + format_double(m.mae) + "," + opt_field(m.error_pos) + "," +
         opt_field(m.error_neg);
}

void warn_rejected(const CsvLoadResult& loaded, const std::string& what, std::ostream& err) {
  if (loaded.rejected_rows == 0) return;
  err << "warning: " << what << ": rejected " << loaded.rejected_rows << " row(s) with missing or non-numeric cells";
  const std::size_t show = std::min<std::size_t>(loaded.rejected_lines.size(), 5);
  err << " (line";
  for (std::size_t i = 0; i < show; ++i) err << (i ? ", " : " ") << loaded.rejected_lines[i];
  if (loaded.rejected_lines.size() > show) err << ", ...";
  err << ")\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// train

int cmd_train(const Config& cfg, std::ostream& out, std::ostream& err) {
  const fs::path data_path = require_path(cfg, "train.data", "--data");
  const fs::path model_path = require_path(cfg, "train.model", "--model");
  const CsvOptions csv = csv_options(cfg);
  const KernelSpec kernel = kernel_spec(cfg);
  const LossSpec loss = loss_spec(cfg);
  const double C = regularization_C(cfg);
  const AdamConfig adam = adam_config(cfg);
  const ScalingMode scaling = scaling_mode(cfg);

  const CsvLoadResult loaded = load_csv(data_path, csv);
  warn_rejected(loaded, data_path.string(), err);
  const Dataset& ds = loaded.dataset;

  const FitResult result = fit(ds.X, ds.y, kernel, loss, C, adam, scaling);
  save_model(result.model, model_path, ModelMetadata{ds.feature_names, ds.target_name});

  const FitReport& r = result.report;
  if (!cfg.get("trace").empty()) {
    auto trace = open_out(cfg.get("trace"));
    trace << "iter,objective\n0," << format_double(r.initial_objective) << "\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i) trace << i + 1 << "," << format_double(r.trace[i]) << "\n";
  }
  if (!cfg.get("train.report").empty()) {
    nlohmann::json rep = {{"initial_objective", r.initial_objective},
                          {"final_objective", r.final_objective},
                          {"iterations", r.iterations},
                          {"wall_time_seconds", r.wall_time_seconds},
                          {"gram_seconds", r.gram_seconds},
                          {"n_train", ds.size()},
                          {"n_features", ds.dims()}};
    open_out(cfg.get("train.report")) << rep.dump(1) << "\n";
  }
  out << "trained on " << ds.size() << " rows x " << ds.dims() << " features (" << to_string(loss.kind()) << " loss, "
      << to_string(kernel.kind()) << " kernel)\n"
      << "initial objective " << format_double(r.initial_objective) << "\n"
      << "final objective   " << format_double(r.final_objective) << "\n"
      << "iterations        " << r.iterations << "\n"
      << "train time        " << r.wall_time_seconds << " s (gram " << r.gram_seconds << " s)\n"
      << "model written to " << model_path.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// predict

int cmd_predict(const Config& cfg, std::ostream& out, std::ostream& err) {
  const fs::path model_path = require_path(cfg, "predict.model", "--model");
  const fs::path input_path = require_path(cfg, "predict.input", "--input");
  const CsvOptions csv = csv_options(cfg);

  const LoadedModel loaded = load_model(model_path);
  const TrainedModel& model = loaded.model;
  const auto dims = model.x_train().cols();

  std::ifstream in(input_path);
  if (!in) throw IoError("cannot open '" + input_path.string() + "'");
  const CsvTable table = parse_feature_csv(in, csv.has_header, csv.delimiter);
  if (table.rejected_rows > 0) {
    throw DataError(input_path.string() + ": " + std::to_string(table.rejected_rows) +
                    " row(s) with missing or non-numeric cells");
  }
  if (table.values.rows() == 0) throw DataError(input_path.string() + ": no rows to predict");

  Matrix X;
  const auto& names = loaded.metadata.feature_names;
  std::vector<Eigen::Index> cols;
  if (!table.header.empty() && !names.empty()) {
    for (const auto& name : names) {
      const auto it = std::find(table.header.begin(), table.header.end(), name);
      if (it == table.header.end()) break;
      cols.push_back(static_cast<Eigen::Index>(it - table.header.begin()));
    }
    if (cols.size() != names.size()) cols.clear();
  }
  if (!cols.empty()) {
    X.resize(table.values.rows(), static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index j = 0; j < X.cols(); ++j) X.col(j) = table.values.col(cols[static_cast<std::size_t>(j)]);
  } else if (table.values.cols() == dims) {
    X = table.values;
  } else {
    throw ShapeError(input_path.string() + ": model expects " + std::to_string(dims) + " feature(s), file has " +
                     std::to_string(table.values.cols()) + " column(s)");
  }

  const Vector pred = model.predict(X);
  std::ostringstream buffer;
  buffer << "prediction\n";
  for (Eigen::Index i = 0; i < pred.size(); ++i) buffer << format_double(pred(i)) << "\n";
  if (cfg.get("predict.output").empty()) {
    out << buffer.str();
  } else {
    open_out(cfg.get("predict.output")) << buffer.str();
    err << "wrote " << pred.size() << " predictions to " << cfg.get("predict.output") << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const Config& cfg, std::ostream& out, std::ostream& err) {
  SyntheticSpec spec = synthetic_spec(cfg);
  if (!cfg.get_bool("synth.all")) {
    const Dataset ds = generate_synthetic(spec);
    if (cfg.get("synth.out").empty()) {
      write_synthetic_csv(ds, out);
    } else {
      auto file = open_out(cfg.get("synth.out"));
      write_synthetic_csv(ds, file);
      err << "wrote " << ds.size() << " samples to " << cfg.get("synth.out") << "\n";
    }
    return kExitOk;
  }

  const fs::path dir = cfg.get("synth.out_dir");
  fs::create_directories(dir);
  const NoiseKind noises[] = {NoiseKind::Gaussian, NoiseKind::Uniform, NoiseKind::StudentT};
  const std::uint64_t master = spec.seed;
  std::uint64_t stream = 0;
  for (int f = 1; f <= 5; ++f) {
    for (const NoiseKind noise : noises) {
      spec.function_id = f;
      spec.noise = noise;
      spec.seed = derive_seed(master, stream++);
      const Dataset ds = generate_synthetic(spec);
      const fs::path path = dir / (ds.name + ".csv");
      auto file = open_out(path);
      write_synthetic_csv(ds, file);
      out << path.string() << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

namespace {

struct BenchRow {
  std::string dataset;
  std::string model;
  MetricsReport metrics;
  std::optional<MetricsReport> truth;
  double train_seconds = 0.0;
  double gram_seconds = 0.0;
};

std::vector<std::size_t> iota_vec(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace

int cmd_bench(const Config& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> datasets = cfg.get_string_list("bench.datasets");
  if (datasets.empty()) throw ConfigError("missing --data (config key 'bench.datasets')");
  const std::vector<std::string> recipe_names = cfg.get_string_list("bench.recipes");
  if (recipe_names.empty()) throw ConfigError("'bench.recipes' lists no models");
  const GridSpec grid = grid_spec(cfg);
  std::vector<ModelRecipe> recipes;
  for (const auto& name : recipe_names) {
    recipes.push_back(model_recipe(cfg, name));
    for (const auto& hp : expand_grid(grid, recipes.back())) {
      make_kernel(recipes.back(), hp);
      make_loss(recipes.back(), hp);
    }
  }
  const auto& mode = cfg.get("bench.mode");
  if (mode != "best_fold" && mode != "holdout") throw ConfigError("invalid value '" + mode + "' for 'bench.mode': expected best_fold or holdout");
  const bool holdout = mode == "holdout";
  const double test_fraction = cfg.get_double("bench.test_fraction");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("invalid value for 'bench.test_fraction': must lie in (0, 1)");
  }
  GridSearchOptions options;
  options.adam = adam_config(cfg);
  options.adam.record_trace = false;
  options.scaling = scaling_mode(cfg);
  options.criterion = selection_criterion(cfg);
  options.threads = thread_count(cfg);
  options.seed = master_seed(cfg);
  const CsvOptions csv = csv_options(cfg);
  const fs::path out_dir = cfg.get("bench.out_dir");

  std::vector<BenchRow> rows;
  std::vector<std::pair<std::string, std::string>> failures;
  std::ostringstream grid_csv;
  grid_csv << "dataset,model,cell,C,sigma,epsilon,lambda,a,gamma,best_fold,best_fold_rmse,mean_rmse,selected\n";

  for (const auto& path : datasets) {
    std::string name = fs::path(path).stem().string();
    try {
      const CsvLoadResult loaded = load_csv(path, csv);
      warn_rejected(loaded, path, err);
      const Dataset& full = loaded.dataset;
      name = full.name;

      Dataset train = full, test;
      if (holdout) {
        std::vector<std::size_t> order = iota_vec(static_cast<std::size_t>(full.size()));
        Rng rng(derive_seed(options.seed, 0x486f6c64ULL));
        partial_shuffle(order, order.size(), rng);
        const auto n = order.size();
        const auto n_test = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n))), 1, n - 1);
        std::vector<std::size_t> test_rows(order.begin(), order.begin() + static_cast<long>(n_test));
        std::vector<std::size_t> train_rows(order.begin() + static_cast<long>(n_test), order.end());
        std::sort(test_rows.begin(), test_rows.end());
        std::sort(train_rows.begin(), train_rows.end());
        test = full.subset(test_rows);
        train = full.subset(train_rows);
      }

      for (const auto& recipe : recipes) {
        const GridSearchResult gs = grid_search_cv(train, grid, recipe, options);
        for (const auto& cell : gs.cells) {
          const auto& hp = cell.hp;
          grid_csv << name << "," << recipe.name << "," << cell.index << "," << format_double(hp.C) << ","
                   << opt_field(hp.sigma) << "," << opt_field(hp.epsilon) << "," << opt_field(hp.lambda) << ","
                   << opt_field(hp.a) << "," << format_double(hp.gamma) << "," << cell.best_fold << ","
                   << format_double(cell.best_fold_rmse) << "," << format_double(cell.mean_rmse) << ","
                   << (cell.index == gs.best_index ? 1 : 0) << "\n";
        }
        BenchRow row{name, recipe.name, {}, std::nullopt, 0.0, 0.0};
        const GridCellResult& best = gs.cells[gs.best_index];
        if (!std::isfinite(best.score)) throw DataError("every grid cell diverged for model '" + recipe.name + "'");
        if (holdout) {
          AdamConfig adam = options.adam;
          adam.gamma = best.hp.gamma;
          adam.seed = derive_seed(options.seed, gs.cells.size());
          const FitResult fitted = fit(train.X, train.y, make_kernel(recipe, best.hp), make_loss(recipe, best.hp),
                                       best.hp.C, adam, options.scaling);
          const Vector pred = fitted.model.predict(test.X);
          row.metrics = compute_metrics(test.y, pred);
          if (test.y_true) row.truth = compute_metrics(*test.y_true, pred);
          row.train_seconds = fitted.report.wall_time_seconds;
          row.gram_seconds = fitted.report.gram_seconds;
        } else {
          const FoldResult& fold = best.folds[best.best_fold];
          row.metrics = fold.metrics;
          row.truth = fold.truth_metrics;
          row.train_seconds = fold.train_seconds;
          row.gram_seconds = fold.gram_seconds;
        }
        out << name << " / " << recipe.name << ": rmse " << format_double(row.metrics.rmse);
        if (row.truth) out << " (vs noise-free " << format_double(row.truth->rmse) << ")";
        out << "\n";
        rows.push_back(std::move(row));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      err << "error: " << path << ": " << e.what() << "\n";
      failures.emplace_back(path, e.what());
    }
  }

  fs::create_directories(out_dir);
  {
    auto f = open_out(out_dir / "results.csv");
    f << "dataset,model,rmse,mae,error_pos,error_neg,train_seconds\n";
    for (const auto& r : rows) f << r.dataset << "," << r.model << "," << metrics_fields(r.metrics) << "," << r.train_seconds << "\n";
  }
  {
    auto f = open_out(out_dir / "timing.csv");
    f << "dataset,model,train_seconds,gram_seconds\n";
    for (const auto& r : rows) f << r.dataset << "," << r.model << "," << r.train_seconds << "," << r.gram_seconds << "\n";
  }
  {
    auto f = open_out(out_dir / "metrics.csv");
    f << "dataset,model,rmse,mae,error_pos,error_neg\n";
    for (const auto& r : rows) f << r.dataset << "," << r.model << "," << metrics_fields(r.metrics) << "\n";
  }
  if (std::any_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.truth.has_value(); })) {
    auto f = open_out(out_dir / "truth_metrics.csv");
    f << "dataset,model,rmse,mae,error_pos,error_neg\n";
    for (const auto& r : rows) {
      if (r.truth) f << r.dataset << "," << r.model << "," << metrics_fields(*r.truth) << "\n";
    }
  }
  open_out(out_dir / "grid.csv") << grid_csv.str();
  if (!failures.empty()) {
    auto f = open_out(out_dir / "failures.csv");
    f << "dataset,error\n";
    for (const auto& [path, msg] : failures) f << path << ",\"" << msg << "\"\n";
  }
  out << rows.size() << " result row(s) written to " << (out_dir / "results.csv").string() << "\n";
  if (!failures.empty()) {
    err << failures.size() << " dataset(s) failed; see " << (out_dir / "failures.csv").string() << "\n";
    return kExitPartialFailure;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// rank

int cmd_rank(const Config& cfg, std::ostream& out, std::ostream& err) {
  const fs::path input = require_path(cfg, "rank.input", "--input");
  const RankOptions options = rank_options(cfg);
  std::ifstream in(input);
  if (!in) throw IoError("cannot open '" + input.string() + "'");
  const RankTable table = read_rank_table(in, cfg.get("rank.value_column"));
  const RankAnalysis analysis = rank_models(table, options);
  const std::string report = format_rank_report(analysis);
  out << report;
  for (const auto& w : analysis.warnings) err << "warning: " << w << "\n";
  if (!cfg.get("rank.out_dir").empty()) {
    const fs::path dir = cfg.get("rank.out_dir");
    fs::create_directories(dir);
    auto csv = open_out(dir / "rank.csv");
    write_rank_csv(analysis, csv);
    open_out(dir / "rank_report.txt") << report;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// entry point

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"helssvr: robust kernel regression with the HawkEye loss", "helssvr"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> assignments;
  // Dedicated flags are shorthands for config keys.
  std::vector<std::pair<std::string, std::string>> flags;
  auto key_option = [&flags](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    return sub->add_option_function<std::string>(
        name, [&flags, key](const std::string& v) { flags.emplace_back(key, v); }, help);
  };
  auto key_flag = [&flags](CLI::App* sub, const std::string& name, const std::string& key, const std::string& value,
                           const std::string& help) {
    return sub->add_flag_callback(name, [&flags, key, value] { flags.emplace_back(key, value); }, help);
  };

  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--set", assignments, "override a config key (key=value), repeatable");
  key_option(&app, "--seed", "seed", "master random seed");
  key_option(&app, "--threads", "threads", "worker threads (0 = all cores)");
  key_option(&app, "--trace", "trace", "write the objective trace CSV (iter,objective)");
  key_option(&app, "--scaling", "scaling", "none, minmax or zscore");

  CLI::App* train = app.add_subcommand("train", "fit a model on a CSV dataset");
  key_option(train, "--data,-d", "train.data", "training CSV (target = last column unless data.target)");
  key_option(train, "--model,-o", "train.model", "output model file");
  key_option(train, "--report", "train.report", "write the fit report as JSON");
  key_option(train, "--loss", "loss.kind", "loss kind");

  CLI::App* predict = app.add_subcommand("predict", "predict with a saved model");
  key_option(predict, "--model,-m", "predict.model", "model file");
  key_option(predict, "--input,-i", "predict.input", "feature CSV");
  key_option(predict, "--output,-o", "predict.output", "predictions CSV (default: stdout)");

  CLI::App* synth = app.add_subcommand("synth", "generate synthetic benchmark data");
  key_option(synth, "--function,-f", "synth.function", "benchmark function 1..5");
  key_option(synth, "--noise", "synth.noise", "gaussian, uniform or student");
  key_option(synth, "--n,-n", "synth.n", "number of samples");
  key_option(synth, "--sampling", "synth.sampling", "uniform or grid");
  key_flag(synth, "--no-noise", "synth.add_noise", "false", "emit noise-free targets");
  key_flag(synth, "--all", "synth.all", "true", "write all 15 function/noise datasets");
  key_option(synth, "--out,-o", "synth.out", "output CSV (default: stdout)");
  key_option(synth, "--out-dir", "synth.out_dir", "output directory for --all");

  CLI::App* bench = app.add_subcommand("bench", "grid-searched benchmark over datasets and models");
  std::vector<std::string> bench_data;
  bench->add_option("--data,-d", bench_data, "dataset CSV(s)");
  key_option(bench, "--recipes,-r", "bench.recipes", "comma-separated loss kinds");
  key_option(bench, "--mode", "bench.mode", "best_fold or holdout");
  key_option(bench, "--out-dir,-o", "bench.out_dir", "output directory");

  CLI::App* rank = app.add_subcommand("rank", "Friedman / Nemenyi analysis of a results table");
  key_option(rank, "--input,-i", "rank.input", "results CSV (long or wide)");
  key_option(rank, "--out-dir,-o", "rank.out_dir", "write rank.csv and rank_report.txt");
  key_option(rank, "--f-critical", "rank.f_critical", "critical F value");
  key_option(rank, "--q-alpha", "rank.q_alpha", "Nemenyi critical value");
  key_option(rank, "--ties", "rank.ties", "competition or average");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  Config cfg;
  try {
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& a : assignments) cfg.set_assignment(a);
    if (!bench_data.empty()) {
      std::string joined;
      for (const auto& d : bench_data) joined += (joined.empty() ? "" : ",") + d;
      flags.emplace_back("bench.datasets", joined);
    }
    for (const auto& [key, value] : flags) cfg.set(key, value, Layer::Flag);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const IoError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (train->parsed()) return cmd_train(cfg, out, err);
    if (predict->parsed()) return cmd_predict(cfg, out, err);
    if (synth->parsed()) return cmd_synth(cfg, out, err);
    if (bench->parsed()) return cmd_bench(cfg, out, err);
    if (rank->parsed()) return cmd_rank(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitConfigError;
}

}  // namespace helssvr::cli
