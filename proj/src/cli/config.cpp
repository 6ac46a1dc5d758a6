#include "helssvr/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <thread>

#include "helssvr/errors.hpp"

namespace helssvr::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(std::string_view key, const std::string& value, std::string_view expected) {
  throw ConfigError("invalid value '" + value + "' for '" + std::string(key) + "': expected " +
                    std::string(expected));
}

double parse_double(std::string_view key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) bad_value(key, text, "a finite number");
  return v;
}

std::uint64_t parse_u64(std::string_view key, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) bad_value(key, text, "a non-negative integer");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = trim(std::string_view(text).substr(start, comma == std::string::npos ? std::string::npos
                                                                                             : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

const std::vector<KeyInfo> kKeys = {
    {"seed", "0", "master random seed"},
    {"threads", "0", "worker threads for grid search (0 = all cores)"},
    {"scaling", "minmax", "feature/target scaling: none, minmax, zscore"},
    {"trace", "", "write the per-iteration objective to this CSV (train)"},

    {"loss.kind", "hawkeye", "loss function"},
    {"loss.epsilon", "0.05", "insensitive-zone half width"},
    {"loss.a", "1", "HawkEye shape parameter"},
    {"loss.lambda", "1", "HawkEye bound"},
    {"loss.theta", "", "theta for the huber/ramp/nonconvex/bounded losses"},
    {"loss.t", "", "t for qnonconvexinsensitive/boundedls"},

    {"kernel.kind", "rbf", "rbf or linear"},
    {"kernel.sigma", "1", "RBF width"},
    {"model.C", "100", "regularization parameter"},

    {"adam.gamma", "0.01", "learning rate"},
    {"adam.beta1", "0.9", "first-moment decay"},
    {"adam.beta2", "0.999", "second-moment decay"},
    {"adam.delta", "1e-8", "stabilizing constant"},
    {"adam.batch_size", "32", "mini-batch size"},
    {"adam.max_iter", "1000", "iterations"},
    {"adam.alpha0", "0.01", "initial coefficient value"},
    {"adam.m0", "0.01", "initial first moment"},
    {"adam.v0", "0.01", "initial second moment"},
    {"adam.seed", "", "optimizer seed (defaults to seed)"},
    {"adam.delta_placement", "inside_sqrt", "inside_sqrt or outside_sqrt"},
    {"adam.early_stop", "false", "stop when the objective stalls"},
    {"adam.early_stop_tol", "1e-10", "early-stop objective change threshold"},
    {"adam.early_stop_patience", "20", "early-stop consecutive iterations"},

    {"grid.preset", "desk", "desk or full; explicit grid.* lists override the preset"},
    {"grid.C", "1,100,10000", "C candidates"},
    {"grid.sigma", "0.1,1,10", "sigma candidates"},
    {"grid.epsilon", "0.05", "epsilon candidates"},
    {"grid.lambda", "1", "lambda candidates"},
    {"grid.a", "1,3", "a candidates"},
    {"grid.gamma", "0.01", "learning-rate candidates"},
    {"grid.k", "5", "cross-validation folds"},
    {"grid.criterion", "best_fold", "best_fold or mean"},

    {"data.has_header", "true", "CSV has a header row"},
    {"data.target", "", "target column name or index (default: last)"},
    {"data.delimiter", ",", "field delimiter (or comma, semicolon, tab)"},

    {"train.data", "", "training CSV"},
    {"train.model", "model.json", "output model file"},
    {"train.report", "", "optional fit report (JSON)"},

    {"predict.model", "", "model file"},
    {"predict.input", "", "feature CSV"},
    {"predict.output", "", "predictions CSV (default: stdout)"},

    {"synth.function", "1", "benchmark function 1..5"},
    {"synth.noise", "gaussian", "gaussian, uniform or student"},
    {"synth.n", "500", "samples"},
    {"synth.sampling", "uniform", "uniform or grid"},
    {"synth.add_noise", "true", "add noise to y"},
    {"synth.all", "false", "write all 15 function/noise combinations"},
    {"synth.out", "", "output CSV (default: stdout)"},
    {"synth.out_dir", "synthetic", "output directory with synth.all"},

    {"bench.datasets", "", "comma-separated CSV paths"},
    {"bench.recipes", "hawkeye,leastsquares", "comma-separated loss kinds"},
    {"bench.mode", "best_fold", "best_fold or holdout"},
    {"bench.test_fraction", "0.2", "held-out fraction in holdout mode"},
    {"bench.out_dir", "bench_out", "output directory"},

    {"rank.input", "", "results CSV (long or wide)"},
    {"rank.out_dir", "", "write rank.csv and rank_report.txt here"},
    {"rank.value_column", "rmse", "column ranked in a long table"},
    {"rank.ties", "competition", "competition or average"},
    {"rank.q_alpha", "0", "Nemenyi critical value (0 = table lookup)"},
    {"rank.f_critical", "", "critical F value for the Iman-Davenport test"},
    {"rank.truncate_decimals", "", "truncate average ranks to this many decimals"},
};

}  // namespace

const std::vector<KeyInfo>& known_keys() { return kKeys; }

Config::Config() {
  for (const auto& k : kKeys) entries_.emplace(std::string(k.key), Entry{std::string(k.default_value), Layer::Default});
}

void Config::set(std::string_view key, std::string value, Layer layer) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  if (layer >= it->second.layer) it->second = Entry{trim(value), layer};
}

void Config::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    try {
      set(key, t.substr(eq + 1), Layer::File);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void Config::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
  }
  set(trim(assignment.substr(0, eq)), std::string(assignment.substr(eq + 1)), Layer::Flag);
}

const Config::Entry& Config::entry(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  return it->second;
}

const std::string& Config::get(std::string_view key) const { return entry(key).value; }
Layer Config::layer(std::string_view key) const { return entry(key).layer; }

double Config::get_double(std::string_view key) const { return parse_double(key, get(key)); }

std::optional<double> Config::get_optional_double(std::string_view key) const {
  const auto& v = get(key);
  if (v.empty()) return std::nullopt;
  return parse_double(key, v);
}

std::size_t Config::get_size(std::string_view key) const {
  return static_cast<std::size_t>(parse_u64(key, get(key)));
}

std::uint64_t Config::get_u64(std::string_view key) const { return parse_u64(key, get(key)); }

bool Config::get_bool(std::string_view key) const {
  const auto& v = get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "true or false");
}

std::vector<double> Config::get_double_list(std::string_view key) const {
  std::vector<double> out;
  for (const auto& piece : split_list(get(key))) out.push_back(parse_double(key, piece));
  return out;
}

std::vector<std::string> Config::get_string_list(std::string_view key) const { return split_list(get(key)); }

std::uint64_t master_seed(const Config& cfg) { return cfg.get_u64("seed"); }

std::size_t thread_count(const Config& cfg) {
  const std::size_t n = cfg.get_size("threads");
  if (n > 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

ScalingMode scaling_mode(const Config& cfg) {
  const auto mode = parse_scaling_mode(cfg.get("scaling"));
  if (!mode) bad_value("scaling", cfg.get("scaling"), "none, minmax or zscore");
  return *mode;
}

AdamConfig adam_config(const Config& cfg) {
  AdamConfig a;
  a.gamma = cfg.get_double("adam.gamma");
  a.beta1 = cfg.get_double("adam.beta1");
  a.beta2 = cfg.get_double("adam.beta2");
  a.delta = cfg.get_double("adam.delta");
  a.batch_size = cfg.get_size("adam.batch_size");
  a.max_iter = cfg.get_size("adam.max_iter");
  a.alpha0 = cfg.get_double("adam.alpha0");
  a.m0 = cfg.get_double("adam.m0");
  a.v0 = cfg.get_double("adam.v0");
  a.seed = cfg.get("adam.seed").empty() ? master_seed(cfg) : cfg.get_u64("adam.seed");
  const auto placement = parse_delta_placement(cfg.get("adam.delta_placement"));
  if (!placement) bad_value("adam.delta_placement", cfg.get("adam.delta_placement"), "inside_sqrt or outside_sqrt");
  a.delta_placement = *placement;
  a.early_stop = cfg.get_bool("adam.early_stop");
  a.early_stop_tol = cfg.get_double("adam.early_stop_tol");
  a.early_stop_patience = cfg.get_size("adam.early_stop_patience");
  a.record_trace = !cfg.get("trace").empty();
  a.validate();
  return a;
}

KernelSpec kernel_spec(const Config& cfg) {
  const auto kind = parse_kernel_kind(cfg.get("kernel.kind"));
  if (!kind) bad_value("kernel.kind", cfg.get("kernel.kind"), "rbf or linear");
  if (*kind == KernelKind::Linear) return KernelSpec::linear();
  return KernelSpec::rbf(cfg.get_double("kernel.sigma"));
}

double regularization_C(const Config& cfg) {
  const double C = cfg.get_double("model.C");
  if (!(C > 0.0)) throw ConfigError("invalid model parameter 'C': must be > 0");
  return C;
}

ModelRecipe model_recipe(const Config& cfg, std::string_view loss_name) {
  const auto kind = parse_loss_kind(loss_name);
  if (!kind) throw ConfigError("unknown loss kind '" + std::string(loss_name) + "'");
  ModelRecipe recipe = ModelRecipe::for_loss(*kind);
  recipe.kernel = kernel_spec(cfg).kind();
  for (const char* name : {"theta", "t"}) {
    const std::string key = std::string("loss.") + name;
    if (loss_uses_param(*kind, name) && cfg.is_set(key)) recipe.fixed_params[name] = cfg.get_double(key);
  }
  return recipe;
}

LossSpec loss_spec(const Config& cfg) {
  const ModelRecipe recipe = model_recipe(cfg, cfg.get("loss.kind"));
  LossParams params = recipe.fixed_params;
  for (const char* name : {"epsilon", "a", "lambda"}) {
    if (loss_uses_param(recipe.loss, name)) params[name] = cfg.get_double(std::string("loss.") + name);
  }
  return LossSpec::make(recipe.loss, params);
}

GridSpec grid_spec(const Config& cfg) {
  const auto& preset = cfg.get("grid.preset");
  if (preset != "desk" && preset != "full") bad_value("grid.preset", preset, "desk or full");
  GridSpec g = preset == "full" ? GridSpec::full() : GridSpec{};
  const auto axis = [&](const char* key, std::vector<double>& dst) {
    if (preset == "desk" || cfg.is_set(key)) dst = cfg.get_double_list(key);
  };
  axis("grid.C", g.C_values);
  axis("grid.sigma", g.sigma_values);
  axis("grid.epsilon", g.epsilon_values);
  axis("grid.lambda", g.lambda_values);
  axis("grid.a", g.a_values);
  axis("grid.gamma", g.gamma_values);
  g.k = cfg.get_size("grid.k");
  g.validate();
  return g;
}

SelectionCriterion selection_criterion(const Config& cfg) {
  const auto c = parse_selection_criterion(cfg.get("grid.criterion"));
  if (!c) bad_value("grid.criterion", cfg.get("grid.criterion"), "best_fold or mean");
  return *c;
}

RankOptions rank_options(const Config& cfg) {
  RankOptions r;
  const auto& ties = cfg.get("rank.ties");
  if (ties == "competition") {
    r.ties = TieMethod::Competition;
  } else if (ties == "average") {
    r.ties = TieMethod::Average;
  } else {
    bad_value("rank.ties", ties, "competition or average");
  }
  r.q_alpha = cfg.get_double("rank.q_alpha");
  if (r.q_alpha < 0.0) bad_value("rank.q_alpha", cfg.get("rank.q_alpha"), "a value >= 0");
  r.f_critical = cfg.get_optional_double("rank.f_critical");
  if (!cfg.get("rank.truncate_decimals").empty()) {
    const std::size_t d = cfg.get_size("rank.truncate_decimals");
    if (d > 12) bad_value("rank.truncate_decimals", cfg.get("rank.truncate_decimals"), "0..12");
    r.truncate_decimals = static_cast<int>(d);
  }
  return r;
}

CsvOptions csv_options(const Config& cfg) {
  CsvOptions o;
  o.has_header = cfg.get_bool("data.has_header");
  o.target_column = cfg.get("data.target");
  const auto& d = cfg.get("data.delimiter");
  if (d == "comma" || d == ",") {
    o.delimiter = ',';
  } else if (d == "semicolon" || d == ";") {
    o.delimiter = ';';
  } else if (d == "tab" || d == "\\t") {
    o.delimiter = '\t';
  } else if (d.size() == 1) {
    o.delimiter = d[0];
  } else {
    bad_value("data.delimiter", d, "a single character, comma, semicolon or tab");
  }
  return o;
}

SyntheticSpec synthetic_spec(const Config& cfg) {
  SyntheticSpec s;
  const auto& f = cfg.get("synth.function");
  const std::uint64_t id = parse_u64("synth.function", f);
  if (id < 1 || id > 5) bad_value("synth.function", f, "1..5");
  s.function_id = static_cast<int>(id);
  const auto noise = parse_noise_kind(cfg.get("synth.noise"));
  if (!noise) bad_value("synth.noise", cfg.get("synth.noise"), "gaussian, uniform or student");
  s.noise = *noise;
  s.n_samples = cfg.get_size("synth.n");
  const auto& sampling = cfg.get("synth.sampling");
  if (sampling == "uniform") {
    s.sampling = SamplingKind::UniformRandom;
  } else if (sampling == "grid") {
    s.sampling = SamplingKind::Grid;
  } else {
    bad_value("synth.sampling", sampling, "uniform or grid");
  }
  s.add_noise = cfg.get_bool("synth.add_noise");
  s.seed = master_seed(cfg);
  s.validate();
  return s;
}

}  // namespace helssvr::cli
