#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "helssvr/data.hpp"
#include "helssvr/eval/grid_search.hpp"
#include "helssvr/eval/ranking.hpp"
#include "helssvr/kernel.hpp"
#include "helssvr/loss.hpp"
#include "helssvr/optimizer.hpp"

namespace helssvr::cli {

/// Where a value came from. Later layers win: flag > file > default.
enum class Layer { Default = 0, File = 1, Flag = 2 };

struct KeyInfo {
  std::string_view key;
  std::string_view default_value;
  std::string_view help;
};

/// Every recognized configuration key with its built-in default.
const std::vector<KeyInfo>& known_keys();

/// Flat key-value settings assembled from defaults, an optional config file
/// and command-line flags. Unknown keys are rejected with ConfigError.
class Config {
 public:
  Config();

  /// Sets `key` unless a higher layer already holds a value.
  void set(std::string_view key, std::string value, Layer layer);
  /// Parses "key = value" lines; '#' and ';' start comments. Throws IoError
  /// if unreadable, ConfigError for a malformed line or unknown key.
  void load_file(const std::filesystem::path& path);
  /// Parses one "key=value" assignment at flag level.
  void set_assignment(std::string_view assignment);

  const std::string& get(std::string_view key) const;
  Layer layer(std::string_view key) const;
  /// True when the value comes from a file or a flag.
  bool is_set(std::string_view key) const { return layer(key) != Layer::Default; }

  double get_double(std::string_view key) const;
  std::optional<double> get_optional_double(std::string_view key) const;
  std::size_t get_size(std::string_view key) const;
  std::uint64_t get_u64(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<double> get_double_list(std::string_view key) const;
  std::vector<std::string> get_string_list(std::string_view key) const;

 private:
  struct Entry {
    std::string value;
    Layer layer = Layer::Default;
  };
  const Entry& entry(std::string_view key) const;
  std::map<std::string, Entry, std::less<>> entries_;
};

// Typed views, each fully validated (ConfigError on any bad value).
std::uint64_t master_seed(const Config& cfg);
std::size_t thread_count(const Config& cfg);
ScalingMode scaling_mode(const Config& cfg);
AdamConfig adam_config(const Config& cfg);
KernelSpec kernel_spec(const Config& cfg);
double regularization_C(const Config& cfg);
/// loss.kind with its parameters; kinds with theta/t fall back to the recipe
/// defaults for those unless set explicitly.
LossSpec loss_spec(const Config& cfg);
/// Recipe for one loss kind name, with loss.theta / loss.t overrides.
ModelRecipe model_recipe(const Config& cfg, std::string_view loss_name);
GridSpec grid_spec(const Config& cfg);
SelectionCriterion selection_criterion(const Config& cfg);
RankOptions rank_options(const Config& cfg);
CsvOptions csv_options(const Config& cfg);
SyntheticSpec synthetic_spec(const Config& cfg);

}  // namespace helssvr::cli
