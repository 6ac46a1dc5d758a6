#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "helssvr/model.hpp"

namespace helssvr {

inline constexpr std::string_view kModelFormatTag = "helssvr-model-v1";

/// Optional column names carried alongside the model so that prediction can
/// pick features out of a CSV that also holds targets.
struct ModelMetadata {
  std::vector<std::string> feature_names;
  std::string target_name;
};

struct LoadedModel {
  TrainedModel model;
  ModelMetadata metadata;
};

/// Self-describing JSON document holding kernel, loss, C, scaling state,
/// retained training matrix and coefficients. Doubles are written in their
/// shortest round-trip form, so save -> load -> predict is bit-exact and the
/// same model always serializes to the same bytes.
std::string model_to_json(const TrainedModel& model, const ModelMetadata& metadata = {});
/// Throws FormatError for a missing/unknown format tag or malformed content.
LoadedModel model_from_json(std::string_view text);

void save_model(const TrainedModel& model, const std::filesystem::path& path,
                const ModelMetadata& metadata = {});
/// Throws IoError if unreadable, FormatError if malformed.
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace helssvr
