#include "helssvr/serialization.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helssvr/errors.hpp"

namespace helssvr {

using nlohmann::json;

namespace {

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector vector_from_json(const json& arr) {
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr.at(i).get<double>();
  return v;
}

}  // namespace

std::string model_to_json(const TrainedModel& model, const ModelMetadata& metadata) {
  json doc;
  doc["format"] = kModelFormatTag;

  json kernel;
  kernel["kind"] = to_string(model.kernel().kind());
  if (model.kernel().kind() == KernelKind::Rbf) kernel["sigma"] = model.kernel().sigma();
  doc["kernel"] = kernel;

  json loss;
  loss["kind"] = to_string(model.loss().kind());
  loss["params"] = json::object();
  for (const auto& [name, value] : model.loss().params()) loss["params"][name] = value;
  doc["loss"] = loss;

  doc["C"] = model.C();

  const ScalingState& s = model.scaling();
  doc["scaling"] = {{"mode", to_string(s.mode)},
                    {"feature_center", s.feature_center},
                    {"feature_spread", s.feature_spread},
                    {"target_center", s.target_center},
                    {"target_spread", s.target_spread}};

  const Matrix& x = model.x_train();
  doc["n_train"] = x.rows();
  doc["n_features"] = x.cols();
  json rows = json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < x.cols(); ++j) row.push_back(x(i, j));
    rows.push_back(std::move(row));
  }
  doc["x_train"] = std::move(rows);
  doc["alpha"] = vector_to_json(model.alpha());
  if (!metadata.feature_names.empty()) doc["feature_names"] = metadata.feature_names;
  if (!metadata.target_name.empty()) doc["target_name"] = metadata.target_name;
  return doc.dump(1) + "\n";
}

LoadedModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
  try {
    if (!doc.contains("format") || doc["format"].get<std::string>() != kModelFormatTag) {
      throw FormatError("model file: missing or unsupported format tag (expected " +
                        std::string(kModelFormatTag) + ")");
    }
    const auto& k = doc.at("kernel");
    const auto kernel_kind = parse_kernel_kind(k.at("kind").get<std::string>());
    if (!kernel_kind) throw FormatError("model file: unknown kernel kind");
    const KernelSpec kernel =
        *kernel_kind == KernelKind::Rbf ? KernelSpec::rbf(k.at("sigma").get<double>()) : KernelSpec::linear();

    const auto& l = doc.at("loss");
    const auto loss_kind = parse_loss_kind(l.at("kind").get<std::string>());
    if (!loss_kind) throw FormatError("model file: unknown loss kind");
    LossParams params;
    for (const auto& [name, value] : l.at("params").items()) params[name] = value.get<double>();
    LossSpec loss = LossSpec::make(*loss_kind, params);

    const auto& s = doc.at("scaling");
    ScalingState scaling;
    const auto mode = parse_scaling_mode(s.at("mode").get<std::string>());
    if (!mode) throw FormatError("model file: unknown scaling mode");
    scaling.mode = *mode;
    scaling.feature_center = s.at("feature_center").get<std::vector<double>>();
    scaling.feature_spread = s.at("feature_spread").get<std::vector<double>>();
    scaling.target_center = s.at("target_center").get<double>();
    scaling.target_spread = s.at("target_spread").get<double>();

    const auto n = doc.at("n_train").get<Eigen::Index>();
    const auto m = doc.at("n_features").get<Eigen::Index>();
    const auto& rows = doc.at("x_train");
    if (static_cast<Eigen::Index>(rows.size()) != n) throw FormatError("model file: x_train size mismatch");
    Matrix x(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = rows.at(static_cast<std::size_t>(i));
      if (static_cast<Eigen::Index>(row.size()) != m) throw FormatError("model file: ragged x_train");
      for (Eigen::Index j = 0; j < m; ++j) x(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
    }
    ModelMetadata meta;
    if (doc.contains("feature_names")) {
      meta.feature_names = doc["feature_names"].get<std::vector<std::string>>();
      if (static_cast<Eigen::Index>(meta.feature_names.size()) != m) {
        throw FormatError("model file: feature_names size mismatch");
      }
    }
    if (doc.contains("target_name")) meta.target_name = doc["target_name"].get<std::string>();
    return LoadedModel{TrainedModel(vector_from_json(doc.at("alpha")), std::move(x), kernel, std::move(loss),
                                    doc.at("C").get<double>(), std::move(scaling)),
                       std::move(meta)};
  } catch (const json::exception& e) {
    throw FormatError(std::string("model file: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path, const ModelMetadata& metadata) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << model_to_json(model, metadata);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace helssvr
