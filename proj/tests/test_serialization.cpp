#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helssvr/data.hpp"
#include "helssvr/errors.hpp"
#include "helssvr/model.hpp"
#include "helssvr/serialization.hpp"

namespace helssvr {
namespace {

FitResult small_fit(ScalingMode scaling, const LossSpec& loss) {
  SyntheticSpec spec;
  spec.function_id = 3;
  spec.n_samples = 25;
  spec.seed = 4;
  const Dataset ds = generate_synthetic(spec);
  AdamConfig adam;
  adam.max_iter = 100;
  return fit(ds.X, ds.y, KernelSpec::rbf(0.2), loss, 50.0, adam, scaling);
}

TEST(Serialization, RoundTripIsBitExact) {
  for (const ScalingMode mode : {ScalingMode::None, ScalingMode::MinMax, ScalingMode::ZScore}) {
    const FitResult r = small_fit(mode, LossSpec::hawkeye(0.05, 1.7, 0.9));
    const std::string text = model_to_json(r.model, {{"x"}, "y"});
    const LoadedModel back = model_from_json(text);
    EXPECT_EQ(back.metadata.feature_names, std::vector<std::string>{"x"});
    EXPECT_EQ(back.metadata.target_name, "y");
    EXPECT_EQ(back.model.scaling().mode, mode);
    EXPECT_EQ(back.model.loss().kind(), LossKind::HawkEye);
    EXPECT_EQ(back.model.loss().param("a"), 1.7);
    EXPECT_EQ(back.model.C(), 50.0);
    EXPECT_EQ(back.model.kernel().sigma(), 0.2);

    Matrix Xn(50, 1);
    for (Eigen::Index i = 0; i < 50; ++i) Xn(i, 0) = -1.0 + 0.15 * static_cast<double>(i);
    const Vector f1 = r.model.predict(Xn);
    const Vector f2 = back.model.predict(Xn);
    for (Eigen::Index i = 0; i < 50; ++i) ASSERT_EQ(f1(i), f2(i));
    EXPECT_EQ(model_to_json(back.model, back.metadata), text);
  }
}

TEST(Serialization, BaselineLossParams) {
  const FitResult r = small_fit(ScalingMode::MinMax, LossSpec::quadratic_nonconvex_insensitive(0.1, 0.6, 0.3));
  const LoadedModel back = model_from_json(model_to_json(r.model));
  EXPECT_EQ(back.model.loss().kind(), LossKind::QuadraticNonconvexInsensitive);
  EXPECT_EQ(back.model.loss().param("t"), 0.6);
  EXPECT_TRUE(back.metadata.feature_names.empty());
}

TEST(Serialization, FormatTagPresent) {
  const FitResult r = small_fit(ScalingMode::MinMax, LossSpec::least_squares());
  EXPECT_NE(model_to_json(r.model).find(kModelFormatTag), std::string::npos);
}

TEST(Serialization, RejectsMalformed) {
  EXPECT_THROW(model_from_json("not json"), FormatError);
  EXPECT_THROW(model_from_json("{}"), FormatError);
  EXPECT_THROW(model_from_json(R"({"format":"other-v9"})"), FormatError);
  const FitResult r = small_fit(ScalingMode::MinMax, LossSpec::least_squares());
  std::string text = model_to_json(r.model);
  const auto pos = text.find("\"alpha\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 7, "\"alpha_\"");
  EXPECT_THROW(model_from_json(text), FormatError);
}

TEST(Serialization, RejectsInvalidLoss) {
  const FitResult r = small_fit(ScalingMode::MinMax, LossSpec::hawkeye(0.1, 1.0, 1.0));
  std::string text = model_to_json(r.model);
  const auto pos = text.find("\"a\": ");
  ASSERT_NE(pos, std::string::npos);
  const auto end = text.find_first_of(",\n}", pos + 5);
  text.replace(pos, end - pos, "\"a\": 0");
  EXPECT_THROW(model_from_json(text), FormatError);
}

TEST(Serialization, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "helssvr_serialization_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "m.json";
  const FitResult r = small_fit(ScalingMode::ZScore, LossSpec::hawkeye(0.05, 1, 1));
  save_model(r.model, path);
  const LoadedModel back = load_model(path);
  EXPECT_EQ(back.model.alpha(), r.model.alpha());
  EXPECT_THROW(load_model(dir / "missing.json"), IoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace helssvr
