#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "helssvr/cli/commands.hpp"
#include "helssvr/cli/config.hpp"
#include "helssvr/errors.hpp"
#include "helssvr/serialization.hpp"

namespace fs = std::filesystem;

namespace helssvr::cli {
namespace {

const std::string kFixtures = HELSSVR_FIXTURE_DIR;
const std::string kToy = kFixtures + "/toy.csv";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("helssvr_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run_cli(const std::vector<std::string>& args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

// ---------------------------------------------------------------------------
// Config

TEST(ConfigPrecedence, Matrix) {
  const auto file = fs::temp_directory_path() / "helssvr_precedence.ini";
  std::ofstream(file) << "# comment\nmodel.C = 5\n; another\nkernel.sigma=0.5\n";
  // (file sets, flag sets) -> expected model.C
  struct Case {
    bool file;
    bool flag;
    double expect;
    Layer layer;
  };
  for (const Case c : {Case{false, false, 100.0, Layer::Default}, Case{true, false, 5.0, Layer::File},
                       Case{false, true, 7.0, Layer::Flag}, Case{true, true, 7.0, Layer::Flag}}) {
    Config cfg;
    if (c.flag) cfg.set_assignment("model.C=7");
    if (c.file) cfg.load_file(file);
    EXPECT_EQ(regularization_C(cfg), c.expect);
    EXPECT_EQ(cfg.layer("model.C"), c.layer);
    EXPECT_EQ(cfg.is_set("model.C"), c.layer != Layer::Default);
  }
  Config cfg;
  cfg.set("kernel.sigma", "3", Layer::Flag);
  cfg.set("kernel.sigma", "9", Layer::File);
  EXPECT_EQ(kernel_spec(cfg).sigma(), 3.0);
  fs::remove(file);
}

TEST(ConfigValidation, RejectsUnknownAndMalformed) {
  Config cfg;
  EXPECT_THROW(cfg.set_assignment("model.c=1"), ConfigError);
  EXPECT_THROW(cfg.set_assignment("novalue"), ConfigError);
  EXPECT_THROW(cfg.get("nope"), ConfigError);
  cfg.set_assignment("model.C=abc");
  EXPECT_THROW(regularization_C(cfg), ConfigError);
  cfg.set_assignment("model.C=-1");
  EXPECT_THROW(regularization_C(cfg), ConfigError);
  cfg.set_assignment("scaling=robust");
  EXPECT_THROW(scaling_mode(cfg), ConfigError);
  cfg.set_assignment("loss.a=0");
  EXPECT_THROW(loss_spec(cfg), ConfigError);
  EXPECT_THROW(cfg.load_file("/nonexistent.ini"), IoError);
}

TEST(ConfigViews, TypedValues) {
  Config cfg;
  EXPECT_EQ(scaling_mode(cfg), ScalingMode::MinMax);
  EXPECT_EQ(loss_spec(cfg).kind(), LossKind::HawkEye);
  EXPECT_EQ(adam_config(cfg).batch_size, 32u);
  EXPECT_EQ(adam_config(cfg).alpha0, 0.01);
  const GridSpec g = grid_spec(cfg);
  EXPECT_EQ(g.C_values, (std::vector<double>{1, 100, 10000}));
  EXPECT_EQ(g.a_values, (std::vector<double>{1, 3}));
  cfg.set_assignment("seed=42");
  EXPECT_EQ(adam_config(cfg).seed, 42u);
  cfg.set_assignment("adam.seed=9");
  EXPECT_EQ(adam_config(cfg).seed, 9u);
  cfg.set_assignment("grid.preset=full");
  EXPECT_EQ(grid_spec(cfg).C_values.size(), 7u);
  cfg.set_assignment("data.delimiter=semicolon");
  EXPECT_EQ(csv_options(cfg).delimiter, ';');
  cfg.set_assignment("loss.kind=huber");
  EXPECT_EQ(loss_spec(cfg).param("theta"), 0.1);
  cfg.set_assignment("loss.theta=0.3");
  EXPECT_EQ(loss_spec(cfg).param("theta"), 0.3);
  cfg.set_assignment("rank.truncate_decimals=4");
  EXPECT_EQ(rank_options(cfg).truncate_decimals, 4);
  EXPECT_GE(thread_count(cfg), 1u);
}

// ---------------------------------------------------------------------------
// Commands

TEST_F(CliTest, TrainWritesModel) {
  const int rc = run_cli({"train", "--data", kToy, "--model", path("m.json"), "--set",
                          "adam.max_iter=200", "--report", path("r.json")});
  ASSERT_EQ(rc, kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(path("m.json")));
  EXPECT_TRUE(fs::exists(path("r.json")));
  const LoadedModel m = load_model(path("m.json"));
  EXPECT_EQ(m.metadata.feature_names, (std::vector<std::string>{"x1", "x2"}));
  EXPECT_EQ(m.model.x_train().rows(), 40);
}

TEST_F(CliTest, BadLossParameterExits2) {
  const int rc = run_cli({"train", "--data", kToy, "--model", path("m.json"), "--set", "loss.a=0"});
  EXPECT_EQ(rc, kExitConfigError);
  EXPECT_NE(err_.str().find("'a'"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(path("m.json")));
}

TEST_F(CliTest, ConfigErrorsExit2) {
  EXPECT_EQ(run_cli({"train", "--data", kToy, "--set", "bogus=1"}), kExitConfigError);
  EXPECT_EQ(run_cli({"train", "--data", kToy, "--scaling", "weird"}), kExitConfigError);
  EXPECT_EQ(run_cli({"nosuchcommand"}), kExitConfigError);
  EXPECT_EQ(run_cli({"train", "--config", path("missing.ini"), "--data", kToy}), kExitConfigError);
  EXPECT_EQ(run_cli({"train"}), kExitConfigError);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  write("c.ini", "adam.max_iter = 50\nmodel.C = 3\ntrain.model = " + path("from_file.json") + "\n");
  ASSERT_EQ(run_cli({"--config", path("c.ini"), "train", "--data", kToy}), kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(path("from_file.json")));
  EXPECT_EQ(load_model(path("from_file.json")).model.C(), 3.0);

  ASSERT_EQ(run_cli({"--config", path("c.ini"), "--set", "model.C=8", "train", "--data", kToy,
                     "--model", path("from_flag.json")}),
            kExitOk);
  EXPECT_EQ(load_model(path("from_flag.json")).model.C(), 8.0);
  EXPECT_FALSE(fs::exists(path("nothing.json")));
}

TEST_F(CliTest, SameSeedByteIdentical) {
  const std::vector<std::string> base{"--seed", "11", "train", "--data", kToy, "--set",
                                      "adam.max_iter=150"};
  auto a = base, b = base, c = base;
  a.insert(a.end(), {"--model", path("a.json")});
  b.insert(b.end(), {"--model", path("b.json")});
  c[1] = "12";
  c.insert(c.end(), {"--model", path("c.json")});
  ASSERT_EQ(run_cli(a), kExitOk);
  ASSERT_EQ(run_cli(b), kExitOk);
  ASSERT_EQ(run_cli(c), kExitOk);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_NE(slurp(path("a.json")), slurp(path("c.json")));
}

TEST_F(CliTest, TraceFile) {
  ASSERT_EQ(run_cli({"--trace", path("t.csv"), "train", "--data", kToy, "--model", path("m.json"),
                     "--set", "adam.max_iter=20"}),
            kExitOk);
  const std::string t = slurp(path("t.csv"));
  EXPECT_EQ(t.rfind("iter,objective\n", 0), 0u);
  EXPECT_EQ(line_count(t), 22u);
}

TEST_F(CliTest, PredictRoundTrip) {
  ASSERT_EQ(run_cli({"train", "--data", kToy, "--model", path("m.json"), "--set", "adam.max_iter=100"}),
            kExitOk);
  ASSERT_EQ(run_cli({"predict", "--model", path("m.json"), "--input", kToy, "--output", path("p.csv")}),
            kExitOk)
      << err_.str();
  const std::string p = slurp(path("p.csv"));
  EXPECT_EQ(line_count(p), 41u);

  const LoadedModel m = load_model(path("m.json"));
  std::ifstream in(kToy);
  const CsvLoadResult data = parse_csv(in, {});
  const Vector f = m.model.predict(data.dataset.X);
  std::istringstream lines(p);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "prediction");
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    std::getline(lines, line);
    ASSERT_EQ(std::stod(line), f(i));
  }

  // Feature-only input without a header row.
  write("feat.csv", "0.5,0.5\n0.1,0.9\n");
  ASSERT_EQ(run_cli({"--set", "data.has_header=false", "predict", "--model", path("m.json"), "--input",
                     path("feat.csv")}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(line_count(out_.str()), 3u);
}

TEST_F(CliTest, PredictErrorsExit3) {
  ASSERT_EQ(run_cli({"train", "--data", kToy, "--model", path("m.json"), "--set", "adam.max_iter=10"}),
            kExitOk);
  write("empty.csv", "");
  EXPECT_EQ(run_cli({"predict", "--model", path("m.json"), "--input", path("empty.csv")}), kExitDataError);
  write("wrong.csv", "a,b,c,d\n1,2,3,4\n");
  EXPECT_EQ(run_cli({"predict", "--model", path("m.json"), "--input", path("wrong.csv")}), kExitDataError);
  EXPECT_EQ(run_cli({"predict", "--model", path("nope.json"), "--input", kToy}), kExitDataError);
}

TEST_F(CliTest, SynthSingleAndAll) {
  ASSERT_EQ(run_cli({"synth", "-f", "2", "-n", "30", "--noise", "uniform", "--out", path("s.csv")}), kExitOk);
  const std::string s = slurp(path("s.csv"));
  EXPECT_EQ(s.rfind("x,y,y_true\n", 0), 0u);
  EXPECT_EQ(line_count(s), 31u);

  ASSERT_EQ(run_cli({"synth", "-f", "2", "-n", "30", "--noise", "uniform"}), kExitOk);
  EXPECT_EQ(out_.str(), s);

  ASSERT_EQ(run_cli({"synth", "--all", "-n", "20", "--out-dir", path("all")}), kExitOk);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(path("all"))) files += e.path().extension() == ".csv";
  EXPECT_EQ(files, 15u);
  EXPECT_TRUE(fs::exists(path("all") + "/F4_student.csv"));

  EXPECT_EQ(run_cli({"synth", "-f", "9"}), kExitConfigError);
  EXPECT_EQ(run_cli({"synth", "--noise", "cauchy"}), kExitConfigError);
}

TEST_F(CliTest, BenchOneCell) {
  ASSERT_EQ(run_cli({"synth", "-f", "1", "-n", "40", "--out", path("d.csv")}), kExitOk);
  const int rc = run_cli({"--threads", "2", "--set", "grid.C=100", "--set", "grid.sigma=1", "--set",
                          "grid.a=1", "--set", "adam.max_iter=50", "--set", "grid.k=3", "bench", "-d",
                          path("d.csv"), "-r", "hawkeye", "-o", path("out")});
  ASSERT_EQ(rc, kExitOk) << err_.str();
  const std::string results = slurp(path("out") + "/results.csv");
  EXPECT_EQ(line_count(results), 2u);
  EXPECT_EQ(results.rfind("dataset,model,rmse,mae,error_pos,error_neg,train_seconds\n", 0), 0u);
  const std::string last = results.substr(results.rfind(',', results.size() - 2) + 1);
  EXPECT_GT(std::stod(last), 0.0);
  EXPECT_TRUE(fs::exists(path("out") + "/grid.csv"));
  EXPECT_TRUE(fs::exists(path("out") + "/metrics.csv"));
  EXPECT_EQ(line_count(slurp(path("out") + "/grid.csv")), 2u);
}

TEST_F(CliTest, BenchPartialFailureExits1) {
  ASSERT_EQ(run_cli({"synth", "-f", "1", "-n", "30", "--out", path("d.csv")}), kExitOk);
  write("bad.csv", "x,y\n1,2\n");
  const int rc = run_cli({"--set", "grid.C=1", "--set", "grid.sigma=1", "--set", "grid.a=1", "--set",
                          "adam.max_iter=20", "--set", "grid.k=2", "bench", "-d", path("d.csv"), "-d",
                          path("bad.csv"), "-r", "leastsquares", "-o", path("out")});
  EXPECT_EQ(rc, kExitPartialFailure) << err_.str();
  EXPECT_EQ(line_count(slurp(path("out") + "/results.csv")), 2u);
  EXPECT_EQ(line_count(slurp(path("out") + "/failures.csv")), 2u);
}

TEST_F(CliTest, BenchHoldoutMode) {
  ASSERT_EQ(run_cli({"synth", "-f", "5", "-n", "50", "--out", path("d.csv")}), kExitOk);
  const int rc = run_cli({"--set", "grid.C=10", "--set", "grid.sigma=0.5", "--set", "grid.a=1", "--set",
                          "adam.max_iter=30", "--set", "grid.k=2", "bench", "-d", path("d.csv"), "-r",
                          "hawkeye,huber", "--mode", "holdout", "-o", path("out")});
  ASSERT_EQ(rc, kExitOk) << err_.str();
  EXPECT_EQ(line_count(slurp(path("out") + "/results.csv")), 3u);
}

TEST_F(CliTest, RankReferenceTable) {
  const int rc = run_cli({"rank", "-i", kFixtures + "/uci_rmse.csv", "--set", "rank.truncate_decimals=4",
                          "--f-critical", "2.79", "-o", path("rk")});
  ASSERT_EQ(rc, kExitOk) << err_.str();
  const std::string report = out_.str();
  EXPECT_NE(report.find("23.25"), std::string::npos) << report;
  EXPECT_NE(report.find("12.857"), std::string::npos) << report;
  EXPECT_NE(report.find("1.105"), std::string::npos) << report;
  EXPECT_TRUE(fs::exists(path("rk") + "/rank.csv"));
  EXPECT_TRUE(fs::exists(path("rk") + "/rank_report.txt"));

  ASSERT_EQ(run_cli({"rank", "-i", kFixtures + "/uci_ranks.csv", "--set", "rank.truncate_decimals=4"}),
            kExitOk);
  EXPECT_NE(out_.str().find("23.25"), std::string::npos);
}

TEST_F(CliTest, RankSingleDatasetWarns) {
  write("one.csv", "dataset,a,b,c\nd1,0.1,0.2,0.3\n");
  ASSERT_EQ(run_cli({"rank", "-i", path("one.csv")}), kExitOk);
  EXPECT_NE(err_.str().find("not meaningful"), std::string::npos) << err_.str();
  EXPECT_FALSE(out_.str().empty());
}

TEST_F(CliTest, RankBadInputExits3) {
  write("bad.csv", "dataset,a\nd1,zz\n");
  EXPECT_EQ(run_cli({"rank", "-i", path("bad.csv")}), kExitDataError);
}

TEST_F(CliTest, HelpExits0) {
  EXPECT_EQ(run_cli({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("train"), std::string::npos);
}

TEST(CliBinary, RunsAsProcess) {
  const std::string cmd = std::string("\"") + HELSSVR_BINARY + "\" --help > /dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  const std::string bad = std::string("\"") + HELSSVR_BINARY + "\" train --set loss.a=0 > /dev/null 2>&1";
  const int status = std::system(bad.c_str());
  ASSERT_NE(status, -1);
  EXPECT_EQ(WEXITSTATUS(status), 2);
}

}  // namespace
}  // namespace helssvr::cli
