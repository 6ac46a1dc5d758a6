#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "helssvr/errors.hpp"
#include "helssvr/eval/ranking.hpp"
#include "helssvr/random.hpp"

namespace helssvr {
namespace {

const std::vector<double> kReferenceRanks{2.5294, 3.8888, 2.0, 1.2777};

RankTable load_fixture(const char* name) {
  std::ifstream in(std::string(HELSSVR_FIXTURE_DIR) + "/" + name);
  EXPECT_TRUE(in) << name;
  return read_rank_table(in);
}

using Row = std::vector<std::optional<double>>;

TEST(RankRow, CompetitionAndAverageTies) {
  const Row row{0.3, 0.1, 0.3, 0.2};
  EXPECT_EQ(rank_row(row), (Row{3.0, 1.0, 3.0, 2.0}));
  EXPECT_EQ(rank_row(row, TieMethod::Average), (Row{3.5, 1.0, 3.5, 2.0}));
  const Row tied_best{0.5, 0.5, 0.9};
  EXPECT_EQ(rank_row(tied_best), (Row{1.0, 1.0, 3.0}));
  EXPECT_EQ(rank_row(Row{0.1, 0.2, 0.3}), (Row{1.0, 2.0, 3.0}));
}

TEST(RankRow, MissingStaysMissing) {
  const Row row{std::nullopt, 2.163, 1.4336, 1.1251};
  EXPECT_EQ(rank_row(row), (Row{std::nullopt, 3.0, 2.0, 1.0}));
  EXPECT_THROW(rank_row(Row{std::nullopt, std::nullopt}), DataError);
}

TEST(Friedman, Oracles) {
  const std::vector<double> mid{2.5, 2.5, 2.5, 2.5};
  EXPECT_EQ(friedman_chi2(mid, 18, 4), 0.0);
  const std::vector<double> two{1.0, 2.0};
  EXPECT_DOUBLE_EQ(friedman_chi2(two, 1, 2), 1.0);
  EXPECT_NEAR(friedman_chi2(kReferenceRanks, 18, 4), 23.2540, 1e-3);
  EXPECT_THROW(friedman_chi2(two, 0, 2), DomainError);
  EXPECT_THROW(friedman_chi2(two, 3, 3), DomainError);
}

TEST(ImanDavenport, Oracles) {
  EXPECT_NEAR(iman_davenport_F(23.2540, 18, 4), 12.8575, 1e-3);
  EXPECT_EQ(iman_davenport_F(0.0, 18, 4), 0.0);
  EXPECT_DOUBLE_EQ(iman_davenport_F(27.0, 10, 4), 81.0);
  EXPECT_THROW(iman_davenport_F(30.0, 10, 4), DomainError);
}

TEST(Nemenyi, Oracles) {
  EXPECT_NEAR(nemenyi_cd(2.569, 4, 18), 1.1055, 5e-4);
  EXPECT_DOUBLE_EQ(nemenyi_cd(2.569, 4, 72), nemenyi_cd(2.569, 4, 18) / 2.0);
  EXPECT_DOUBLE_EQ(nemenyi_cd(1.0, 2, 1), 1.0);
  EXPECT_EQ(nemenyi_q_alpha_05(4), 2.569);
  EXPECT_EQ(nemenyi_q_alpha_05(2), 1.960);
  EXPECT_EQ(nemenyi_q_alpha_05(10), 3.164);
  EXPECT_FALSE(nemenyi_q_alpha_05(11).has_value());
  EXPECT_THROW(nemenyi_cd(0.0, 4, 18), DomainError);
}

TEST(RankModels, ReproducesReferenceRankTable) {
  const RankTable rmse = load_fixture("uci_rmse.csv");
  const RankTable expect = load_fixture("uci_ranks.csv");
  ASSERT_EQ(rmse.values.size(), 18u);
  const RankAnalysis a = rank_models(rmse);
  EXPECT_EQ(a.D, 18u);
  EXPECT_EQ(a.p, 4u);
  EXPECT_TRUE(a.incomplete);
  for (std::size_t d = 0; d < 18; ++d) {
    EXPECT_EQ(a.rank_matrix[d], expect.values[d]) << rmse.datasets[d];
  }
  EXPECT_EQ(a.present_counts, (std::vector<std::size_t>{17, 18, 18, 18}));
  EXPECT_NEAR(a.avg_ranks[0], 43.0 / 17.0, 1e-15);
  for (std::size_t m = 0; m < 4; ++m) {
    EXPECT_NEAR(a.avg_ranks[m], kReferenceRanks[m], 1e-4) << m;
  }
}

TEST(RankModels, ReferenceConstantsWithTruncatedRanks) {
  RankOptions opt;
  opt.truncate_decimals = 4;
  const RankAnalysis a = rank_models(load_fixture("uci_rmse.csv"), opt);
  EXPECT_NEAR(a.chi2_F, 23.2540, 1e-3);
  ASSERT_TRUE(a.F_F.has_value());
  EXPECT_NEAR(*a.F_F, 12.8575, 1e-3);
  EXPECT_EQ(a.q_alpha, 2.569);
  EXPECT_NEAR(a.CD, 1.1055, 5e-4);

  // HE-LSSVR (3) beats SVR (0) and LS-SVR (1) significantly, not BLSSVR (2).
  EXPECT_TRUE(a.pairwise[3][0]);
  EXPECT_TRUE(a.pairwise[3][1]);
  EXPECT_FALSE(a.pairwise[3][2]);
}

TEST(RankModels, ExactRanksGiveLargerChi2) {
  const RankAnalysis a = rank_models(load_fixture("uci_rmse.csv"));
  EXPECT_NEAR(a.chi2_F, 23.2642445213, 1e-8);
}

TEST(AnalyzeAverageRanks, ReferenceConstants) {
  RankOptions opt;
  opt.f_critical = 2.79;
  const RankAnalysis a = analyze_average_ranks(kReferenceRanks, 18, opt);
  EXPECT_NEAR(a.chi2_F, 23.253988572, 1e-8);
  EXPECT_NEAR(*a.F_F, 12.8575313468, 1e-8);
  EXPECT_NEAR(a.CD, 1.1055215796, 1e-9);
  ASSERT_TRUE(a.reject_null.has_value());
  EXPECT_TRUE(*a.reject_null);
}

TEST(AnalyzeAverageRanks, SingleDatasetWarns) {
  const RankAnalysis a = analyze_average_ranks({1.0, 2.0, 3.0}, 1);
  EXPECT_FALSE(a.F_F.has_value());
  EXPECT_FALSE(a.warnings.empty());
}

TEST(RankModels, IdenticalColumnsNotDifferent) {
  RankTable t;
  t.models = {"a", "b", "c"};
  Rng rng(3);
  for (int d = 0; d < 10; ++d) {
    t.datasets.push_back("d" + std::to_string(d));
    const double v = rng.uniform(0.1, 1.0);
    t.values.push_back({v, v, v + rng.uniform(0.01, 1.0)});
  }
  const RankAnalysis a = rank_models(t);
  EXPECT_EQ(a.avg_ranks[0], a.avg_ranks[1]);
  EXPECT_FALSE(a.pairwise[0][1]);
  EXPECT_FALSE(a.pairwise[1][0]);
}

TEST(RankModelsProperty, MonotoneTransformInvariant) {
  Rng rng(4);
  for (int rep = 0; rep < 100; ++rep) {
    RankTable t;
    t.models = {"a", "b", "c", "d"};
    RankTable u = t;
    for (int d = 0; d < 8; ++d) {
      t.datasets.push_back("d" + std::to_string(d));
      u.datasets.push_back(t.datasets.back());
      Row row, mapped;
      for (int m = 0; m < 4; ++m) {
        // Coarse values so that ties occur.
        const double v = std::round(rng.uniform(0.0, 5.0)) / 10.0;
        row.push_back(v);
        mapped.push_back(std::exp(3.0 * v) + 7.0);
      }
      t.values.push_back(row);
      u.values.push_back(mapped);
    }
    const RankAnalysis a = rank_models(t), b = rank_models(u);
    ASSERT_EQ(a.rank_matrix, b.rank_matrix);
    ASSERT_EQ(a.avg_ranks, b.avg_ranks);
  }
}

TEST(ReadRankTable, LongFormat) {
  std::istringstream in(
      "dataset,model,rmse,mae\n"
      "d1,hawkeye,0.1,0.05\n"
      "d1,leastsquares,0.2,0.1\n"
      "d2,hawkeye,0.4,0.2\n"
      "d2,leastsquares,0.3,0.1\n"
      "d3,hawkeye,0.5,0.3\n");
  const RankTable t = read_rank_table(in);
  EXPECT_EQ(t.datasets, (std::vector<std::string>{"d1", "d2", "d3"}));
  EXPECT_EQ(t.models, (std::vector<std::string>{"hawkeye", "leastsquares"}));
  EXPECT_EQ(t.values[1][1], 0.3);
  EXPECT_FALSE(t.values[2][1].has_value());
}

TEST(ReadRankTable, QuotedAndMalformed) {
  std::istringstream q("dataset,\"A, B\",C\n\"x, y\",1,2\n");
  const RankTable t = read_rank_table(q);
  EXPECT_EQ(t.models[0], "A, B");
  EXPECT_EQ(t.datasets[0], "x, y");
  std::istringstream bad("dataset,A\nd1,abc\n");
  EXPECT_THROW(read_rank_table(bad), FormatError);
  std::istringstream empty("");
  EXPECT_THROW(read_rank_table(empty), FormatError);
}

TEST(RankReport, ContainsConstants) {
  RankOptions opt;
  opt.truncate_decimals = 4;
  const RankAnalysis a = rank_models(load_fixture("uci_rmse.csv"), opt);
  const std::string report = format_rank_report(a);
  EXPECT_NE(report.find("HE-LSSVR"), std::string::npos);
  EXPECT_NE(report.find("23.25"), std::string::npos);
  std::ostringstream csv;
  write_rank_csv(a, csv);
  EXPECT_NE(csv.str().find("2D_Planes,,3,2,1"), std::string::npos);
}

}  // namespace
}  // namespace helssvr
