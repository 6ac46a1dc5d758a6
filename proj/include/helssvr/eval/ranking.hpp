#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace helssvr {

/// D x p table of a lower-is-better score (RMSE), one row per dataset and one
/// column per model. Missing results are nullopt.
struct RankTable {
  std::vector<std::string> datasets;
  std::vector<std::string> models;
  std::vector<std::vector<std::optional<double>>> values;

  /// Throws DataError for ragged rows or mismatched name lists.
  void validate() const;
};

/// Competition: tied entries share the best tied position, the next entry
/// skips ahead (1, 1, 3). Average: tied entries share the mean position
/// (1.5, 1.5, 3).
enum class TieMethod { Competition, Average };

struct RankOptions {
  TieMethod ties = TieMethod::Competition;
  /// Nemenyi critical value; 0 looks up the alpha = 0.05 table by p.
  double q_alpha = 0.0;
  /// Critical F value to compare F_F against, if known.
  std::optional<double> f_critical;
  /// Truncate average ranks to this many decimals before the test statistics
  /// are computed (rank tables are often printed that way).
  std::optional<int> truncate_decimals;
};

struct RankAnalysis {
  std::vector<std::string> datasets;
  std::vector<std::string> models;
  std::vector<std::vector<std::optional<double>>> rank_matrix;
  std::vector<std::size_t> present_counts;
  std::vector<double> avg_ranks;
  std::size_t D = 0;
  std::size_t p = 0;
  double chi2_F = 0.0;
  /// Absent when D(p - 1) <= chi2_F.
  std::optional<double> F_F;
  std::optional<double> f_critical;
  /// F_F > f_critical, when both are known.
  std::optional<bool> reject_null;
  double q_alpha = 0.0;
  double CD = 0.0;
  /// pairwise[a][b]: |R_a - R_b| > CD.
  std::vector<std::vector<bool>> pairwise;
  bool incomplete = false;
  std::vector<std::string> warnings;
};

/// Ranks one row ascending; absent entries stay absent. Throws DataError if
/// every entry is absent.
std::vector<std::optional<double>> rank_row(std::span<const std::optional<double>> row,
                                            TieMethod ties = TieMethod::Competition);

/// chi2_F = 12D / (p(p+1)) * (sum R_e^2 - p(p+1)^2 / 4). Throws DomainError
/// unless p >= 2, D >= 1 and avg_ranks has p entries.
double friedman_chi2(std::span<const double> avg_ranks, std::size_t D, std::size_t p);

/// F_F = (D - 1) chi2 / (D(p - 1) - chi2). Throws DomainError when the
/// denominator is not positive.
double iman_davenport_F(double chi2, std::size_t D, std::size_t p);

/// CD = q_alpha * sqrt(p(p+1) / (6D)). Throws DomainError unless q_alpha > 0
/// and D >= 1.
double nemenyi_cd(double q_alpha, std::size_t p, std::size_t D);

/// Two-tailed Nemenyi critical values at alpha = 0.05 for 2 <= p <= 10.
std::optional<double> nemenyi_q_alpha_05(std::size_t p) noexcept;

/// Full Friedman / Iman-Davenport / Nemenyi analysis of an RMSE table.
/// Average ranks divide by each model's present count; D counts all rows.
RankAnalysis rank_models(const RankTable& table, const RankOptions& options = {});

/// Test statistics from average ranks alone.
RankAnalysis analyze_average_ranks(std::vector<double> avg_ranks, std::size_t D,
                                   const RankOptions& options = {},
                                   std::vector<std::string> models = {});

/// Reads either a long table (header containing dataset, model and the value
/// column) or a wide one (first column dataset, one column per model). Empty,
/// "-" and "*" cells are absent. Throws FormatError for malformed input.
RankTable read_rank_table(std::istream& in, const std::string& value_column = "rmse");

/// Human-readable report.
std::string format_rank_report(const RankAnalysis& analysis);
/// dataset,<models...> rank rows followed by an average row.
void write_rank_csv(const RankAnalysis& analysis, std::ostream& out);

}  // namespace helssvr
