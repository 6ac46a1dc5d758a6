#include "helssvr/eval/ranking.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>

#include "helssvr/errors.hpp"

namespace helssvr {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Comma split honouring double-quoted fields ("" escapes a quote).
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::optional<double> parse_cell(const std::string& cell, std::size_t line) {
  if (cell.empty() || cell == "-" || cell == "*") return std::nullopt;
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw FormatError("rank table line " + std::to_string(line) + ": '" + cell + "' is not a number");
  }
  return v;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double truncate_to(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::trunc(x * scale + (x >= 0 ? 1e-9 : -1e-9)) / scale;
}

void fill_statistics(RankAnalysis& out, const RankOptions& options) {
  const std::size_t p = out.p;
  const std::size_t D = out.D;
  if (options.truncate_decimals) {
    for (double& r : out.avg_ranks) r = truncate_to(r, *options.truncate_decimals);
  }
  out.chi2_F = friedman_chi2(out.avg_ranks, D, p);
  const double denom = static_cast<double>(D) * static_cast<double>(p - 1) - out.chi2_F;
  if (denom > 0.0) {
    out.F_F = iman_davenport_F(out.chi2_F, D, p);
  } else {
    out.warnings.push_back("Iman-Davenport F_F is undefined (D(p-1) <= chi2_F)");
  }
  if (D < 2) out.warnings.push_back("only one dataset: the F-test is not meaningful");

  out.f_critical = options.f_critical;
  if (out.F_F && out.f_critical) out.reject_null = *out.F_F > *out.f_critical;

  if (options.q_alpha > 0.0) {
    out.q_alpha = options.q_alpha;
  } else if (const auto q = nemenyi_q_alpha_05(p)) {
    out.q_alpha = *q;
  } else {
    throw ConfigError("no tabulated Nemenyi q_alpha for p = " + std::to_string(p) +
                      "; supply rank.q_alpha");
  }
  out.CD = nemenyi_cd(out.q_alpha, p, D);
  out.pairwise.assign(p, std::vector<bool>(p, false));
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) {
      out.pairwise[a][b] = std::abs(out.avg_ranks[a] - out.avg_ranks[b]) > out.CD;
    }
  }
}

}  // namespace

void RankTable::validate() const {
  if (values.size() != datasets.size()) throw DataError("rank table: dataset names do not match rows");
  for (const auto& row : values) {
    if (row.size() != models.size()) throw DataError("rank table: ragged row");
  }
}

std::vector<std::optional<double>> rank_row(std::span<const std::optional<double>> row, TieMethod ties) {
  std::vector<std::size_t> present;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j]) present.push_back(j);
  }
  if (present.empty()) throw DataError("rank_row: every entry is absent");
  std::stable_sort(present.begin(), present.end(),
                   [&](std::size_t a, std::size_t b) { return *row[a] < *row[b]; });

  std::vector<std::optional<double>> ranks(row.size());
  std::size_t i = 0;
  while (i < present.size()) {
    std::size_t j = i;
    while (j + 1 < present.size() && *row[present[j + 1]] == *row[present[i]]) ++j;
    const double rank = ties == TieMethod::Competition
                            ? static_cast<double>(i + 1)
                            : 0.5 * static_cast<double>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) ranks[present[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double friedman_chi2(std::span<const double> avg_ranks, std::size_t D, std::size_t p) {
  if (p < 2 || D < 1) throw DomainError("friedman_chi2: requires p >= 2 and D >= 1");
  if (avg_ranks.size() != p) throw DomainError("friedman_chi2: expected one average rank per model");
  const double pd = static_cast<double>(p);
  double sum_sq = 0.0;
  for (const double r : avg_ranks) sum_sq += r * r;
  return 12.0 * static_cast<double>(D) / (pd * (pd + 1.0)) * (sum_sq - pd * (pd + 1.0) * (pd + 1.0) / 4.0);
}

double iman_davenport_F(double chi2, std::size_t D, std::size_t p) {
  const double denom = static_cast<double>(D) * static_cast<double>(p - 1) - chi2;
  if (!(denom > 0.0)) throw DomainError("iman_davenport_F: undefined for D(p-1) <= chi2");
  return (static_cast<double>(D) - 1.0) * chi2 / denom;
}

double nemenyi_cd(double q_alpha, std::size_t p, std::size_t D) {
  if (!(q_alpha > 0.0)) throw DomainError("nemenyi_cd: q_alpha must be > 0");
  if (D < 1) throw DomainError("nemenyi_cd: D must be >= 1");
  const double pd = static_cast<double>(p);
  return q_alpha * std::sqrt(pd * (pd + 1.0) / (6.0 * static_cast<double>(D)));
}

std::optional<double> nemenyi_q_alpha_05(std::size_t p) noexcept {
  static constexpr double kTable[] = {1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
  if (p < 2 || p > 10) return std::nullopt;
  return kTable[p - 2];
}

RankAnalysis rank_models(const RankTable& table, const RankOptions& options) {
  table.validate();
  if (table.values.empty()) throw DataError("rank table has no datasets");
  if (table.models.size() < 2) throw DataError("rank table needs at least two models");

  RankAnalysis out;
  out.datasets = table.datasets;
  out.models = table.models;
  out.D = table.values.size();
  out.p = table.models.size();
  out.present_counts.assign(out.p, 0);
  std::vector<double> sums(out.p, 0.0);
  for (std::size_t d = 0; d < out.D; ++d) {
    const auto& row = table.values[d];
    const auto present = static_cast<std::size_t>(std::count_if(row.begin(), row.end(),
                                                                [](const auto& v) { return v.has_value(); }));
    if (present == 0) throw DataError("rank table: dataset '" + table.datasets[d] + "' has no results");
    if (present < out.p) out.incomplete = true;
    if (present == 1) out.warnings.push_back("dataset '" + table.datasets[d] + "' has a single result");
    auto ranks = rank_row(row, options.ties);
    for (std::size_t j = 0; j < out.p; ++j) {
      if (ranks[j]) {
        sums[j] += *ranks[j];
        ++out.present_counts[j];
      }
    }
    out.rank_matrix.push_back(std::move(ranks));
  }
  out.avg_ranks.resize(out.p);
  for (std::size_t j = 0; j < out.p; ++j) {
    if (out.present_counts[j] == 0) throw DataError("rank table: model '" + out.models[j] + "' has no results");
    out.avg_ranks[j] = sums[j] / static_cast<double>(out.present_counts[j]);
  }
  if (out.incomplete) {
    out.warnings.push_back("incomplete design: averages use each model's present count, D counts all datasets");
  }
  fill_statistics(out, options);
  return out;
}

RankAnalysis analyze_average_ranks(std::vector<double> avg_ranks, std::size_t D, const RankOptions& options,
                                   std::vector<std::string> models) {
  RankAnalysis out;
  out.p = avg_ranks.size();
  out.D = D;
  if (models.empty()) {
    for (std::size_t j = 0; j < out.p; ++j) models.push_back("model" + std::to_string(j + 1));
  }
  if (models.size() != out.p) throw DomainError("analyze_average_ranks: one name per model required");
  out.models = std::move(models);
  out.avg_ranks = std::move(avg_ranks);
  out.present_counts.assign(out.p, D);
  fill_statistics(out, options);
  return out;
}

RankTable read_rank_table(std::istream& in, const std::string& value_column) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    rows.push_back(split_fields(line));
    line_numbers.push_back(line_no);
  }
  if (rows.size() < 2) throw FormatError("rank table: need a header and at least one row");

  const auto& header = rows.front();
  RankTable table;
  std::map<std::string, std::size_t> col;
  for (std::size_t j = 0; j < header.size(); ++j) col.emplace(lower(header[j]), j);
  const bool is_long = col.count("dataset") && col.count("model") && col.count(lower(value_column));

  if (is_long) {
    const std::size_t cd = col["dataset"], cm = col["model"], cv = col[lower(value_column)];
    std::map<std::string, std::size_t> dataset_index, model_index;
    std::vector<std::tuple<std::size_t, std::size_t, std::optional<double>>> entries;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& f = rows[r];
      if (f.size() != header.size()) {
        throw FormatError("rank table line " + std::to_string(line_numbers[r]) + ": expected " +
                          std::to_string(header.size()) + " fields");
      }
      auto [dit, dnew] = dataset_index.emplace(f[cd], table.datasets.size());
      if (dnew) table.datasets.push_back(f[cd]);
      auto [mit, mnew] = model_index.emplace(f[cm], table.models.size());
      if (mnew) table.models.push_back(f[cm]);
      entries.emplace_back(dit->second, mit->second, parse_cell(f[cv], line_numbers[r]));
    }
    table.values.assign(table.datasets.size(), std::vector<std::optional<double>>(table.models.size()));
    std::vector<std::vector<bool>> seen(table.datasets.size(), std::vector<bool>(table.models.size(), false));
    for (const auto& [d, m, v] : entries) {
      if (seen[d][m]) {
        throw FormatError("rank table: duplicate entry for dataset '" + table.datasets[d] + "', model '" +
                          table.models[m] + "'");
      }
      seen[d][m] = true;
      table.values[d][m] = v;
    }
    return table;
  }

  if (header.size() < 3) throw FormatError("rank table: wide format needs a dataset column and >= 2 models");
  table.models.assign(header.begin() + 1, header.end());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != header.size()) {
      throw FormatError("rank table line " + std::to_string(line_numbers[r]) + ": expected " +
                        std::to_string(header.size()) + " fields");
    }
    table.datasets.push_back(f[0]);
    std::vector<std::optional<double>> row;
    for (std::size_t j = 1; j < f.size(); ++j) row.push_back(parse_cell(f[j], line_numbers[r]));
    table.values.push_back(std::move(row));
  }
  return table;
}

std::string format_rank_report(const RankAnalysis& a) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "Friedman rank analysis: D = " << a.D << " datasets, p = " << a.p << " models\n";
  if (!a.rank_matrix.empty()) {
    os << "\nRanks (lower RMSE = lower rank)\n";
    std::size_t width = 7;
    for (const auto& d : a.datasets) width = std::max(width, d.size());
    os << std::left << std::setw(static_cast<int>(width)) << "dataset";
    for (const auto& m : a.models) os << "  " << std::right << std::setw(10) << m;
    os << "\n";
    for (std::size_t d = 0; d < a.D; ++d) {
      os << std::left << std::setw(static_cast<int>(width)) << a.datasets[d];
      for (const auto& r : a.rank_matrix[d]) {
        os << "  " << std::right << std::setw(10);
        if (r) {
          os << std::setprecision(r == std::floor(*r) ? 0 : 1) << *r << std::setprecision(4);
        } else {
          os << "-";
        }
      }
      os << "\n";
    }
  }
  os << "\nAverage ranks\n";
  for (std::size_t j = 0; j < a.p; ++j) {
    os << "  " << a.models[j] << ": " << a.avg_ranks[j] << " (" << a.present_counts[j] << " datasets)\n";
  }
  os << "\nchi2_F = " << a.chi2_F << "\n";
  if (a.F_F) {
    os << "F_F    = " << *a.F_F << "  (F distribution with (" << a.p - 1 << ", " << (a.p - 1) * (a.D - 1)
       << ") d.f.)\n";
  } else {
    os << "F_F    = undefined\n";
  }
  if (a.reject_null) {
    os << "critical F = " << *a.f_critical << ": "
       << (*a.reject_null ? "reject the null hypothesis of equal performance" : "cannot reject the null hypothesis")
       << "\n";
  }
  os << "q_alpha = " << std::setprecision(3) << a.q_alpha << std::setprecision(4) << ", CD = " << a.CD << "\n";
  os << "\nNemenyi pairwise comparisons\n";
  for (std::size_t x = 0; x < a.p; ++x) {
    for (std::size_t y = x + 1; y < a.p; ++y) {
      os << "  " << a.models[x] << " vs " << a.models[y] << ": |diff| = "
         << std::abs(a.avg_ranks[x] - a.avg_ranks[y]) << " -> "
         << (a.pairwise[x][y] ? "significant difference" : "no significant difference") << "\n";
    }
  }
  for (const auto& w : a.warnings) os << "warning: " << w << "\n";
  return os.str();
}

void write_rank_csv(const RankAnalysis& a, std::ostream& out) {
  out << "dataset";
  for (const auto& m : a.models) out << ',' << csv_field(m);
  out << '\n';
  for (std::size_t d = 0; d < a.rank_matrix.size(); ++d) {
    out << csv_field(a.datasets[d]);
    for (const auto& r : a.rank_matrix[d]) {
      out << ',';
      if (r) out << *r;
    }
    out << '\n';
  }
  out << "average";
  std::ostringstream avg;
  avg << std::setprecision(17);
  for (const double r : a.avg_ranks) avg << ',' << r;
  out << avg.str() << '\n';
}

}  // namespace helssvr
