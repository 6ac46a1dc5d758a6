#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>

#include "helssvr/data.hpp"
#include "helssvr/errors.hpp"

namespace helssvr {

namespace {

std::string_view trim(std::string_view s) noexcept {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::optional<double> parse_number(std::string_view cell) noexcept {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t columns = 0;
  std::vector<std::size_t> rejected_lines;
};

RawTable read_table(std::istream& in, bool has_header, char delimiter) {
  RawTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (trim(line).empty()) continue;
    const auto fields = split(line, delimiter);
    if (header_pending) {
      for (const auto f : fields) table.header.emplace_back(f);
      table.columns = fields.size();
      header_pending = false;
      continue;
    }
    if (table.columns == 0) table.columns = fields.size();
    if (fields.size() != table.columns) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(table.columns) + " fields, found " +
                        std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    bool ok = true;
    for (const auto f : fields) {
      const auto v = parse_number(f);
      if (!v) {
        ok = false;
        break;
      }
      row.push_back(*v);
    }
    if (ok) {
      table.rows.push_back(std::move(row));
    } else {
      table.rejected_lines.push_back(line_no);
    }
  }
  return table;
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       std::string_view name) {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == name) return j;
  }
  return std::nullopt;
}

}  // namespace

CsvLoadResult parse_csv(std::istream& in, const CsvOptions& options, std::string name) {
  RawTable table = read_table(in, options.has_header, options.delimiter);
  if (table.columns < 2) {
    throw FormatError("csv: need at least one feature column and a target column");
  }

  std::optional<std::size_t> truth_by_name;
  if (!options.truth_column.empty()) truth_by_name = find_column(table.header, options.truth_column);

  // Default target: the last column that is not the noise-free truth column.
  std::size_t target = table.columns - 1;
  if (truth_by_name && *truth_by_name == target) target -= 1;
  if (!options.target_column.empty()) {
    if (auto j = find_column(table.header, options.target_column)) {
      target = *j;
    } else {
      std::size_t idx = 0;
      const auto& tc = options.target_column;
      const auto [ptr, ec] = std::from_chars(tc.data(), tc.data() + tc.size(), idx);
      if (ec != std::errc{} || ptr != tc.data() + tc.size() || idx >= table.columns) {
        throw FormatError("csv: target column '" + tc + "' not found");
      }
      target = idx;
    }
  }
  std::optional<std::size_t> truth = truth_by_name;
  if (truth == target) truth.reset();

  const std::size_t truth_col = truth.value_or(table.columns);
  std::vector<std::size_t> feature_cols;
  for (std::size_t j = 0; j < table.columns; ++j) {
    if (j != target && j != truth_col) feature_cols.push_back(j);
  }
  if (feature_cols.empty()) throw FormatError("csv: no feature columns");
  if (table.rows.empty()) {
    throw DataError("csv: no usable rows (" + std::to_string(table.rejected_lines.size()) +
                    " rejected)");
  }

  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const auto m = static_cast<Eigen::Index>(feature_cols.size());
  CsvLoadResult result;
  Dataset& ds = result.dataset;
  ds.name = std::move(name);
  ds.X.resize(n, m);
  ds.y.resize(n);
  if (truth) ds.y_true = Vector(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j) ds.X(i, j) = row[feature_cols[static_cast<std::size_t>(j)]];
    ds.y(i) = row[target];
    if (truth) (*ds.y_true)(i) = row[*truth];
  }
  for (const auto j : feature_cols) {
    ds.feature_names.push_back(table.header.empty() ? "x" + std::to_string(j) : table.header[j]);
  }
  ds.target_name = table.header.empty() ? "y" : table.header[target];
  result.rejected_lines = std::move(table.rejected_lines);
  result.rejected_rows = result.rejected_lines.size();
  return result;
}

CsvLoadResult load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_csv(in, options, path.stem().string());
}

CsvTable parse_feature_csv(std::istream& in, bool has_header, char delimiter) {
  RawTable table = read_table(in, has_header, delimiter);
  CsvTable out;
  out.header = std::move(table.header);
  out.rejected_rows = table.rejected_lines.size();
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const auto m = static_cast<Eigen::Index>(table.columns);
  out.values.resize(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      out.values(i, j) = table.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(value);
}

}  // namespace helssvr
