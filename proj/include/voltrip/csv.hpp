#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace voltrip::csv {

/// One parsed delimiter-separated table. Lines starting with "# " are
/// treated as metadata comments and skipped.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_numbers; // 1-based source line of each row
  std::vector<std::string> raw_lines;   // original text of each row

  /// Column index by name, or nullopt.
  std::optional<std::size_t> column(const std::string& name) const;
};

std::vector<std::string> split_line(const std::string& line);

Table read(std::istream& in);
Table read_file(const std::string& path);

std::string escape(const std::string& field);

/// Missing markers: empty cell, "NA", "na", "NaN".
bool is_missing(const std::string& cell);

std::optional<double> parse_double(const std::string& cell);
std::optional<long long> parse_int(const std::string& cell);

} // namespace voltrip::csv
