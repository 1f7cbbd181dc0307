#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cquota::csv {

/// One parsed data row together with its 1-based line number in the file.
struct Row {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

struct Document {
  std::string source;  // file name, for messages
  char delimiter = ',';
  std::vector<std::string> header;
  std::vector<Row> rows;

  /// Column position by (case-insensitive) name.
  std::optional<std::size_t> column(std::string_view name) const;
};

/// Parses UTF-8 delimited text. The delimiter is ';' when the header line
/// contains one, ',' otherwise. Blank lines are skipped; a leading BOM and
/// CR line endings are tolerated. Throws std::runtime_error on unreadable
/// input or an absent header.
Document parse(std::string_view text, std::string source = "<memory>");
Document read_file(const std::filesystem::path& path);

/// Strict numeric cell parsing. With decimal_comma the ',' separates the
/// fraction ("2,08E+09"). Returns nullopt for anything that is not a finite
/// number.
std::optional<double> parse_number(std::string_view cell, bool decimal_comma = false);

/// Shortest text that reads back to the same double.
std::string format_number(double value);

/// Fixed-point text with the given number of decimals.
std::string format_fixed(double value, int decimals);

std::string trim(std::string_view s);

}  // namespace cquota::csv
