#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cquota {

/// A numeric cell, or a text sentinel such as "<-100".
struct Cell {
  std::optional<double> value;
  std::string text;  // as printed; empty for computed cells

  static Cell number(double v) { return {v, {}}; }
  static Cell label(std::string t) { return {std::nullopt, std::move(t)}; }
};

/// Row-keyed table. The first column of the file is the row key.
struct NumericTable {
  std::string id;
  std::string key_column = "country_code";
  std::vector<std::string> columns;
  std::vector<std::string> rows;
  std::vector<std::vector<Cell>> cells;

  std::optional<std::size_t> column_index(std::string_view name) const;
  std::optional<std::size_t> row_index(std::string_view key) const;
  const Cell* find(std::string_view row, std::string_view column) const;
  void add_row(std::string key, std::vector<Cell> values);
};

/// Reads a fixture. Cells parse as numbers when they can ("-35%" reads as
/// -35, "6.76E+07" as 6.76e7); otherwise only the text is kept.
NumericTable read_table(const std::filesystem::path& path, std::string id = {});

/// CSV with numbers in fixed notation at `decimals` places; text cells are
/// written verbatim.
void write_table_csv(std::ostream& out, const NumericTable& table, int decimals);

enum class FixtureKind { Target, KnownInconsistent };

std::string_view to_string(FixtureKind k);

struct Tolerance {
  double absolute = 0.0;
  double relative = 0.0;  // fraction of |printed|
  bool admits(double printed, double diff) const;
};

/// One manifest line: which rows and columns of a fixture are compared, and
/// how strictly.
struct ManifestEntry {
  std::string table_id;
  std::string file;
  std::string study;                 // "*" applies to every study
  std::vector<std::string> rows;     // empty = all
  std::vector<std::string> columns;  // empty = all shared columns
  FixtureKind kind = FixtureKind::Target;
  Tolerance tolerance;
  std::string note;
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

enum class Verdict { Match, Tolerance, Discrepancy };

std::string_view to_string(Verdict v);

struct DiffCell {
  std::string row;
  std::string column;
  std::optional<double> computed;
  std::string printed;
  double abs_diff = 0.0;
  Verdict verdict = Verdict::Match;
};

struct DiffReport {
  std::string table_id;
  FixtureKind kind = FixtureKind::Target;
  Tolerance tolerance;
  std::string note;
  std::vector<DiffCell> cells;

  std::size_t count(Verdict v) const;
  double max_abs_diff() const;
};

/// Half a unit in the last printed digit of `text` ("1226.42" -> 0.005,
/// "6.76E+07" -> 5e4); 0.5 when the text has no fraction.
double printed_half_unit(std::string_view text);

/// Cell-by-cell comparison restricted to the entry's rows and columns.
/// Verdicts: match within half a printed unit, tolerance within the entry's
/// tolerance, discrepancy otherwise. A "<-100" fixture sentinel matches any
/// computed percentage below -100. Throws std::invalid_argument when a
/// requested fixture row or column is absent from the computed table.
DiffReport diff_against_fixture(const NumericTable& computed, const NumericTable& fixture,
                                const ManifestEntry& entry);

void write_diff_csv(std::ostream& out, const std::vector<DiffReport>& reports);

}  // namespace cquota
