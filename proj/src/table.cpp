#include "carbon_quota/table.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "carbon_quota/csv.hpp"

namespace cquota {
namespace {

constexpr std::string_view kFloorSentinel = "<-100";

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty() || s == "*") return out;
  std::size_t start = 0;
  while (true) {
    const auto bar = s.find('|', start);
    out.push_back(csv::trim(s.substr(start, bar - start)));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

std::optional<double> parse_cell(const std::string& text) {
  std::string s = csv::trim(text);
  if (!s.empty() && s.back() == '%') s.pop_back();
  return csv::parse_number(s);
}

}  // namespace

std::optional<std::size_t> NumericTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> NumericTable::row_index(std::string_view key) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] == key) return i;
  }
  return std::nullopt;
}

const Cell* NumericTable::find(std::string_view row, std::string_view column) const {
  const auto r = row_index(row);
  const auto c = column_index(column);
  if (!r || !c || *c >= cells[*r].size()) return nullptr;
  return &cells[*r][*c];
}

void NumericTable::add_row(std::string key, std::vector<Cell> values) {
  rows.push_back(std::move(key));
  cells.push_back(std::move(values));
}

NumericTable read_table(const std::filesystem::path& path, std::string id) {
  const auto doc = csv::read_file(path);
  NumericTable t;
  t.id = id.empty() ? path.stem().string() : std::move(id);
  t.key_column = doc.header.front();
  t.columns.assign(doc.header.begin() + 1, doc.header.end());
  for (const auto& row : doc.rows) {
    std::vector<Cell> values;
    for (std::size_t i = 1; i < doc.header.size(); ++i) {
      const std::string text = i < row.cells.size() ? row.cells[i] : std::string();
      values.push_back({parse_cell(text), text});
    }
    t.add_row(row.cells.empty() ? std::string() : row.cells.front(), std::move(values));
  }
  return t;
}

void write_table_csv(std::ostream& out, const NumericTable& table, int decimals) {
  out << table.key_column;
  for (const auto& c : table.columns) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << table.rows[r];
    for (const auto& cell : table.cells[r]) {
      out << ',';
      if (!cell.text.empty()) {
        out << cell.text;
      } else if (cell.value) {
        out << csv::format_fixed(*cell.value, decimals);
      }
    }
    out << '\n';
  }
}

std::string_view to_string(FixtureKind k) {
  return k == FixtureKind::Target ? "target" : "known_inconsistent";
}

bool Tolerance::admits(double printed, double diff) const {
  return diff <= absolute + 1e-12 || diff <= relative * std::abs(printed) + 1e-12;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  const auto doc = csv::read_file(path);
  const char* required[] = {"table_id", "file", "study", "rows", "columns", "kind", "abs_tol", "rel_tol", "note"};
  std::vector<std::size_t> idx;
  for (const char* name : required) {
    const auto c = doc.column(name);
    if (!c) throw std::runtime_error(doc.source + ": manifest lacks column " + name);
    idx.push_back(*c);
  }
  std::vector<ManifestEntry> out;
  for (const auto& row : doc.rows) {
    auto cell = [&](std::size_t k) { return idx[k] < row.cells.size() ? row.cells[idx[k]] : std::string(); };
    ManifestEntry e;
    e.table_id = cell(0);
    e.file = cell(1);
    e.study = cell(2).empty() ? "*" : cell(2);
    e.rows = split_list(cell(3));
    e.columns = split_list(cell(4));
    if (cell(5) == "target") {
      e.kind = FixtureKind::Target;
    } else if (cell(5) == "known_inconsistent") {
      e.kind = FixtureKind::KnownInconsistent;
    } else {
      throw std::runtime_error(doc.source + ":" + std::to_string(row.line) + ": unknown kind '" + cell(5) + "'");
    }
    const auto abs_tol = csv::parse_number(cell(6));
    const auto rel_tol = csv::parse_number(cell(7));
    if (!abs_tol || !rel_tol) {
      throw std::runtime_error(doc.source + ":" + std::to_string(row.line) + ": non-numeric tolerance");
    }
    e.tolerance = {*abs_tol, *rel_tol};
    e.note = cell(8);
    out.push_back(std::move(e));
  }
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Match: return "match";
    case Verdict::Tolerance: return "tolerance";
    case Verdict::Discrepancy: return "discrepancy";
  }
  return "?";
}

std::size_t DiffReport::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [&](const DiffCell& c) { return c.verdict == v; }));
}

double DiffReport::max_abs_diff() const {
  double m = 0.0;
  for (const auto& c : cells) m = std::max(m, c.abs_diff);
  return m;
}

double printed_half_unit(std::string_view text) {
  std::string s = csv::trim(text);
  if (!s.empty() && s.back() == '%') s.pop_back();
  int exponent = 0;
  const auto e = s.find_first_of("eE");
  if (e != std::string::npos) {
    exponent = std::stoi(s.substr(e + 1));
    s = s.substr(0, e);
  }
  const auto dot = s.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
  return 0.5 * std::pow(10.0, exponent - decimals);
}

DiffReport diff_against_fixture(const NumericTable& computed, const NumericTable& fixture,
                                const ManifestEntry& entry) {
  DiffReport report{entry.table_id, entry.kind, entry.tolerance, entry.note, {}};
  const auto rows = entry.rows.empty() ? fixture.rows : entry.rows;
  std::vector<std::string> columns = entry.columns;
  if (columns.empty()) {
    for (const auto& c : fixture.columns) {
      if (computed.column_index(c)) columns.push_back(c);
    }
  }
  for (const auto& row : rows) {
    if (!fixture.row_index(row)) {
      throw std::invalid_argument(entry.table_id + ": fixture has no row " + row);
    }
    if (!computed.row_index(row)) {
      throw std::invalid_argument(entry.table_id + ": shape mismatch, computed table has no row " + row);
    }
    for (const auto& col : columns) {
      const Cell* printed = fixture.find(row, col);
      const Cell* mine = computed.find(row, col);
      if (!printed) throw std::invalid_argument(entry.table_id + ": fixture has no column " + col);
      if (!mine) throw std::invalid_argument(entry.table_id + ": shape mismatch, computed table has no column " + col);
      if (csv::trim(printed->text).empty()) continue;  // blank in the printed table
      DiffCell d{row, col, mine->value, printed->text, 0.0, Verdict::Discrepancy};
      if (!printed->value) {
        if (printed->text == kFloorSentinel) {
          d.verdict = mine->value && *mine->value < -100.0 ? Verdict::Match : Verdict::Discrepancy;
        } else {
          d.verdict = mine->text == printed->text ? Verdict::Match : Verdict::Discrepancy;
        }
      } else if (mine->value) {
        d.abs_diff = std::abs(*mine->value - *printed->value);
        if (d.abs_diff <= printed_half_unit(printed->text) * (1.0 + 1e-9)) {
          d.verdict = Verdict::Match;
        } else if (entry.tolerance.admits(*printed->value, d.abs_diff)) {
          d.verdict = Verdict::Tolerance;
        }
      }
      report.cells.push_back(std::move(d));
    }
  }
  return report;
}

void write_diff_csv(std::ostream& out, const std::vector<DiffReport>& reports) {
  out << "table,kind,row,column,computed,printed,abs_diff,verdict\n";
  for (const auto& r : reports) {
    for (const auto& c : r.cells) {
      out << r.table_id << ',' << to_string(r.kind) << ',' << c.row << ',' << c.column << ','
          << (c.computed ? csv::format_fixed(*c.computed, 6) : std::string()) << ',' << c.printed << ','
          << csv::format_fixed(c.abs_diff, 6) << ',' << to_string(c.verdict) << '\n';
    }
  }
}

}  // namespace cquota
