#include "carbon_quota/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "carbon_quota/country.hpp"
#include "carbon_quota/csv.hpp"

namespace cquota {
namespace {

constexpr int kFirstAllocYear = 2021;
constexpr int kLastAllocYear = 2030;
// |ΔGHG| above this (in %) over a window of at most three years is flagged.
constexpr double kImplausibleDeltaPct = 50.0;

std::string where(const csv::Document& doc, std::size_t line) {
  return doc.source + ":" + std::to_string(line);
}

std::optional<int> parse_year(std::string_view cell) {
  const auto s = csv::trim(cell);
  int year = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), year);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return year;
}

double default_scale(Variable v) {
  switch (v) {
    case Variable::GhgTotal: return 1e-3;       // kt -> Mt
    case Variable::EsrEmissions:
    case Variable::EtsEmissions: return 1e-6;   // t -> Mt
    default: return 1.0;
  }
}

std::string canonical_unit(Variable v) {
  switch (v) {
    case Variable::GdpPerCapita: return "EUR/person/yr";
    case Variable::GhgPerCapita: return "t CO2eq/person/yr";
    default: return "Mt CO2eq/yr";
  }
}

bool requires_full_registry(Variable v) {
  return v == Variable::GdpPerCapita || v == Variable::GhgPerCapita || v == Variable::GhgTotal;
}

std::optional<csv::Document> open(const FileSpec& file, std::vector<std::string>& issues) {
  try {
    auto doc = csv::read_file(file.path);
    if (file.decimal_comma && doc.delimiter == ',') {
      issues.push_back(doc.source + ": decimal comma requires a ';' delimited file");
      return std::nullopt;
    }
    if (doc.rows.empty()) {
      issues.push_back(doc.source + ": no rows");
      return std::nullopt;
    }
    return doc;
  } catch (const std::exception& e) {
    issues.emplace_back(e.what());
    return std::nullopt;
  }
}

bool check_header(const csv::Document& doc, const std::vector<std::string>& expected,
                  std::vector<std::string>& issues) {
  bool ok = doc.header.size() == expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) {
    ok = doc.column(expected[i]) == i;
  }
  if (!ok) {
    std::string want;
    for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
    issues.push_back(doc.source + ": header does not match schema (expected " + want + ")");
  }
  return ok;
}

void check_registry(const csv::Document& doc, const std::set<std::string>& present,
                    bool full_registry, std::vector<std::string>& issues) {
  if (!present.contains(std::string(kEu27Code))) {
    issues.push_back(doc.source + ": missing country EU27 (" + eu27().name + ")");
  }
  if (!full_registry) return;
  for (const auto& c : member_states()) {
    if (!present.contains(c.code)) {
      issues.push_back(doc.source + ": missing country " + c.code + " (" + c.name + ")");
    }
  }
}

}  // namespace

std::string_view to_string(TapioWindow w) {
  switch (w) {
    case TapioWindow::W3: return "W3";
    case TapioWindow::W2: return "W2";
    case TapioWindow::W1: return "W1";
    case TapioWindow::Avg: return "AVG";
  }
  return "?";
}

std::optional<TapioWindow> parse_tapio_window(std::string_view s) {
  if (s == "W3") return TapioWindow::W3;
  if (s == "W2") return TapioWindow::W2;
  if (s == "W1") return TapioWindow::W1;
  if (s == "AVG") return TapioWindow::Avg;
  return std::nullopt;
}

int window_start(TapioWindow w) {
  switch (w) {
    case TapioWindow::W3: return 2016;
    case TapioWindow::W2: return 2017;
    case TapioWindow::W1: return 2018;
    case TapioWindow::Avg: break;
  }
  throw std::invalid_argument("averaged Tapio value has no window");
}

DatasetPaths DatasetPaths::in_directory(const std::filesystem::path& dir) {
  auto spec = [&](const char* name) {
    FileSpec f;
    f.path = dir / name;
    return f;
  };
  DatasetPaths p;
  p.gdp_per_capita = spec("gdp_per_capita.csv");
  p.ghg_per_capita = spec("ghg_per_capita.csv");
  p.ghg_total = spec("ghg_total.csv");
  p.esr_history = spec("esr_history.csv");
  p.ets_history = spec("ets_history.csv");
  p.targets = spec("targets.csv");
  if (std::filesystem::exists(dir / "tapio_overrides.csv")) p.tapio_overrides = spec("tapio_overrides.csv");
  if (std::filesystem::exists(dir / "tapio_deltas.csv")) p.tapio_deltas = spec("tapio_deltas.csv");
  return p;
}

DatasetError::DatasetError(std::vector<std::string> issues)
    : std::runtime_error([&] {
        std::string msg = "dataset validation failed";
        for (const auto& i : issues) msg += "\n  " + i;
        return msg;
      }()),
      issues_(std::move(issues)) {}

const CountrySeries* Dataset::find_series(std::string_view country, Variable variable) const {
  for (const auto& s : series) {
    if (s.country == country && s.variable == variable) return &s;
  }
  return nullptr;
}

const CountrySeries& Dataset::series_for(std::string_view country, Variable variable) const {
  if (const auto* s = find_series(country, variable)) return *s;
  throw std::out_of_range("no " + std::string(to_string(variable)) + " series for " +
                          std::string(country));
}

const TargetTable& Dataset::target_for(std::string_view country) const {
  for (const auto& t : targets) {
    if (t.country == country) return t;
  }
  throw std::out_of_range("no ESR target for " + std::string(country));
}

std::optional<double> Dataset::tapio_override(std::string_view country, TapioWindow window) const {
  for (const auto& o : tapio_overrides) {
    if (o.country == country && o.window == window) return o.value;
  }
  return std::nullopt;
}

const TapioDelta* Dataset::tapio_delta(std::string_view country, TapioWindow window) const {
  for (const auto& d : tapio_deltas) {
    if (d.country == country && d.window == window) return &d;
  }
  return nullptr;
}

std::vector<CountrySeries> load_series(const FileSpec& file, Variable variable,
                                       std::vector<std::string>& issues) {
  const auto doc = open(file, issues);
  if (!doc || !check_header(*doc, {"country_code", "year", "value"}, issues)) return {};

  const double scale = file.scale.value_or(default_scale(variable));
  std::vector<CountrySeries> out;
  std::set<std::string> present;
  const auto before = issues.size();
  for (const auto& row : doc->rows) {
    if (row.cells.size() != 3) {
      issues.push_back(where(*doc, row.line) + ": expected 3 cells, found " +
                       std::to_string(row.cells.size()));
      continue;
    }
    const auto& code = row.cells[0];
    if (!find_country(code)) {
      issues.push_back(where(*doc, row.line) + ": unknown country '" + code + "'");
      continue;
    }
    const auto year = parse_year(row.cells[1]);
    if (!year) {
      issues.push_back(where(*doc, row.line) + ": non-numeric year '" + row.cells[1] + "'");
      continue;
    }
    const auto value = csv::parse_number(row.cells[2], file.decimal_comma);
    if (!value) {
      issues.push_back(where(*doc, row.line) + ": non-numeric value '" + row.cells[2] + "'");
      continue;
    }
    if (variable == Variable::GdpPerCapita ? *value <= 0.0 : *value < 0.0) {
      issues.push_back(where(*doc, row.line) + ": value out of range for " +
                       std::string(to_string(variable)) + " (" + row.cells[2] + ")");
      continue;
    }
    auto it = std::find_if(out.begin(), out.end(), [&](const CountrySeries& s) { return s.country == code; });
    if (it == out.end()) {
      out.push_back(CountrySeries{code, variable, canonical_unit(variable), scale, {}});
      it = std::prev(out.end());
    }
    if (!it->points.emplace(*year, *value * scale).second) {
      issues.push_back(where(*doc, row.line) + ": duplicate (" + code + ", " +
                       std::string(to_string(variable)) + ", " + std::to_string(*year) + ")");
    }
    present.insert(code);
  }
  for (const auto& s : out) {
    if (static_cast<int>(s.points.size()) != s.last_year() - s.first_year() + 1) {
      issues.push_back(doc->source + ": non-contiguous years for " + s.country);
    }
  }
  check_registry(*doc, present, requires_full_registry(variable), issues);
  if (issues.size() != before) return {};
  return out;
}

std::vector<TargetTable> load_targets(const FileSpec& file, std::vector<std::string>& issues) {
  const auto doc = open(file, issues);
  std::vector<std::string> header = {"country_code", "e2005_t", "pct_reg_2030", "pct_gd_2030"};
  for (int y = kFirstAllocYear; y <= kLastAllocYear; ++y) header.push_back("alloc_" + std::to_string(y));
  if (!doc || !check_header(*doc, header, issues)) return {};

  const auto before = issues.size();
  std::vector<TargetTable> out;
  std::set<std::string> present;
  for (const auto& row : doc->rows) {
    if (row.cells.size() != header.size()) {
      issues.push_back(where(*doc, row.line) + ": expected " + std::to_string(header.size()) +
                       " cells, found " + std::to_string(row.cells.size()));
      continue;
    }
    const auto& code = row.cells[0];
    if (!is_member_state(code)) {
      issues.push_back(where(*doc, row.line) + ": unknown Member State '" + code + "'");
      continue;
    }
    if (!present.insert(code).second) {
      issues.push_back(where(*doc, row.line) + ": duplicate target row for " + code);
      continue;
    }
    std::vector<double> nums;
    bool ok = true;
    for (std::size_t i = 1; i < row.cells.size(); ++i) {
      const auto v = csv::parse_number(row.cells[i], file.decimal_comma);
      if (!v) {
        issues.push_back(where(*doc, row.line) + ": non-numeric value '" + row.cells[i] + "' in column " +
                         header[i]);
        ok = false;
        break;
      }
      nums.push_back(*v);
    }
    if (!ok) continue;
    TargetTable t{code, nums[0], nums[1], nums[2], {}};
    if (t.e2005 <= 0.0) issues.push_back(where(*doc, row.line) + ": e2005 must be positive");
    for (double pct : {t.pct_regulation_2030, t.pct_greendeal_2030}) {
      if (pct < -1.0 || pct > 0.0) {
        issues.push_back(where(*doc, row.line) + ": percentage outside [-1, 0]");
      }
    }
    for (int y = kFirstAllocYear; y <= kLastAllocYear; ++y) {
      const double v = nums[static_cast<std::size_t>(3 + y - kFirstAllocYear)];
      if (v < 0.0) issues.push_back(where(*doc, row.line) + ": negative allocation");
      t.regulation_allocations[y] = v;
    }
    out.push_back(std::move(t));
  }
  for (const auto& c : member_states()) {
    if (!present.contains(c.code)) {
      issues.push_back(doc->source + ": missing country " + c.code + " (" + c.name + ")");
    }
  }
  if (issues.size() != before) return {};
  return out;
}

std::vector<TapioOverride> load_tapio_overrides(const FileSpec& file,
                                                std::vector<std::string>& issues) {
  const auto doc = open(file, issues);
  if (!doc || !check_header(*doc, {"country_code", "window", "value"}, issues)) return {};
  const auto before = issues.size();
  std::vector<TapioOverride> out;
  for (const auto& row : doc->rows) {
    if (row.cells.size() != 3) {
      issues.push_back(where(*doc, row.line) + ": expected 3 cells");
      continue;
    }
    const auto window = parse_tapio_window(row.cells[1]);
    const auto value = csv::parse_number(row.cells[2], file.decimal_comma);
    if (!find_country(row.cells[0])) {
      issues.push_back(where(*doc, row.line) + ": unknown country '" + row.cells[0] + "'");
    } else if (!window) {
      issues.push_back(where(*doc, row.line) + ": unknown window '" + row.cells[1] + "'");
    } else if (!value) {
      issues.push_back(where(*doc, row.line) + ": non-numeric value '" + row.cells[2] + "'");
    } else {
      const bool dup = std::any_of(out.begin(), out.end(), [&](const TapioOverride& o) {
        return o.country == row.cells[0] && o.window == *window;
      });
      if (dup) {
        issues.push_back(where(*doc, row.line) + ": duplicate override for " + row.cells[0] + " " +
                         row.cells[1]);
      } else {
        out.push_back({row.cells[0], *window, *value});
      }
    }
  }
  if (issues.size() != before) return {};
  return out;
}

std::vector<TapioDelta> load_tapio_deltas(const FileSpec& file, std::vector<std::string>& issues,
                                          std::vector<std::string>& warnings) {
  const auto doc = open(file, issues);
  if (!doc || !check_header(*doc, {"country_code", "window", "dgdp_pct", "dghg_pct"}, issues)) return {};
  const auto before = issues.size();
  std::vector<TapioDelta> out;
  for (const auto& row : doc->rows) {
    if (row.cells.size() != 4) {
      issues.push_back(where(*doc, row.line) + ": expected 4 cells");
      continue;
    }
    const auto window = parse_tapio_window(row.cells[1]);
    const auto dgdp = csv::parse_number(row.cells[2], file.decimal_comma);
    const auto dghg = csv::parse_number(row.cells[3], file.decimal_comma);
    if (!find_country(row.cells[0]) || !window || *window == TapioWindow::Avg || !dgdp || !dghg) {
      issues.push_back(where(*doc, row.line) + ": malformed Tapio delta row");
      continue;
    }
    TapioDelta d{row.cells[0], *window, *dgdp, *dghg, false};
    if (std::abs(d.dghg_pct) > kImplausibleDeltaPct || std::abs(d.dgdp_pct) > kImplausibleDeltaPct) {
      d.anomalous = true;
      warnings.push_back(where(*doc, row.line) + ": implausible change for " + d.country + " " +
                         std::string(to_string(d.window)) + " (dGDP " + row.cells[2] + "%, dGHG " +
                         row.cells[3] + "%); Tapio overrides take precedence");
    }
    out.push_back(d);
  }
  if (issues.size() != before) return {};
  return out;
}

Dataset load_dataset(const DatasetPaths& paths) {
  std::vector<std::string> issues;
  Dataset ds;
  const std::pair<const FileSpec*, Variable> series_files[] = {
      {&paths.gdp_per_capita, Variable::GdpPerCapita}, {&paths.ghg_per_capita, Variable::GhgPerCapita},
      {&paths.ghg_total, Variable::GhgTotal},          {&paths.esr_history, Variable::EsrEmissions},
      {&paths.ets_history, Variable::EtsEmissions},
  };
  for (const auto& [file, variable] : series_files) {
    auto loaded = load_series(*file, variable, issues);
    ds.series.insert(ds.series.end(), std::make_move_iterator(loaded.begin()),
                     std::make_move_iterator(loaded.end()));
  }
  ds.targets = load_targets(paths.targets, issues);
  if (paths.tapio_overrides) ds.tapio_overrides = load_tapio_overrides(*paths.tapio_overrides, issues);
  if (paths.tapio_deltas) ds.tapio_deltas = load_tapio_deltas(*paths.tapio_deltas, issues, ds.warnings);
  if (!issues.empty()) throw DatasetError(std::move(issues));
  return ds;
}

void write_series_csv(std::ostream& out, std::span<const CountrySeries> series) {
  out << "country_code,year,value\n";
  for (const auto& s : series) {
    for (const auto& [year, value] : s.points) {
      out << s.country << ',' << year << ',' << csv::format_number(value) << '\n';
    }
  }
}

std::string formats_reference() {
  return R"(FORMATS

Input files are UTF-8 delimited text. The delimiter is ';' when the header
line contains one and ',' otherwise. Files loaded with the decimal-comma flag
must be ';' delimited and use ',' as the fraction separator ("2,08E+09").
Country codes: EU27 plus BE BG CZ DK DE EE IE EL ES FR HR IT CY LV LT LU HU
MT NL AT PL PT RO SI SK FI SE.

Series files (one per variable)
  columns: country_code, year, value
  gdp_per_capita.csv   GDP per capita, EUR/person/yr, all 28 rows required
  ghg_per_capita.csv   GHG per capita, t CO2eq/person/yr, all 28 rows required
  ghg_total.csv        GHG totals in kt CO2eq/yr (stored as Mt), all 28 required
  esr_history.csv      ESR emissions in t CO2eq/yr (stored as Mt), EU27 required
  ets_history.csv      ETS emissions in t CO2eq/yr (stored as Mt), EU27 required
  Years must be contiguous per country; duplicates are rejected.

Targets file (targets.csv)
  columns: country_code, e2005_t, pct_reg_2030, pct_gd_2030,
           alloc_2021, ..., alloc_2030
  One row per Member State; percentages are signed fractions in [-1, 0];
  emissions in t CO2eq.

Tapio override file (tapio_overrides.csv, optional)
  columns: country_code, window, value
  window: W3 (2016-2019) | W2 (2017-2019) | W1 (2018-2019) | AVG
  AVG supplies an averaged index that replaces the mean of W3, W2, W1.

Tapio delta file (tapio_deltas.csv, optional)
  columns: country_code, window, dgdp_pct, dghg_pct
  Percentage changes per window; implausible rows are accepted and flagged.

Run config (--config)
  Flat "key = value" lines, '#' starts a comment. Keys: study, cb_eu27,
  tapio_source (raw|deltas|override), gdp_vintage (YYYY or YYYY-YYYY),
  ghg_vintage, output_dir, formats (csv,json,svg), data_dir, fixtures_dir,
  eu27_anchor, ets_anchor, esr_anchor, step, chord_threshold, band_tolerance.

Outputs
  trajectory CSV: year, esr, eu27_total, ets  (Mt CO2eq), then budget lines
  indices CSV:    country, CI, tapio_W3, tapio_W2, tapio_W1, tapio_avg,
                  tapio_rescaled, DI, decoupling_share, II
  blend CSV:      country, one column per parameter value (w0.0 ... w1.0)
  gaps CSV:       country, gap_pct, tapio
  groups CSV:     country, group, curvature, chord_deviation, left_band
  feasibility CSV: country, esr_2021_2030, then per-w blend and flag pairs
  diff CSV:       table, row, column, computed, printed, abs_diff, verdict
)";
}

}  // namespace cquota
