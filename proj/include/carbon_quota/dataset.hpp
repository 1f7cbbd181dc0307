#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "carbon_quota/series.hpp"

namespace cquota {

/// ESR targets and Regulation (Annex II) allocations for one Member State.
/// Emissions are in t CO2eq; percentages are signed fractions.
struct TargetTable {
  std::string country;
  double e2005 = 0.0;
  double pct_regulation_2030 = 0.0;
  double pct_greendeal_2030 = 0.0;
  std::map<int, double> regulation_allocations;  // 2021..2030
};

/// Tapio windows ending in 2019. Avg holds an externally supplied averaged
/// index (more precise than the mean of the rounded windows).
enum class TapioWindow { W3, W2, W1, Avg };

std::string_view to_string(TapioWindow w);
std::optional<TapioWindow> parse_tapio_window(std::string_view s);
/// First year of the window; Avg has none and throws.
int window_start(TapioWindow w);
inline constexpr int kTapioEndYear = 2019;

struct TapioOverride {
  std::string country;
  TapioWindow window = TapioWindow::W3;
  double value = 0.0;
};

/// Percentage changes of GDP and GHG per capita over one window.
struct TapioDelta {
  std::string country;
  TapioWindow window = TapioWindow::W3;
  double dgdp_pct = 0.0;
  double dghg_pct = 0.0;
  bool anomalous = false;
};

enum class Schema { Series, Targets, TapioOverrides, TapioDeltas };

struct FileSpec {
  std::filesystem::path path;
  bool decimal_comma = false;
  /// Multiplier from file units to canonical units; unset means the
  /// variable's default (t -> Mt, kt -> Mt, 1 otherwise).
  std::optional<double> scale;
};

struct DatasetPaths {
  FileSpec gdp_per_capita;
  FileSpec ghg_per_capita;
  FileSpec ghg_total;
  FileSpec esr_history;
  FileSpec ets_history;
  FileSpec targets;
  std::optional<FileSpec> tapio_overrides;
  std::optional<FileSpec> tapio_deltas;

  /// Standard file names inside a data directory. Optional files are only
  /// referenced when present.
  static DatasetPaths in_directory(const std::filesystem::path& dir);
};

/// Raised when loading fails; carries every validation issue found.
class DatasetError : public std::runtime_error {
 public:
  explicit DatasetError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct Dataset {
  std::vector<CountrySeries> series;
  std::vector<TargetTable> targets;
  std::vector<TapioOverride> tapio_overrides;
  std::vector<TapioDelta> tapio_deltas;
  /// Accepted-but-suspicious inputs (e.g. implausible Tapio deltas).
  std::vector<std::string> warnings;

  const CountrySeries* find_series(std::string_view country, Variable variable) const;
  /// Throws std::out_of_range when absent.
  const CountrySeries& series_for(std::string_view country, Variable variable) const;
  const TargetTable& target_for(std::string_view country) const;
  std::optional<double> tapio_override(std::string_view country, TapioWindow window) const;
  const TapioDelta* tapio_delta(std::string_view country, TapioWindow window) const;
};

/// Loads and validates every file. Either returns a fully valid dataset or
/// throws DatasetError listing all problems found.
Dataset load_dataset(const DatasetPaths& paths);

/// Single-file loaders; `issues` collects validation failures.
std::vector<CountrySeries> load_series(const FileSpec& file, Variable variable,
                                       std::vector<std::string>& issues);
std::vector<TargetTable> load_targets(const FileSpec& file, std::vector<std::string>& issues);
std::vector<TapioOverride> load_tapio_overrides(const FileSpec& file,
                                                std::vector<std::string>& issues);
std::vector<TapioDelta> load_tapio_deltas(const FileSpec& file, std::vector<std::string>& issues,
                                          std::vector<std::string>& warnings);

/// Canonical series text: header "country_code,year,value", rows in input
/// order, values in canonical units with shortest round-trip formatting.
void write_series_csv(std::ostream& out, std::span<const CountrySeries> series);

/// The documented input and output schemas, as printed by `formats`.
std::string formats_reference();

}  // namespace cquota
