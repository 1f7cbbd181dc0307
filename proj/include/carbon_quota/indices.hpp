#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carbon_quota/country.hpp"
#include "carbon_quota/dataset.hpp"

namespace cquota {

enum class StudyLabel { Study2016_2019, Study2019 };

std::string_view to_string(StudyLabel label);  // "2016-2019" or "2019"
std::optional<StudyLabel> parse_study(std::string_view s);

struct YearSpan {
  int from = 0;
  int to = 0;
  bool operator==(const YearSpan&) const = default;
};

/// Parses "2019" or "2016-2019".
std::optional<YearSpan> parse_year_span(std::string_view s);
std::string to_string(YearSpan span);

struct StudyWindow {
  StudyLabel label = StudyLabel::Study2019;
  YearSpan gdp;  // averaged over the span
  YearSpan ghg;  // averaged over the span
  std::vector<TapioWindow> tapio_windows;
  /// Use an AVG override (when loaded) instead of the mean of the windows.
  bool prefer_avg_override = false;
};

/// Reproduction profiles: averaged GDP, 2019 emissions, W3/W2/W1 for the
/// multi-year study; 2019 values and W1 for the single-year one.
StudyWindow study_window(StudyLabel label);

enum class TapioSource { Raw, Deltas, Override };

std::string_view to_string(TapioSource s);
std::optional<TapioSource> parse_tapio_source(std::string_view s);

/// CI_j = (g_eu / g_j) / sum_i (g_eu / g_i) over the Member States given.
/// Throws std::invalid_argument for a non-positive GDP.
CountryValues capability_index(const CountryValues& gdpcap, double gdpcap_eu);

/// Elasticity dGHG% / dGDP% between `from` and `to`; nullopt when GDP does
/// not change. Throws std::invalid_argument when a series misses a year or
/// starts at zero.
std::optional<double> tapio_window(const CountrySeries& gdpcap, const CountrySeries& ghgcap, int from, int to);

/// Same ratio from precomputed percentage changes.
std::optional<double> tapio_from_deltas(double dgdp_pct, double dghg_pct);

/// Throws std::invalid_argument for an empty set.
double average_tapio(std::span<const double> window_values);

/// Shifts every value (EU27 included) by -(m + 1), where m is the largest
/// Member State value, so the least decoupled Member State lands on -1.
CountryValues rescale_tapio(const CountryValues& tapio);

struct DecouplingShares {
  CountryValues di;      // rescaled_j / rescaled_eu
  CountryValues inv_di;  // 1 / DI_j
  CountryValues share;   // inv_di_j / sum inv_di
};

/// Throws std::invalid_argument when the EU value is zero or a Member State
/// value is not strictly negative.
DecouplingShares decoupling_shares(const CountryValues& rescaled, double rescaled_eu);

/// II_j = ghg_j / ghg_eu. Throws std::invalid_argument when ghg_eu <= 0.
CountryValues inertia_index(const CountryValues& ghg, double ghg_eu);

struct IndexRow {
  std::string country;
  double ci = 0.0;
  std::map<TapioWindow, double> windows;
  double tapio = 0.0;
  double tapio_rescaled = 0.0;
  double di = 0.0;
  double decoupling_share = 0.0;
  double ii = 0.0;
};

struct IndexSet {
  StudyWindow study;
  TapioSource source = TapioSource::Override;
  std::vector<IndexRow> rows;  // Member States in registry order
  IndexRow eu27;               // tapio and rescaled only; shares stay 0
  std::vector<std::string> notes;

  const IndexRow& row(std::string_view code) const;
  CountryValues capability() const;
  CountryValues decoupling() const;
  CountryValues inertia() const;
  CountryValues tapio() const;
};

/// Full index pipeline for one study. Throws std::invalid_argument naming
/// the country and window when a required Tapio value is unavailable.
IndexSet compute_index_set(const Dataset& data, const StudyWindow& study, TapioSource source);

}  // namespace cquota
