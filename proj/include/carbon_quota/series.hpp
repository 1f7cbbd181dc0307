#pragma once

#include <map>
#include <string>
#include <string_view>

namespace cquota {

enum class Variable {
  GdpPerCapita,   // currency per person and year
  GhgPerCapita,   // t CO2eq per person and year
  GhgTotal,       // Mt CO2eq per year (ingested from kt)
  EsrEmissions,   // Mt CO2eq per year (ingested from t)
  EtsEmissions,   // Mt CO2eq per year (ingested from t)
};

std::string_view to_string(Variable v);

/// Annual series for one country and one variable.
struct CountrySeries {
  std::string country;
  Variable variable = Variable::GdpPerCapita;
  std::string unit;
  /// Multiplier that was applied to the file values to reach `unit`.
  double ingest_scale = 1.0;
  std::map<int, double> points;

  int first_year() const;
  int last_year() const;
  bool covers(int from, int to) const;
  /// Throws std::out_of_range for a missing year.
  double at(int year) const;
  /// Arithmetic mean over [from, to]; throws when any year is missing.
  double mean(int from, int to) const;
};

/// Index form with base_year = 100. Throws std::invalid_argument when the base
/// year is missing or its value is zero.
CountrySeries normalize_to_base(const CountrySeries& series, int base_year);

}  // namespace cquota
