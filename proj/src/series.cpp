#include "carbon_quota/series.hpp"

#include <stdexcept>

namespace cquota {

std::string_view to_string(Variable v) {
  switch (v) {
    case Variable::GdpPerCapita: return "GDP_PER_CAPITA";
    case Variable::GhgPerCapita: return "GHG_PER_CAPITA";
    case Variable::GhgTotal: return "GHG_TOTAL";
    case Variable::EsrEmissions: return "ESR_EMISSIONS";
    case Variable::EtsEmissions: return "ETS_EMISSIONS";
  }
  return "?";
}

int CountrySeries::first_year() const {
  if (points.empty()) throw std::out_of_range("empty series for " + country);
  return points.begin()->first;
}

int CountrySeries::last_year() const {
  if (points.empty()) throw std::out_of_range("empty series for " + country);
  return points.rbegin()->first;
}

bool CountrySeries::covers(int from, int to) const {
  for (int y = from; y <= to; ++y) {
    if (!points.contains(y)) return false;
  }
  return true;
}

double CountrySeries::at(int year) const {
  auto it = points.find(year);
  if (it == points.end()) {
    throw std::out_of_range(country + " " + std::string(to_string(variable)) + ": no value for year " +
                            std::to_string(year));
  }
  return it->second;
}

double CountrySeries::mean(int from, int to) const {
  if (to < from) throw std::invalid_argument("empty year range");
  double acc = 0.0;
  for (int y = from; y <= to; ++y) acc += at(y);
  return acc / static_cast<double>(to - from + 1);
}

CountrySeries normalize_to_base(const CountrySeries& series, int base_year) {
  const auto it = series.points.find(base_year);
  if (it == series.points.end()) {
    throw std::invalid_argument(series.country + ": base year " + std::to_string(base_year) +
                                " missing");
  }
  if (it->second == 0.0) {
    throw std::invalid_argument(series.country + ": zero value in base year");
  }
  CountrySeries out = series;
  out.unit = "index (" + std::to_string(base_year) + "=100)";
  out.ingest_scale = 1.0;
  for (auto& [year, value] : out.points) {
    value = year == base_year ? 100.0 : 100.0 * value / it->second;
  }
  return out;
}

}  // namespace cquota
