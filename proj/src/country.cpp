#include "carbon_quota/country.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

namespace cquota {
namespace {

const std::array<CountryId, 27> kMemberStates = {{
    {"BE", "Belgium"},     {"BG", "Bulgaria"},   {"CZ", "Czechia"},
    {"DK", "Denmark"},     {"DE", "Germany"},    {"EE", "Estonia"},
    {"IE", "Ireland"},     {"EL", "Greece"},     {"ES", "Spain"},
    {"FR", "France"},      {"HR", "Croatia"},    {"IT", "Italy"},
    {"CY", "Cyprus"},      {"LV", "Latvia"},     {"LT", "Lithuania"},
    {"LU", "Luxembourg"},  {"HU", "Hungary"},    {"MT", "Malta"},
    {"NL", "Netherlands"}, {"AT", "Austria"},    {"PL", "Poland"},
    {"PT", "Portugal"},    {"RO", "Romania"},    {"SI", "Slovenia"},
    {"SK", "Slovakia"},    {"FI", "Finland"},    {"SE", "Sweden"},
}};

const CountryId kEu27{std::string(kEu27Code), "European Union - 27"};

}  // namespace

std::span<const CountryId> member_states() { return kMemberStates; }

const CountryId& eu27() { return kEu27; }

std::optional<CountryId> find_country(std::string_view code) {
  if (code == kEu27Code) return kEu27;
  for (const auto& c : kMemberStates) {
    if (c.code == code) return c;
  }
  return std::nullopt;
}

bool is_member_state(std::string_view code) {
  return registry_rank(code) < kMemberStates.size();
}

std::size_t registry_rank(std::string_view code) {
  for (std::size_t i = 0; i < kMemberStates.size(); ++i) {
    if (kMemberStates[i].code == code) return i;
  }
  return kMemberStates.size();
}

double value_of(const CountryValues& values, std::string_view code) {
  if (auto v = find_value(values, code)) return *v;
  throw std::out_of_range("no value for country " + std::string(code));
}

std::optional<double> find_value(const CountryValues& values, std::string_view code) {
  for (const auto& cv : values) {
    if (cv.code == code) return cv.value;
  }
  return std::nullopt;
}

CountryValues in_registry_order(CountryValues values) {
  std::stable_sort(values.begin(), values.end(), [](const CountryValue& a, const CountryValue& b) {
    const auto ra = registry_rank(a.code);
    const auto rb = registry_rank(b.code);
    if (ra != rb) return ra < rb;
    return a.code < b.code;
  });
  return values;
}

double sum_values(const CountryValues& values) {
  // Summed in registry order so that the result does not depend on input order.
  const auto ordered = in_registry_order(values);
  return std::accumulate(ordered.begin(), ordered.end(), 0.0,
                         [](double acc, const CountryValue& cv) { return acc + cv.value; });
}

}  // namespace cquota
