#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cquota {

struct CountryId {
  std::string code;
  std::string name;

  bool operator==(const CountryId&) const = default;
};

/// Code of the EU27 aggregate row.
inline constexpr std::string_view kEu27Code = "EU27";

/// The 27 Member States in Eurostat protocol order. This order is the
/// canonical row order of every emitted table.
std::span<const CountryId> member_states();

const CountryId& eu27();

/// Looks up a Member State or the EU27 aggregate by code.
std::optional<CountryId> find_country(std::string_view code);

bool is_member_state(std::string_view code);

/// Position of a Member State in the registry, or registry size when unknown.
std::size_t registry_rank(std::string_view code);

/// A value attached to one country. Per-country results are kept as ordered
/// vectors of these so that output order follows input order.
struct CountryValue {
  std::string code;
  double value = 0.0;

  bool operator==(const CountryValue&) const = default;
};

using CountryValues = std::vector<CountryValue>;

/// Throws std::out_of_range when the code is absent.
double value_of(const CountryValues& values, std::string_view code);
std::optional<double> find_value(const CountryValues& values, std::string_view code);

/// Returns a copy sorted into registry order (unknown codes last, by code).
CountryValues in_registry_order(CountryValues values);

double sum_values(const CountryValues& values);

}  // namespace cquota
