#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carbon_quota/country.hpp"

namespace cquota {

/// Per-country carbon budgets (Mt CO2eq) under one principle or blend point.
struct BudgetAllocation {
  std::string study;
  std::string tag;  // "capability", "decoupling", "inertia", "cap-ine", ...
  CountryValues per_country;
  double cb_eu27 = 0.0;
  std::optional<double> w;
  std::optional<double> z;

  double total() const { return sum_values(per_country); }
  double at(std::string_view code) const { return value_of(per_country, code); }
};

/// cb_eu27 * index_j for every country of the index.
BudgetAllocation principle_allocation(std::string study, std::string tag, const CountryValues& index,
                                      double cb_eu27);

/// (1 - w) a + w b. Throws std::invalid_argument when the inputs belong to
/// different studies, budgets or country sets, or w is outside [0, 1].
BudgetAllocation blend_two(const BudgetAllocation& a, const BudgetAllocation& b, double w);

/// (1 - z) (w dec + (1 - w) cap) + z ine.
BudgetAllocation blend_three(const BudgetAllocation& cap, const BudgetAllocation& dec,
                             const BudgetAllocation& ine, double w, double z);

/// 0, step, 2 step, ... with the last point clamped to exactly 1.
/// Throws std::invalid_argument unless 0 < step <= 1.
std::vector<double> sweep_grid(double step);

struct BlendSweep {
  std::string axis;  // "w", "t" (diagonal, w = z = t) or "w,z"
  double step = 0.1;
  std::vector<BudgetAllocation> allocations;

  /// Values of one country across the sweep, in sweep order.
  std::vector<double> trace(std::string_view code) const;
  /// Sweep parameter of every point (w, or t on the diagonal).
  std::vector<double> parameters() const;
  std::vector<std::string> countries() const;
};

BlendSweep sweep_linear(const BudgetAllocation& a, const BudgetAllocation& b, double step = 0.1);

/// w = z = t in blend_three for every grid point t.
BlendSweep sweep_diagonal(const BudgetAllocation& cap, const BudgetAllocation& dec, const BudgetAllocation& ine,
                          double step = 0.1);

/// Full (w, z) grid, w varying fastest.
BlendSweep sweep_surface(const BudgetAllocation& cap, const BudgetAllocation& dec, const BudgetAllocation& ine,
                         double step = 0.1);

}  // namespace cquota
