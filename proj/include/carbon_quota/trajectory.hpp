#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carbon_quota/dataset.hpp"
#include "carbon_quota/series.hpp"

namespace cquota {

enum class TrajectoryLabel { Eu27Total, Esr, Ets, EsrMember };

std::string_view to_string(TrajectoryLabel label);

/// Annual emission path in Mt CO2eq. `budget` is the inclusive sum over all
/// points.
struct Trajectory {
  TrajectoryLabel label = TrajectoryLabel::Eu27Total;
  std::string member;  // set for EsrMember only
  std::map<int, double> points;
  double budget = 0.0;

  int first_year() const;
  int last_year() const;
  /// Throws std::out_of_range for a missing year.
  double at(int year) const;
};

struct YearRange {
  int from = 0;
  int to = 0;
};

/// Straight line from (anchor_year, anchor_value) to zero at zero_year.
/// Throws std::invalid_argument for a non-positive span or anchor.
Trajectory linear_to_zero(int anchor_year, double anchor_value, int zero_year,
                          TrajectoryLabel label = TrajectoryLabel::Eu27Total);

/// Least-squares line over `fit`, evaluated at `at_year`. Throws
/// std::invalid_argument when the range has fewer than two years or is not
/// covered by the history.
double estimate_2020_anchor(const CountrySeries& history, YearRange fit, int at_year = 2020);

/// Green Deal ESR allocation of one Member State, in t CO2eq.
struct GreenDealAllocation {
  std::string country;
  std::map<int, double> points;  // 2021..2030
  double gd_2030_target = 0.0;
};

/// How the re-proportioning ratio is obtained.
///  Percentage:   pct_gd / pct_reg
///  Printed2030:  (e2005 - gd_2030) / (e2005 - Reg(2030)), i.e. from the
///                Regulation's own 2030 allocation
enum class RatioMode { Percentage, Printed2030 };

double greendeal_ratio(const TargetTable& target, RatioMode mode = RatioMode::Percentage);

/// GD(y) = e2005 - r (e2005 - Reg(y)). Throws std::domain_error when the
/// Regulation percentage is zero.
GreenDealAllocation green_deal_reallocate(const TargetTable& target,
                                          RatioMode mode = RatioMode::Percentage);

/// Ten equal yearly decrements from e2005 down to the Green Deal 2030 value.
GreenDealAllocation green_deal_reallocate_flat(const TargetTable& target);

/// Picks the flat rule when the Regulation percentage is zero.
GreenDealAllocation allocate_green_deal(const TargetTable& target,
                                        RatioMode mode = RatioMode::Percentage);

std::vector<GreenDealAllocation> allocate_green_deal(std::span<const TargetTable> targets,
                                                     RatioMode mode = RatioMode::Percentage);

/// ESR path: esr_2020 in 2020, the summed allocations (converted to Mt) for
/// 2021..2030, then linear to zero at 2050. Throws std::invalid_argument if
/// any Member State is missing or an allocation year is absent.
Trajectory esr_trajectory(std::span<const GreenDealAllocation> allocations, double esr_2020);

/// Inclusive annual sum. Throws std::out_of_range when [from, to] is not
/// inside the trajectory.
double integrate_budget(const Trajectory& t, int from, int to);

/// Wraps printed points as a trajectory (verbatim comparison mode).
Trajectory trajectory_from_points(TrajectoryLabel label, std::map<int, double> points);

/// Gap between the total budget and the sum of its sectoral budgets.
struct BudgetMismatch {
  double total = 0.0;
  double esr = 0.0;
  double ets = 0.0;
  double absolute = 0.0;  // total - (esr + ets)
  double relative = 0.0;  // absolute / total
};

BudgetMismatch budget_mismatch(const Trajectory& total, const Trajectory& esr, const Trajectory& ets);

}  // namespace cquota
