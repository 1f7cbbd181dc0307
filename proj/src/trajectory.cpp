#include "carbon_quota/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

#include "carbon_quota/country.hpp"

namespace cquota {
namespace {

constexpr int kAllocFirst = 2021;
constexpr int kAllocLast = 2030;
constexpr int kNetZeroYear = 2050;
constexpr double kTonnesPerMt = 1e6;

double sum_points(const std::map<int, double>& points, int from, int to) {
  double s = 0.0;
  for (auto it = points.lower_bound(from); it != points.end() && it->first <= to; ++it) s += it->second;
  return s;
}

}  // namespace

std::string_view to_string(TrajectoryLabel label) {
  switch (label) {
    case TrajectoryLabel::Eu27Total: return "EU27_TOTAL";
    case TrajectoryLabel::Esr: return "ESR";
    case TrajectoryLabel::Ets: return "ETS";
    case TrajectoryLabel::EsrMember: return "ESR_MEMBER";
  }
  return "?";
}

int Trajectory::first_year() const {
  if (points.empty()) throw std::out_of_range("empty trajectory");
  return points.begin()->first;
}

int Trajectory::last_year() const {
  if (points.empty()) throw std::out_of_range("empty trajectory");
  return points.rbegin()->first;
}

double Trajectory::at(int year) const {
  const auto it = points.find(year);
  if (it == points.end()) {
    throw std::out_of_range("trajectory " + std::string(to_string(label)) + " has no year " +
                            std::to_string(year));
  }
  return it->second;
}

Trajectory linear_to_zero(int anchor_year, double anchor_value, int zero_year, TrajectoryLabel label) {
  if (zero_year <= anchor_year) throw std::invalid_argument("linear_to_zero: non-positive span");
  if (!(anchor_value > 0.0)) throw std::invalid_argument("linear_to_zero: anchor must be positive");
  Trajectory t;
  t.label = label;
  const double span = zero_year - anchor_year;
  for (int y = anchor_year; y <= zero_year; ++y) {
    t.points[y] = anchor_value * (zero_year - y) / span;
  }
  t.budget = sum_points(t.points, anchor_year, zero_year);
  return t;
}

double estimate_2020_anchor(const CountrySeries& history, YearRange fit, int at_year) {
  if (fit.to - fit.from < 1) throw std::invalid_argument("estimate_2020_anchor: need at least two years");
  if (!history.covers(fit.from, fit.to)) {
    throw std::invalid_argument("estimate_2020_anchor: history does not cover " + std::to_string(fit.from) +
                                "-" + std::to_string(fit.to));
  }
  // Centre the abscissa to keep the normal equations well conditioned.
  const double n = fit.to - fit.from + 1;
  const double xbar = 0.5 * (fit.from + fit.to);
  double ybar = 0.0;
  for (int y = fit.from; y <= fit.to; ++y) ybar += history.at(y);
  ybar /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (int y = fit.from; y <= fit.to; ++y) {
    const double dx = y - xbar;
    sxy += dx * (history.at(y) - ybar);
    sxx += dx * dx;
  }
  return ybar + (sxy / sxx) * (at_year - xbar);
}

double greendeal_ratio(const TargetTable& target, RatioMode mode) {
  switch (mode) {
    case RatioMode::Percentage:
      if (target.pct_regulation_2030 == 0.0) break;
      return target.pct_greendeal_2030 / target.pct_regulation_2030;
    case RatioMode::Printed2030: {
      const double reg_cut = target.e2005 - target.regulation_allocations.at(kAllocLast);
      if (reg_cut == 0.0) break;
      return -target.e2005 * target.pct_greendeal_2030 / reg_cut;
    }
  }
  throw std::domain_error("Green Deal ratio undefined for " + target.country +
                          " (zero Regulation reduction); use the flat rule");
}

GreenDealAllocation green_deal_reallocate(const TargetTable& target, RatioMode mode) {
  const double r = greendeal_ratio(target, mode);
  GreenDealAllocation out{target.country, {}, target.e2005 * (1.0 + target.pct_greendeal_2030)};
  for (int y = kAllocFirst; y <= kAllocLast; ++y) {
    out.points[y] = target.e2005 - r * (target.e2005 - target.regulation_allocations.at(y));
  }
  return out;
}

GreenDealAllocation green_deal_reallocate_flat(const TargetTable& target) {
  const double gd_2030 = target.e2005 * (1.0 + target.pct_greendeal_2030);
  GreenDealAllocation out{target.country, {}, gd_2030};
  const double step = (target.e2005 - gd_2030) / 10.0;
  for (int k = 0; k < 10; ++k) out.points[kAllocFirst + k] = target.e2005 - (k + 1) * step;
  out.points[kAllocLast] = gd_2030;
  return out;
}

GreenDealAllocation allocate_green_deal(const TargetTable& target, RatioMode mode) {
  if (target.pct_regulation_2030 == 0.0) return green_deal_reallocate_flat(target);
  return green_deal_reallocate(target, mode);
}

std::vector<GreenDealAllocation> allocate_green_deal(std::span<const TargetTable> targets, RatioMode mode) {
  std::vector<GreenDealAllocation> out;
  out.reserve(targets.size());
  for (const auto& t : targets) out.push_back(allocate_green_deal(t, mode));
  return out;
}

Trajectory esr_trajectory(std::span<const GreenDealAllocation> allocations, double esr_2020) {
  for (const auto& c : member_states()) {
    const bool found = std::any_of(allocations.begin(), allocations.end(),
                                   [&](const GreenDealAllocation& a) { return a.country == c.code; });
    if (!found) throw std::invalid_argument("esr_trajectory: missing allocation for " + c.code);
  }
  Trajectory t;
  t.label = TrajectoryLabel::Esr;
  t.points[2020] = esr_2020;
  for (int y = kAllocFirst; y <= kAllocLast; ++y) {
    double total = 0.0;
    for (const auto& c : member_states()) {
      const auto& a = *std::find_if(allocations.begin(), allocations.end(),
                                    [&](const GreenDealAllocation& g) { return g.country == c.code; });
      const auto it = a.points.find(y);
      if (it == a.points.end()) {
        throw std::invalid_argument("esr_trajectory: " + c.code + " lacks year " + std::to_string(y));
      }
      total += it->second;
    }
    t.points[y] = total / kTonnesPerMt;
  }
  const auto tail = linear_to_zero(kAllocLast, t.points[kAllocLast], kNetZeroYear);
  for (const auto& [y, v] : tail.points) {
    if (y > kAllocLast) t.points[y] = v;
  }
  t.budget = sum_points(t.points, 2020, kNetZeroYear);
  return t;
}

double integrate_budget(const Trajectory& t, int from, int to) {
  if (from > to || t.points.empty() || from < t.first_year() || to > t.last_year()) {
    throw std::out_of_range("integrate_budget: range " + std::to_string(from) + "-" + std::to_string(to) +
                            " outside trajectory");
  }
  return sum_points(t.points, from, to);
}

Trajectory trajectory_from_points(TrajectoryLabel label, std::map<int, double> points) {
  Trajectory t;
  t.label = label;
  t.points = std::move(points);
  if (!t.points.empty()) t.budget = sum_points(t.points, t.first_year(), t.last_year());
  return t;
}

BudgetMismatch budget_mismatch(const Trajectory& total, const Trajectory& esr, const Trajectory& ets) {
  BudgetMismatch m{total.budget, esr.budget, ets.budget, 0.0, 0.0};
  m.absolute = m.total - (m.esr + m.ets);
  m.relative = m.total != 0.0 ? m.absolute / m.total : 0.0;
  return m;
}

}  // namespace cquota
