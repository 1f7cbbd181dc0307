#include "carbon_quota/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "carbon_quota/csv.hpp"

namespace cquota {

std::string GapRecord::formatted() const {
  if (below_floor()) return "< -100%";
  return csv::format_fixed(100.0 * gap, 2) + "%";
}

std::vector<GapRecord> capability_inertia_gap(const BudgetAllocation& cap, const BudgetAllocation& ine,
                                              const CountryValues& tapio) {
  if (cap.study != ine.study) throw std::invalid_argument("gap: mismatched studies");
  std::vector<GapRecord> out;
  for (const auto& c : cap.per_country) {
    if (c.value == 0.0) throw std::invalid_argument("gap: zero capability budget for " + c.code);
    const auto n = find_value(ine.per_country, c.code);
    if (!n) throw std::invalid_argument("gap: no inertia budget for " + c.code);
    out.push_back({c.code, (c.value - *n) / c.value, find_value(tapio, c.code).value_or(0.0)});
  }
  return out;
}

std::string_view to_string(Group g) {
  switch (g) {
    case Group::G1InertiaDominates: return "G1_INERTIA_DOMINATES";
    case Group::G2StrongDecoupling: return "G2_STRONG_DECOUPLING";
    case Group::G3WeakDecoupling: return "G3_WEAK_DECOUPLING";
    case Group::G4DecouplingSensitive: return "G4_DECOUPLING_SENSITIVE";
  }
  return "?";
}

std::string_view short_name(Group g) {
  return to_string(g).substr(0, 2);
}

std::vector<GroupAssignment> classify_groups(const std::vector<GapRecord>& gaps, const BlendSweep& diagonal,
                                             const GroupThresholds& thresholds) {
  const auto t = diagonal.parameters();
  if (t.size() < 3) throw std::invalid_argument("classify_groups: diagonal sweep needs at least three points");
  const auto known = diagonal.countries();

  std::vector<GroupAssignment> out;
  out.reserve(gaps.size());
  for (const auto& g : gaps) {
    if (std::find(known.begin(), known.end(), g.country) == known.end()) {
      throw std::invalid_argument("classify_groups: no diagonal trace for " + g.country);
    }
    const auto f = diagonal.trace(g.country);
    const double cap = f.front();
    const double ine = f.back();

    // Mean second divided difference is the t^2 coefficient, cap - dec.
    double curvature = 0.0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
      const double left = (f[i] - f[i - 1]) / (t[i] - t[i - 1]);
      const double right = (f[i + 1] - f[i]) / (t[i + 1] - t[i]);
      curvature += (right - left) / (t[i + 1] - t[i - 1]);
    }
    curvature /= static_cast<double>(f.size() - 2);

    const double span = std::abs(ine - cap);
    double rd = 0.0;
    if (span > 0.0) {
      rd = -curvature / (4.0 * span);
    } else if (curvature != 0.0) {
      rd = curvature < 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }

    const double lo = std::min(cap, ine);
    const double hi = std::max(cap, ine);
    double excess = 0.0;
    for (const double v : f) excess = std::max({excess, lo - v, v - hi});

    GroupAssignment a{g.country, Group::G3WeakDecoupling, curvature, rd, excess, g.gap, ""};
    if (excess > thresholds.band_tolerance_mt) {
      a.group = Group::G4DecouplingSensitive;
      a.rule = "trace leaves the cap-ine band";
    } else if (std::abs(rd) < thresholds.chord_deviation) {
      a.group = Group::G1InertiaDominates;
      a.rule = "trace follows the cap-ine chord";
    } else if (curvature > 0.0) {
      a.group = Group::G2StrongDecoupling;
      a.rule = "trace below the chord (dec < cap)";
    } else {
      a.rule = "trace above the chord (dec >= cap)";
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<FeasibilityRow> feasibility_table(const BlendSweep& sweep,
                                              std::span<const GreenDealAllocation> esr_allocations) {
  std::vector<FeasibilityRow> out;
  for (const auto& code : sweep.countries()) {
    const auto it = std::find_if(esr_allocations.begin(), esr_allocations.end(),
                                 [&](const GreenDealAllocation& a) { return a.country == code; });
    if (it == esr_allocations.end()) throw std::invalid_argument("feasibility: no ESR allocation for " + code);
    FeasibilityRow row{code, 0.0, sweep.trace(code), {}};
    for (int y = 2021; y <= 2030; ++y) {
      const auto p = it->points.find(y);
      if (p == it->points.end()) {
        throw std::invalid_argument("feasibility: " + code + " lacks ESR year " + std::to_string(y));
      }
      row.esr_budget_2021_2030 += p->second / 1e6;
    }
    for (const double b : row.blended) row.flagged.push_back(b >= kFeasibilityFactor * row.esr_budget_2021_2030);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace cquota
