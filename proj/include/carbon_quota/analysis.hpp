#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carbon_quota/blend.hpp"
#include "carbon_quota/trajectory.hpp"

namespace cquota {

struct GapRecord {
  std::string country;
  double gap = 0.0;  // (cap - ine) / cap
  double tapio = 0.0;

  bool below_floor() const { return gap < -1.0; }
  /// Percentage with two decimals, or "< -100%" below the floor.
  std::string formatted() const;
};

/// Throws std::invalid_argument for a zero capability budget or mismatched
/// inputs. `tapio` may be empty.
std::vector<GapRecord> capability_inertia_gap(const BudgetAllocation& cap, const BudgetAllocation& ine,
                                              const CountryValues& tapio);

enum class Group { G1InertiaDominates, G2StrongDecoupling, G3WeakDecoupling, G4DecouplingSensitive };

std::string_view to_string(Group g);
std::string_view short_name(Group g);  // "G1".."G4"

/// Calibrated defaults; see tools/calibrate_groups.py.
struct GroupThresholds {
  /// G1 when the diagonal trace stays this close (relative) to the cap-ine
  /// chord: |dec - cap| / (4 |ine - cap|) below the threshold.
  double chord_deviation = 0.05;
  /// G4 when the trace leaves [min(cap, ine), max(cap, ine)] by more than
  /// this many Mt anywhere on the grid.
  double band_tolerance_mt = 0.5;
};

struct GroupAssignment {
  std::string country;
  Group group = Group::G1InertiaDominates;
  double curvature = 0.0;        // cap - dec, from second differences
  double chord_deviation = 0.0;  // (dec - cap) / (4 |ine - cap|)
  double band_excess = 0.0;      // largest excursion outside the cap-ine band, Mt
  double gap = 0.0;
  std::string rule;  // which rule fired, for the trace
};

/// Rule order: G4 (leaves band), G1 (near chord), G2 (dec < cap), G3.
/// Throws std::invalid_argument when the sweep has fewer than three points
/// or lacks a country present in `gaps`.
std::vector<GroupAssignment> classify_groups(const std::vector<GapRecord>& gaps, const BlendSweep& diagonal,
                                             const GroupThresholds& thresholds = {});

struct FeasibilityRow {
  std::string country;
  double esr_budget_2021_2030 = 0.0;  // Mt
  std::vector<double> blended;
  std::vector<bool> flagged;  // blended >= 3 * esr budget
};

inline constexpr double kFeasibilityFactor = 3.0;

/// Throws std::invalid_argument when an allocation misses a 2021..2030 year
/// or a sweep country has no allocation.
std::vector<FeasibilityRow> feasibility_table(const BlendSweep& sweep,
                                              std::span<const GreenDealAllocation> esr_allocations);

}  // namespace cquota
