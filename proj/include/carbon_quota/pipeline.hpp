#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carbon_quota/analysis.hpp"
#include "carbon_quota/blend.hpp"
#include "carbon_quota/config.hpp"
#include "carbon_quota/dataset.hpp"
#include "carbon_quota/indices.hpp"
#include "carbon_quota/table.hpp"
#include "carbon_quota/trajectory.hpp"

namespace cquota {

/// An error tagged with the pipeline stage that raised it.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct StudyResults {
  RunConfig config;
  StudyWindow window;
  Trajectory eu27_total;
  Trajectory ets;
  Trajectory esr;
  BudgetMismatch mismatch;
  std::vector<TargetTable> targets;
  std::vector<GreenDealAllocation> greendeal;
  double cb_eu27 = 0.0;
  IndexSet indices;
  BudgetAllocation capability;
  BudgetAllocation decoupling;
  BudgetAllocation inertia;
  /// Capability from 2020 GDP per capita, when the data reach 2020.
  std::optional<BudgetAllocation> capability_2020;
  BlendSweep cap_dec;
  BlendSweep cap_ine;
  BlendSweep diagonal;
  std::vector<GapRecord> gaps;
  std::vector<GroupAssignment> groups;
  std::vector<FeasibilityRow> feasibility;  // over the cap-ine sweep
  std::vector<std::string> notes;
};

/// Loads the dataset named by the config. Throws StageError("ingest").
Dataset load_for(const RunConfig& config);

/// trajectory -> indices -> blend -> analysis. Throws StageError naming the
/// failing stage.
StudyResults compute_study(const Dataset& data, const RunConfig& config);

/// Parameter column names of a sweep ("w0.0" ... "w1.0").
std::vector<std::string> sweep_columns(const BlendSweep& sweep);

NumericTable trajectory_table(const StudyResults& r);
NumericTable greendeal_table(const StudyResults& r);
NumericTable indices_table(const IndexSet& set);
NumericTable sweep_table(const BlendSweep& sweep, std::string id);
NumericTable gaps_table(const std::vector<GapRecord>& gaps);
NumericTable groups_table(const std::vector<GroupAssignment>& groups);
NumericTable feasibility_csv_table(const std::vector<FeasibilityRow>& rows, const BlendSweep& sweep);

/// Computed counterpart of a bundled fixture (by file stem), in the
/// fixture's row and column layout; nullopt for unknown stems.
std::optional<NumericTable> computed_for_fixture(const StudyResults& r, const Dataset& data, const std::string& stem);

/// Runs every manifest entry that applies to the study.
std::vector<DiffReport> diff_study(const StudyResults& r, const Dataset& data,
                                   const std::filesystem::path& fixtures_dir);

struct ArtifactFile {
  std::string name;
  std::string content;
};

/// Every output file of a run, in a fixed order.
std::vector<ArtifactFile> render_artifacts(const StudyResults& r, const std::vector<DiffReport>& diffs);

struct RunOutcome {
  StudyResults results;
  std::vector<DiffReport> diffs;
  std::vector<ArtifactFile> files;
};

/// Full run, writing the artifacts into config.output_dir. Fixture diffs
/// are skipped when the fixtures directory is unset or missing.
RunOutcome run_study(const RunConfig& config);

std::string groups_trace_json(const StudyResults& r);

}  // namespace cquota
