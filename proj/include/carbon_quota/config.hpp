#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "carbon_quota/analysis.hpp"
#include "carbon_quota/indices.hpp"
#include "carbon_quota/trajectory.hpp"

namespace cquota {

/// A 2020 anchor given either as a value (Mt) or as a least-squares fit over
/// a range of the loaded history.
struct Anchor {
  double value = 0.0;
  std::optional<YearRange> fit;
};

struct RunConfig {
  StudyLabel study = StudyLabel::Study2016_2019;
  /// Unset: the EU27 trajectory budget.
  std::optional<double> cb_eu27;
  TapioSource tapio_source = TapioSource::Override;
  std::optional<YearSpan> gdp_vintage;
  std::optional<YearSpan> ghg_vintage;
  std::filesystem::path output_dir = "carbon-quota-out";
  std::set<std::string> formats = {"csv", "json", "svg"};
  std::filesystem::path data_dir;
  std::filesystem::path fixtures_dir;
  double eu27_anchor = 3875.48;
  Anchor ets_anchor{1224.24, std::nullopt};
  Anchor esr_anchor{2079.17, std::nullopt};
  double step = 0.1;
  RatioMode ratio_mode = RatioMode::Percentage;
  GroupThresholds thresholds;

  /// Study window with the configured vintages applied.
  StudyWindow window() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies "key = value" lines on top of `base`. '#' starts a comment.
/// Relative paths resolve against `relative_to`. Throws ConfigError naming
/// the line for unknown keys or bad values.
RunConfig parse_run_config(std::string_view text, RunConfig base = {},
                           const std::filesystem::path& relative_to = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

/// Sets one key; the CLI uses this for command-line overrides.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value,
                      const std::filesystem::path& relative_to = {});

/// Throws ConfigError when cb_eu27 <= 0, step is outside (0, 1] or no format
/// is selected.
void validate(const RunConfig& config);

}  // namespace cquota
