#include "carbon_quota/config.hpp"

#include <fstream>
#include <sstream>

#include "carbon_quota/csv.hpp"

namespace cquota {
namespace {

double number(std::string_view key, std::string_view value) {
  const auto v = csv::parse_number(value);
  if (!v) throw ConfigError(std::string(key) + ": not a number '" + std::string(value) + "'");
  return *v;
}

Anchor anchor(std::string_view key, std::string_view value) {
  constexpr std::string_view kFit = "fit:";
  if (value.substr(0, kFit.size()) == kFit) {
    const auto span = parse_year_span(value.substr(kFit.size()));
    if (!span || span->to <= span->from) {
      throw ConfigError(std::string(key) + ": expected fit:YYYY-YYYY, got '" + std::string(value) + "'");
    }
    return {0.0, YearRange{span->from, span->to}};
  }
  return {number(key, value), std::nullopt};
}

std::filesystem::path resolve(std::string_view value, const std::filesystem::path& relative_to) {
  std::filesystem::path p{std::string(value)};
  if (p.is_relative() && !relative_to.empty()) p = relative_to / p;
  return p;
}

}  // namespace

StudyWindow RunConfig::window() const {
  auto w = study_window(study);
  if (gdp_vintage) w.gdp = *gdp_vintage;
  if (ghg_vintage) w.ghg = *ghg_vintage;
  return w;
}

void set_config_value(RunConfig& c, std::string_view key, std::string_view value,
                      const std::filesystem::path& relative_to) {
  if (key == "study") {
    const auto s = parse_study(value);
    if (!s) throw ConfigError("study: expected 2016-2019 or 2019, got '" + std::string(value) + "'");
    c.study = *s;
  } else if (key == "cb_eu27") {
    c.cb_eu27 = number(key, value);
  } else if (key == "tapio_source") {
    const auto s = parse_tapio_source(value);
    if (!s) throw ConfigError("tapio_source: expected raw, deltas or override");
    c.tapio_source = *s;
  } else if (key == "gdp_vintage" || key == "ghg_vintage") {
    const auto span = parse_year_span(value);
    if (!span) throw ConfigError(std::string(key) + ": expected YYYY or YYYY-YYYY");
    (key == "gdp_vintage" ? c.gdp_vintage : c.ghg_vintage) = *span;
  } else if (key == "output_dir") {
    c.output_dir = resolve(value, relative_to);
  } else if (key == "data_dir") {
    c.data_dir = resolve(value, relative_to);
  } else if (key == "fixtures_dir") {
    c.fixtures_dir = resolve(value, relative_to);
  } else if (key == "formats") {
    c.formats.clear();
    std::stringstream ss{std::string(value)};
    std::string f;
    while (std::getline(ss, f, ',')) {
      f = csv::trim(f);
      if (f != "csv" && f != "json" && f != "svg") throw ConfigError("formats: unknown format '" + f + "'");
      c.formats.insert(f);
    }
  } else if (key == "eu27_anchor") {
    c.eu27_anchor = number(key, value);
  } else if (key == "ets_anchor") {
    c.ets_anchor = anchor(key, value);
  } else if (key == "esr_anchor") {
    c.esr_anchor = anchor(key, value);
  } else if (key == "step") {
    c.step = number(key, value);
  } else if (key == "ratio_mode") {
    if (value == "percentage") {
      c.ratio_mode = RatioMode::Percentage;
    } else if (value == "printed-2030") {
      c.ratio_mode = RatioMode::Printed2030;
    } else {
      throw ConfigError("ratio_mode: expected percentage or printed-2030");
    }
  } else if (key == "chord_threshold") {
    c.thresholds.chord_deviation = number(key, value);
  } else if (key == "band_tolerance") {
    c.thresholds.band_tolerance_mt = number(key, value);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

RunConfig parse_run_config(std::string_view text, RunConfig base, const std::filesystem::path& relative_to) {
  std::stringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = csv::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(n) + ": expected key = value");
    try {
      set_config_value(base, csv::trim(line.substr(0, eq)), csv::trim(line.substr(eq + 1)), relative_to);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_run_config(ss.str(), std::move(base), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void validate(const RunConfig& c) {
  if (c.cb_eu27 && !(*c.cb_eu27 > 0.0)) throw ConfigError("cb_eu27 must be positive");
  if (!(c.step > 0.0 && c.step <= 1.0)) throw ConfigError("step must be in (0, 1]");
  if (c.formats.empty()) throw ConfigError("no output format selected");
  if (!c.ets_anchor.fit && !(c.ets_anchor.value > 0.0)) throw ConfigError("ets_anchor must be positive");
  if (!c.esr_anchor.fit && !(c.esr_anchor.value > 0.0)) throw ConfigError("esr_anchor must be positive");
  if (!(c.eu27_anchor > 0.0)) throw ConfigError("eu27_anchor must be positive");
}

}  // namespace cquota
