#include "carbon_quota/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "carbon_quota/csv.hpp"
#include "carbon_quota/plot.hpp"

namespace cquota {
namespace {

constexpr int kAnchorYear = 2020;
constexpr int kNetZeroYear = 2050;

template <typename F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

int parameter_decimals(double step) {
  for (int d = 1; d < 6; ++d) {
    const double scaled = step * std::pow(10.0, d);
    if (std::abs(scaled - std::round(scaled)) < 1e-9) return d;
  }
  return 6;
}

Cell num(double v) { return Cell::number(v); }
Cell blank() { return Cell{}; }

std::vector<Cell> region_row(const CountrySeries& s, int from, int to) {
  std::vector<Cell> out;
  for (int y = from; y <= to; ++y) out.push_back(s.points.contains(y) ? num(s.at(y)) : blank());
  return out;
}

NumericTable normalized_table(const Dataset& data, Variable v, const std::string& id) {
  NumericTable t;
  t.id = id;
  for (int y = 2010; y <= 2019; ++y) t.columns.push_back("y" + std::to_string(y));
  auto add = [&](const std::string& code) {
    t.add_row(code, region_row(normalize_to_base(data.series_for(code, v), 2010), 2010, 2019));
  };
  add(std::string(kEu27Code));
  for (const auto& c : member_states()) add(c.code);
  return t;
}

NumericTable deltas_table(const Dataset& data) {
  NumericTable t;
  t.id = "table_a7";
  t.columns = {"dgdp_w3", "dgdp_w2", "dgdp_w1", "dghg_w3", "dghg_w2", "dghg_w1"};
  auto pct = [](const CountrySeries& s, int from) { return 100.0 * (s.at(kTapioEndYear) - s.at(from)) / s.at(from); };
  auto add = [&](const std::string& code) {
    const auto& g = data.series_for(code, Variable::GdpPerCapita);
    const auto& e = data.series_for(code, Variable::GhgPerCapita);
    std::vector<Cell> row;
    for (const auto* s : {&g, &e}) {
      for (const auto w : {TapioWindow::W3, TapioWindow::W2, TapioWindow::W1}) row.push_back(num(pct(*s, window_start(w))));
    }
    t.add_row(code, std::move(row));
  };
  add(std::string(kEu27Code));
  for (const auto& c : member_states()) add(c.code);
  return t;
}

double anchor_value(const Dataset& data, const Anchor& a, Variable v) {
  if (!a.fit) return a.value;
  return estimate_2020_anchor(data.series_for(kEu27Code, v), *a.fit, kAnchorYear);
}

}  // namespace

StageError::StageError(std::string stage, const std::string& what)
    : std::runtime_error("[" + stage + "] " + what), stage_(std::move(stage)) {}

Dataset load_for(const RunConfig& config) {
  return in_stage("ingest", [&] {
    if (!std::filesystem::is_directory(config.data_dir)) {
      throw std::runtime_error("data directory not found: " + config.data_dir.string());
    }
    return load_dataset(DatasetPaths::in_directory(config.data_dir));
  });
}

StudyResults compute_study(const Dataset& data, const RunConfig& config) {
  in_stage("config", [&] { validate(config); });
  StudyResults r;
  r.config = config;
  r.window = config.window();
  const std::string study(to_string(config.study));

  in_stage("trajectory", [&] {
    r.eu27_total = linear_to_zero(kAnchorYear, config.eu27_anchor, kNetZeroYear, TrajectoryLabel::Eu27Total);
    r.ets = linear_to_zero(kAnchorYear, anchor_value(data, config.ets_anchor, Variable::EtsEmissions), kNetZeroYear,
                           TrajectoryLabel::Ets);
    r.targets = data.targets;
    r.greendeal = allocate_green_deal(r.targets, config.ratio_mode);
    r.esr = esr_trajectory(r.greendeal, anchor_value(data, config.esr_anchor, Variable::EsrEmissions));
    r.mismatch = budget_mismatch(r.eu27_total, r.esr, r.ets);
    r.cb_eu27 = config.cb_eu27.value_or(r.eu27_total.budget);
  });

  in_stage("indices", [&] {
    r.indices = compute_index_set(data, r.window, config.tapio_source);
    r.capability = principle_allocation(study, "capability", r.indices.capability(), r.cb_eu27);
    r.decoupling = principle_allocation(study, "decoupling", r.indices.decoupling(), r.cb_eu27);
    r.inertia = principle_allocation(study, "inertia", r.indices.inertia(), r.cb_eu27);
    const auto& eu = data.series_for(kEu27Code, Variable::GdpPerCapita);
    if (eu.points.contains(2020)) {
      CountryValues gdp;
      for (const auto& c : member_states()) {
        const auto& s = data.series_for(c.code, Variable::GdpPerCapita);
        if (!s.points.contains(2020)) return;
        gdp.push_back({c.code, s.at(2020)});
      }
      r.capability_2020 = principle_allocation(study, "capability-2020", capability_index(gdp, eu.at(2020)), r.cb_eu27);
    }
  });

  in_stage("blend", [&] {
    r.cap_dec = sweep_linear(r.capability, r.decoupling, config.step);
    r.cap_ine = sweep_linear(r.capability, r.inertia, config.step);
    r.diagonal = sweep_diagonal(r.capability, r.decoupling, r.inertia, config.step);
  });

  in_stage("analysis", [&] {
    r.gaps = capability_inertia_gap(r.capability, r.inertia, r.indices.tapio());
    r.groups = classify_groups(r.gaps, r.diagonal, config.thresholds);
    r.feasibility = feasibility_table(r.cap_ine, r.greendeal);
  });

  r.notes = r.indices.notes;
  r.notes.push_back("EU27 budget exceeds ESR + ETS budgets by " + csv::format_fixed(r.mismatch.absolute, 2) +
                    " Mt (" + csv::format_fixed(100.0 * r.mismatch.relative, 2) + "%)");
  return r;
}

std::vector<std::string> sweep_columns(const BlendSweep& sweep) {
  const int d = parameter_decimals(sweep.step);
  std::vector<std::string> out;
  for (const auto& a : sweep.allocations) {
    std::string name = "w" + csv::format_fixed(a.w.value_or(0.0), d);
    if (sweep.axis == "w,z") name += "_z" + csv::format_fixed(a.z.value_or(0.0), d);
    out.push_back(std::move(name));
  }
  return out;
}

NumericTable trajectory_table(const StudyResults& r) {
  NumericTable t;
  t.id = "trajectory";
  t.key_column = "year";
  t.columns = {"esr", "eu27_total", "ets"};
  for (int y = kAnchorYear; y <= kNetZeroYear; ++y) {
    t.add_row(std::to_string(y), {num(r.esr.at(y)), num(r.eu27_total.at(y)), num(r.ets.at(y))});
  }
  t.add_row("budget", {num(r.esr.budget), num(r.eu27_total.budget), num(r.ets.budget)});
  return t;
}

NumericTable greendeal_table(const StudyResults& r) {
  NumericTable t;
  t.id = "greendeal";
  t.columns = {"pct_gd"};
  for (int y = 2021; y <= 2030; ++y) t.columns.push_back("y" + std::to_string(y));
  std::map<int, double> totals;
  double e2005 = 0.0;
  double gd2030 = 0.0;
  for (const auto& c : member_states()) {
    const auto tgt = std::find_if(r.targets.begin(), r.targets.end(), [&](const TargetTable& x) { return x.country == c.code; });
    const auto gd = std::find_if(r.greendeal.begin(), r.greendeal.end(),
                                 [&](const GreenDealAllocation& x) { return x.country == c.code; });
    if (tgt == r.targets.end() || gd == r.greendeal.end()) continue;
    std::vector<Cell> row{num(100.0 * tgt->pct_greendeal_2030)};
    for (const auto& [y, v] : gd->points) {
      row.push_back(num(v));
      totals[y] += v;
    }
    e2005 += tgt->e2005;
    gd2030 += gd->gd_2030_target;
    t.add_row(c.code, std::move(row));
  }
  std::vector<Cell> total{num(e2005 > 0.0 ? 100.0 * (gd2030 / e2005 - 1.0) : 0.0)};
  for (const auto& [y, v] : totals) total.push_back(num(v));
  t.add_row(std::string(kEu27Code), std::move(total));
  return t;
}

NumericTable indices_table(const IndexSet& set) {
  NumericTable t;
  t.id = "indices";
  t.key_column = "country";
  t.columns = {"CI", "tapio_W3", "tapio_W2", "tapio_W1", "tapio_avg", "tapio_rescaled", "DI", "decoupling_share", "II"};
  auto window = [](const IndexRow& row, TapioWindow w) {
    const auto it = row.windows.find(w);
    return it == row.windows.end() ? blank() : num(it->second);
  };
  auto add = [&](const IndexRow& row, bool member) {
    t.add_row(row.country, {member ? num(row.ci) : blank(), window(row, TapioWindow::W3), window(row, TapioWindow::W2),
                            window(row, TapioWindow::W1), num(row.tapio), num(row.tapio_rescaled), num(row.di),
                            member ? num(row.decoupling_share) : blank(), member ? num(row.ii) : blank()});
  };
  add(set.eu27, false);
  for (const auto& row : set.rows) add(row, true);
  return t;
}

NumericTable sweep_table(const BlendSweep& sweep, std::string id) {
  NumericTable t;
  t.id = std::move(id);
  t.columns = sweep_columns(sweep);
  for (const auto& code : sweep.countries()) {
    std::vector<Cell> row;
    for (const double v : sweep.trace(code)) row.push_back(num(v));
    t.add_row(code, std::move(row));
  }
  return t;
}

NumericTable gaps_table(const std::vector<GapRecord>& gaps) {
  NumericTable t;
  t.id = "gaps";
  t.columns = {"gap_pct", "gap", "tapio"};
  for (const auto& g : gaps) {
    t.add_row(g.country, {Cell{100.0 * g.gap, g.below_floor() ? "<-100" : ""}, Cell::label(g.formatted()), num(g.tapio)});
  }
  return t;
}

NumericTable groups_table(const std::vector<GroupAssignment>& groups) {
  NumericTable t;
  t.id = "groups";
  t.columns = {"group", "curvature", "chord_deviation", "band_excess", "gap_pct", "rule"};
  for (const auto& g : groups) {
    t.add_row(g.country, {Cell::label(std::string(short_name(g.group))), num(g.curvature), num(g.chord_deviation),
                          num(g.band_excess), num(100.0 * g.gap), Cell::label(g.rule)});
  }
  return t;
}

NumericTable feasibility_csv_table(const std::vector<FeasibilityRow>& rows, const BlendSweep& sweep) {
  NumericTable t;
  t.id = "feasibility";
  t.columns = {"esr_2021_2030"};
  const auto cols = sweep_columns(sweep);
  for (const auto& c : cols) t.columns.push_back(c);
  for (const auto& c : cols) t.columns.push_back("flag_" + c);
  for (const auto& r : rows) {
    std::vector<Cell> row{num(r.esr_budget_2021_2030)};
    for (const double b : r.blended) row.push_back(num(b));
    for (const bool f : r.flagged) row.push_back(Cell::label(f ? "true" : "false"));
    t.add_row(r.country, std::move(row));
  }
  return t;
}

std::optional<NumericTable> computed_for_fixture(const StudyResults& r, const Dataset& data, const std::string& stem) {
  const std::string eu(kEu27Code);
  if (stem == "table_1") return trajectory_table(r);
  if (stem == "table_2") {
    NumericTable t;
    t.id = stem;
    t.columns = {"w3", "w2", "w1", "average"};
    auto add = [&](const IndexRow& row) {
      std::vector<Cell> cells;
      for (const auto w : {TapioWindow::W3, TapioWindow::W2, TapioWindow::W1}) {
        const auto it = row.windows.find(w);
        cells.push_back(it == row.windows.end() ? blank() : num(it->second));
      }
      cells.push_back(num(row.tapio));
      t.add_row(row.country, std::move(cells));
    };
    add(r.indices.eu27);
    for (const auto& row : r.indices.rows) add(row);
    return t;
  }
  if (stem == "table_a3") {
    NumericTable t;
    t.id = stem;
    t.columns = {"ratio"};
    for (const auto& tgt : r.targets) {
      t.add_row(tgt.country, {tgt.pct_regulation_2030 == 0.0 ? Cell::label("-")
                                                              : num(greendeal_ratio(tgt, r.config.ratio_mode))});
    }
    return t;
  }
  if (stem == "table_a4") return greendeal_table(r);
  if (stem == "table_a5_normalized") return normalized_table(data, Variable::GdpPerCapita, stem);
  if (stem == "table_a6_normalized") return normalized_table(data, Variable::GhgPerCapita, stem);
  if (stem == "table_a7") return deltas_table(data);
  if (stem == "table_a8") {
    if (!r.capability_2020) return std::nullopt;
    NumericTable t;
    t.id = stem;
    t.columns = {"gdpcap_2020", "ratio", "capability_index", "cb_capability"};
    const double g_eu = data.series_for(eu, Variable::GdpPerCapita).at(2020);
    for (const auto& v : r.capability_2020->per_country) {
      const double g = data.series_for(v.code, Variable::GdpPerCapita).at(2020);
      t.add_row(v.code, {num(g), num(g_eu / g), num(v.value / r.cb_eu27), num(v.value)});
    }
    return t;
  }
  if (stem == "table_a9") {
    NumericTable t;
    t.id = stem;
    t.columns = {"tapio_avg", "tapio_rescaled", "di", "inv_di", "share", "cb_decoupling"};
    t.add_row(eu, {num(r.indices.eu27.tapio), num(r.indices.eu27.tapio_rescaled), num(1.0), num(1.0), blank(), blank()});
    for (const auto& row : r.indices.rows) {
      t.add_row(row.country, {num(row.tapio), num(row.tapio_rescaled), num(row.di), num(1.0 / row.di),
                              num(row.decoupling_share), num(r.decoupling.at(row.country))});
    }
    return t;
  }
  if (stem == "table_a10") {
    NumericTable t;
    t.id = stem;
    t.columns = {"ghg_2019_kt", "inertia_index", "cb_inertia"};
    for (const auto& row : r.indices.rows) {
      t.add_row(row.country, {num(1e3 * data.series_for(row.country, Variable::GhgTotal).at(2019)), num(row.ii),
                              num(r.inertia.at(row.country))});
    }
    return t;
  }
  if (stem == "table_3" || stem == "table_a11") return sweep_table(r.cap_dec, stem);
  if (stem == "table_a12" || stem == "table_a13") return sweep_table(r.cap_ine, stem);
  if (stem == "table_a14" || stem == "table_a15") return sweep_table(r.diagonal, stem);
  if (stem == "table_4" || stem == "table_5") {
    auto t = gaps_table(r.gaps);
    t.id = stem;
    return t;
  }
  if (stem == "table_6") {
    auto t = sweep_table(r.cap_ine, stem);
    t.columns.push_back("esr_2021_2030");
    double total = 0.0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& f = r.feasibility.at(i);
      t.cells[i].push_back(num(f.esr_budget_2021_2030));
      total += f.esr_budget_2021_2030;
    }
    std::vector<Cell> eu_row;
    for (const auto& a : r.cap_ine.allocations) eu_row.push_back(num(a.total()));
    eu_row.push_back(num(total));
    t.add_row(eu, std::move(eu_row));
    return t;
  }
  return std::nullopt;
}

std::vector<DiffReport> diff_study(const StudyResults& r, const Dataset& data, const std::filesystem::path& fixtures_dir) {
  return in_stage("diff", [&] {
    std::vector<DiffReport> out;
    const std::string study(to_string(r.config.study));
    std::map<std::string, NumericTable> fixtures;
    std::map<std::string, std::optional<NumericTable>> computed;
    for (const auto& entry : read_manifest(fixtures_dir / "manifest.csv")) {
      if (entry.study != "*" && entry.study != study) continue;
      const auto stem = std::filesystem::path(entry.file).stem().string();
      if (!computed.contains(stem)) computed[stem] = computed_for_fixture(r, data, stem);
      if (!computed[stem]) continue;
      if (!fixtures.contains(stem)) fixtures[stem] = read_table(fixtures_dir / entry.file, stem);
      out.push_back(diff_against_fixture(*computed[stem], fixtures[stem], entry));
    }
    return out;
  });
}

std::string groups_trace_json(const StudyResults& r) {
  nlohmann::ordered_json j;
  j["study"] = std::string(to_string(r.config.study));
  j["thresholds"] = {{"chord_deviation", r.config.thresholds.chord_deviation},
                     {"band_tolerance_mt", r.config.thresholds.band_tolerance_mt}};
  j["rule_order"] = {"G4: trace leaves the cap-ine band by more than band_tolerance_mt",
                     "G1: |chord_deviation| below chord_deviation threshold",
                     "G2: curvature > 0 (dec < cap)", "G3: otherwise"};
  auto& countries = j["countries"] = nlohmann::ordered_json::array();
  for (const auto& g : r.groups) {
    countries.push_back({{"country", g.country},
                         {"group", std::string(to_string(g.group))},
                         {"rule", g.rule},
                         {"curvature", g.curvature},
                         {"chord_deviation", g.chord_deviation},
                         {"band_excess", g.band_excess},
                         {"gap", g.gap}});
  }
  return j.dump(2) + "\n";
}

std::vector<ArtifactFile> render_artifacts(const StudyResults& r, const std::vector<DiffReport>& diffs) {
  std::vector<ArtifactFile> files;
  const auto& formats = r.config.formats;
  auto csv_file = [&](const std::string& name, const NumericTable& t, int decimals) {
    std::ostringstream s;
    write_table_csv(s, t, decimals);
    files.push_back({name, s.str()});
  };
  if (formats.contains("csv")) {
    csv_file("trajectory.csv", trajectory_table(r), 4);
    csv_file("greendeal.csv", greendeal_table(r), 2);
    csv_file("indices.csv", indices_table(r.indices), 6);
    csv_file("blend_cap_dec.csv", sweep_table(r.cap_dec, "cap-dec"), 4);
    csv_file("blend_cap_ine.csv", sweep_table(r.cap_ine, "cap-ine"), 4);
    csv_file("blend_diagonal.csv", sweep_table(r.diagonal, "diagonal"), 4);
    csv_file("gaps.csv", gaps_table(r.gaps), 4);
    csv_file("groups.csv", groups_table(r.groups), 6);
    csv_file("feasibility.csv", feasibility_csv_table(r.feasibility, r.cap_ine), 4);
    if (!diffs.empty()) {
      std::ostringstream s;
      write_diff_csv(s, diffs);
      files.push_back({"diff.csv", s.str()});
    }
  }
  if (formats.contains("json")) {
    nlohmann::ordered_json j;
    j["study"] = std::string(to_string(r.config.study));
    j["tapio_source"] = std::string(to_string(r.config.tapio_source));
    j["gdp_vintage"] = to_string(r.window.gdp);
    j["ghg_vintage"] = to_string(r.window.ghg);
    j["cb_eu27"] = r.cb_eu27;
    j["budgets"] = {{"eu27_total", r.eu27_total.budget}, {"esr", r.esr.budget}, {"ets", r.ets.budget},
                    {"mismatch_relative", r.mismatch.relative}};
    j["notes"] = r.notes;
    auto& d = j["diffs"] = nlohmann::ordered_json::array();
    for (const auto& rep : diffs) {
      d.push_back({{"table", rep.table_id},
                   {"kind", std::string(to_string(rep.kind))},
                   {"cells", rep.cells.size()},
                   {"match", rep.count(Verdict::Match)},
                   {"tolerance", rep.count(Verdict::Tolerance)},
                   {"discrepancy", rep.count(Verdict::Discrepancy)},
                   {"max_abs_diff", rep.max_abs_diff()}});
    }
    files.push_back({"summary.json", j.dump(2) + "\n"});
    files.push_back({"groups.json", groups_trace_json(r)});
  }
  if (formats.contains("svg")) {
    const std::string study = "Study " + std::string(to_string(r.config.study));
    auto spec_for = [](std::string title, std::string x_label) {
      PlotSpec p;
      p.title = std::move(title);
      p.x_label = std::move(x_label);
      return p;
    };
    files.push_back({"plot_cap_dec.svg", render_sweep_svg(r.cap_dec, spec_for("Capability-Decoupling, " + study, "w"))});
    files.push_back({"plot_cap_ine.svg", render_sweep_svg(r.cap_ine, spec_for("Capability-Inertia, " + study, "w"))});
    files.push_back({"plot_diagonal.svg",
                     render_sweep_svg(r.diagonal, spec_for("Capability-Decoupling-Inertia, " + study, "w = z"))});
    for (const auto g : {Group::G1InertiaDominates, Group::G2StrongDecoupling, Group::G3WeakDecoupling,
                         Group::G4DecouplingSensitive}) {
      auto spec = spec_for("Capability-Decoupling-Inertia, " + study + ", " + std::string(to_string(g)), "w = z");
      for (const auto& a : r.groups) {
        if (a.group == g) spec.countries.push_back(a.country);
      }
      if (spec.countries.empty()) continue;
      files.push_back({"plot_diagonal_" + std::string(short_name(g)) + ".svg", render_sweep_svg(r.diagonal, spec)});
    }
  }
  return files;
}

RunOutcome run_study(const RunConfig& config) {
  RunOutcome out;
  const auto data = load_for(config);
  out.results = compute_study(data, config);
  if (!config.fixtures_dir.empty() && std::filesystem::exists(config.fixtures_dir / "manifest.csv")) {
    out.diffs = diff_study(out.results, data, config.fixtures_dir);
  }
  out.files = in_stage("report", [&] { return render_artifacts(out.results, out.diffs); });
  in_stage("report", [&] {
    std::filesystem::create_directories(config.output_dir);
    for (const auto& f : out.files) {
      std::ofstream o(config.output_dir / f.name, std::ios::binary);
      if (!o) throw std::runtime_error("cannot write " + (config.output_dir / f.name).string());
      o << f.content;
    }
  });
  return out;
}

}  // namespace cquota
