// carbon-quota: command-line front end for the effort-sharing engine.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "carbon_quota/csv.hpp"
#include "carbon_quota/pipeline.hpp"
#include "carbon_quota/plot.hpp"

namespace {

using namespace cquota;

enum Exit { kOk = 0, kValidation = 1, kDiscrepancy = 2 };

struct Common {
  std::string config_path;
  std::string study;
  std::string data_dir;
  std::string fixtures_dir;
  std::string tapio_source;
  std::string gdp_vintage;
  std::string ghg_vintage;
  std::string cb_eu27;
  std::string step;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "flat key = value run config");
  cmd->add_option("--study", c.study, "2016-2019 or 2019");
  cmd->add_option("--data-dir", c.data_dir, "directory with the input files");
  cmd->add_option("--fixtures-dir", c.fixtures_dir, "directory with printed tables and manifest.csv");
  cmd->add_option("--tapio-source", c.tapio_source, "raw, deltas or override");
  cmd->add_option("--gdp-vintage", c.gdp_vintage, "YYYY or YYYY-YYYY");
  cmd->add_option("--ghg-vintage", c.ghg_vintage, "YYYY or YYYY-YYYY");
  cmd->add_option("--cb-eu27", c.cb_eu27, "EU27 carbon budget, Mt CO2eq");
  cmd->add_option("--step", c.step, "sweep step");
}

RunConfig build_config(const Common& c) {
  RunConfig cfg;
  cfg.data_dir = CQUOTA_DATA_DIR;
  cfg.fixtures_dir = CQUOTA_FIXTURES_DIR;
  if (!c.config_path.empty()) cfg = load_run_config(c.config_path, cfg);
  const std::pair<const char*, const std::string*> overrides[] = {
      {"study", &c.study},           {"data_dir", &c.data_dir},       {"fixtures_dir", &c.fixtures_dir},
      {"tapio_source", &c.tapio_source}, {"gdp_vintage", &c.gdp_vintage}, {"ghg_vintage", &c.ghg_vintage},
      {"cb_eu27", &c.cb_eu27},       {"step", &c.step},
  };
  for (const auto& [key, value] : overrides) {
    if (!value->empty()) set_config_value(cfg, key, *value);
  }
  validate(cfg);
  return cfg;
}

void print_table(const NumericTable& t, int decimals) { write_table_csv(std::cout, t, decimals); }

void print_diff_summary(const std::vector<DiffReport>& diffs) {
  for (const auto& d : diffs) {
    std::cout << d.table_id << ' ' << to_string(d.kind) << " cells=" << d.cells.size()
              << " match=" << d.count(Verdict::Match) << " tolerance=" << d.count(Verdict::Tolerance)
              << " discrepancy=" << d.count(Verdict::Discrepancy)
              << " max_abs_diff=" << csv::format_fixed(d.max_abs_diff(), 4) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"carbon-quota: EU27 carbon budget effort sharing"};
  app.require_subcommand(1);

  auto* formats = app.add_subcommand("formats", "print the input and output file formats");

  Common c_traj;
  auto* traj = app.add_subcommand("trajectory", "EU27, ESR and ETS paths with budgets");
  add_common(traj, c_traj);

  Common c_idx;
  auto* idx = app.add_subcommand("indices", "capability, Tapio, decoupling and inertia indices");
  add_common(idx, c_idx);

  Common c_blend;
  std::string mode = "diagonal";
  auto* blend = app.add_subcommand("blend", "blended budgets over the parameter grid");
  add_common(blend, c_blend);
  blend->add_option("--mode", mode, "cap-ine, cap-dec, diagonal or grid")
      ->check(CLI::IsMember({"cap-ine", "cap-dec", "diagonal", "grid"}));

  Common c_gaps;
  auto* gaps = app.add_subcommand("gaps", "capability-inertia gap per Member State");
  add_common(gaps, c_gaps);

  Common c_groups;
  std::string trace_path;
  auto* groups = app.add_subcommand("groups", "group classification from the diagonal sweep");
  add_common(groups, c_groups);
  groups->add_option("--trace", trace_path, "write the JSON rule trace here ('-' for stdout)");

  Common c_feas;
  auto* feas = app.add_subcommand("feasibility", "blended budgets against 3x the ESR 2021-2030 budget");
  add_common(feas, c_feas);

  Common c_run;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "full study run writing CSV, JSON and SVG outputs");
  add_common(run, c_run);
  run->add_option("--output-dir", output_dir, "output directory");

  Common c_diff;
  std::string table_filter;
  bool strict = false;
  bool cells = false;
  auto* diff = app.add_subcommand("diff", "compare computed tables with the bundled printed tables");
  add_common(diff, c_diff);
  diff->add_option("--table", table_filter, "only this manifest table id");
  diff->add_flag("--strict", strict, "exit 2 on any discrepancy in a reproduction target");
  diff->add_flag("--cells", cells, "print every compared cell");

  CLI11_PARSE(app, argc, argv);

  try {
    if (formats->parsed()) {
      std::cout << formats_reference();
      return kOk;
    }

    auto compute = [](const Common& c) {
      const auto cfg = build_config(c);
      const auto data = load_for(cfg);
      for (const auto& w : data.warnings) std::cerr << "warning: " << w << '\n';
      return std::make_pair(data, compute_study(data, cfg));
    };

    if (traj->parsed()) {
      const auto [data, r] = compute(c_traj);
      print_table(trajectory_table(r), 2);
      std::cout << "# budgets 2020-2050: eu27_total=" << csv::format_fixed(r.eu27_total.budget, 2)
                << " esr=" << csv::format_fixed(r.esr.budget, 2) << " ets=" << csv::format_fixed(r.ets.budget, 2)
                << " mismatch=" << csv::format_fixed(100.0 * r.mismatch.relative, 2) << "%\n";
    } else if (idx->parsed()) {
      const auto [data, r] = compute(c_idx);
      print_table(indices_table(r.indices), 6);
      for (const auto& n : r.indices.notes) std::cerr << "note: " << n << '\n';
    } else if (blend->parsed()) {
      const auto [data, r] = compute(c_blend);
      if (mode == "cap-ine") {
        print_table(sweep_table(r.cap_ine, mode), 4);
      } else if (mode == "cap-dec") {
        print_table(sweep_table(r.cap_dec, mode), 4);
      } else if (mode == "diagonal") {
        print_table(sweep_table(r.diagonal, mode), 4);
      } else {
        print_table(sweep_table(sweep_surface(r.capability, r.decoupling, r.inertia, r.config.step), mode), 4);
      }
    } else if (gaps->parsed()) {
      const auto [data, r] = compute(c_gaps);
      print_table(gaps_table(r.gaps), 4);
    } else if (groups->parsed()) {
      const auto [data, r] = compute(c_groups);
      print_table(groups_table(r.groups), 6);
      if (trace_path == "-") {
        std::cout << groups_trace_json(r);
      } else if (!trace_path.empty()) {
        std::ofstream(trace_path) << groups_trace_json(r);
      }
    } else if (feas->parsed()) {
      const auto [data, r] = compute(c_feas);
      print_table(feasibility_csv_table(r.feasibility, r.cap_ine), 4);
    } else if (run->parsed()) {
      auto cfg = build_config(c_run);
      if (!output_dir.empty()) cfg.output_dir = output_dir;
      const auto out = run_study(cfg);
      for (const auto& f : out.files) std::cout << (cfg.output_dir / f.name).string() << '\n';
      for (const auto& n : out.results.notes) std::cerr << "note: " << n << '\n';
    } else if (diff->parsed()) {
      const auto [data, r] = compute(c_diff);
      auto reports = diff_study(r, data, r.config.fixtures_dir);
      if (!table_filter.empty()) {
        std::erase_if(reports, [&](const DiffReport& d) { return d.table_id != table_filter; });
        if (reports.empty()) {
          std::cerr << "error: no manifest entry '" << table_filter << "' for this study\n";
          return kValidation;
        }
      }
      if (cells) {
        write_diff_csv(std::cout, reports);
      } else {
        print_diff_summary(reports);
      }
      if (strict) {
        for (const auto& d : reports) {
          if (d.kind == FixtureKind::Target && d.count(Verdict::Discrepancy) > 0) return kDiscrepancy;
        }
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
