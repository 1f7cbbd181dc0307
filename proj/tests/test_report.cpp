#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "carbon_quota/config.hpp"
#include "carbon_quota/pipeline.hpp"
#include "carbon_quota/plot.hpp"
#include "carbon_quota/table.hpp"
#include "support.hpp"

using namespace cquota;

namespace {

std::size_t occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("run configuration") {
  SUBCASE("defaults") {
    const RunConfig c;
    CHECK(c.study == StudyLabel::Study2016_2019);
    CHECK_FALSE(c.cb_eu27);
    CHECK(c.tapio_source == TapioSource::Override);
    CHECK(c.step == 0.1);
    CHECK(c.formats.size() == 3);
  }
  SUBCASE("parsing") {
    const auto c = parse_run_config(
        "# comment\nstudy = 2019\ncb_eu27 = 50000\ntapio_source = raw\ngdp_vintage = 2017-2019\n"
        "formats = csv, json\nets_anchor = fit:2013-2019\nratio_mode = printed-2030\nchord_threshold = 0.07\n"
        "output_dir = out\n",
        {}, "/base");
    CHECK(c.study == StudyLabel::Study2019);
    CHECK(*c.cb_eu27 == 50000.0);
    CHECK(c.tapio_source == TapioSource::Raw);
    CHECK(*c.gdp_vintage == YearSpan{2017, 2019});
    CHECK(c.formats == std::set<std::string>{"csv", "json"});
    REQUIRE(c.ets_anchor.fit);
    CHECK(c.ets_anchor.fit->from == 2013);
    CHECK(c.ratio_mode == RatioMode::Printed2030);
    CHECK(c.thresholds.chord_deviation == 0.07);
    CHECK(c.output_dir == std::filesystem::path("/base/out"));
    CHECK(c.window().gdp == YearSpan{2017, 2019});
  }
  SUBCASE("errors name the line") {
    CHECK_THROWS_WITH_AS(parse_run_config("study = 2019\ncolour = red\n"), doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("study = 2020\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("cb_eu27 = lots\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("formats = pdf\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(load_run_config("/nonexistent/run.conf"), ConfigError);
  }
  SUBCASE("validation") {
    RunConfig c;
    c.cb_eu27 = -1.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.cb_eu27 = 1.0;
    c.step = 0.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.step = 0.1;
    c.formats.clear();
    CHECK_THROWS_AS(validate(c), ConfigError);
  }
}

TEST_CASE("printed_half_unit") {
  CHECK(printed_half_unit("1226.42") == doctest::Approx(0.005));
  CHECK(printed_half_unit("1530") == 0.5);
  CHECK(printed_half_unit("-0.296") == doctest::Approx(0.0005));
  CHECK(printed_half_unit("6.76E+07") == doctest::Approx(5e4));
  CHECK(printed_half_unit("84.76%") == doctest::Approx(0.005));
}

TEST_CASE("fixture diffing") {
  const auto dir = testing::scratch("diff");
  const auto fixture = read_table(testing::write(dir, "t.csv", "country_code,a,b\nBE,1.00,-35%\nDE,<-100,7\nFR,2,\n"), "t");
  NumericTable computed;
  computed.id = "t";
  computed.columns = {"a", "b"};
  computed.add_row("BE", {Cell::number(1.3), Cell::number(-35.2)});
  computed.add_row("DE", {Cell::number(-412.0), Cell::number(9.0)});
  computed.add_row("FR", {Cell::number(2.0), Cell::number(1.0)});

  ManifestEntry entry;
  entry.table_id = "t";
  entry.tolerance = {0.5, 0.0};
  const auto report = diff_against_fixture(computed, fixture, entry);
  CHECK(report.cells.size() == 5);
  CHECK(report.count(Verdict::Match) == 3);
  CHECK(report.count(Verdict::Tolerance) == 1);
  CHECK(report.count(Verdict::Discrepancy) == 1);
  CHECK(report.max_abs_diff() == doctest::Approx(2.0));

  std::ostringstream out;
  write_diff_csv(out, {report});
  CHECK(out.str().find("discrepancy") != std::string::npos);

  SUBCASE("restricted rows and columns") {
    entry.rows = {"BE"};
    entry.columns = {"a"};
    CHECK(diff_against_fixture(computed, fixture, entry).cells.size() == 1);
  }
  SUBCASE("shape mismatch") {
    entry.rows = {"IT"};
    CHECK_THROWS_AS(diff_against_fixture(computed, fixture, entry), std::invalid_argument);
  }
  SUBCASE("manifest") {
    const auto m = read_manifest(testing::kFixtures / "manifest.csv");
    CHECK(m.size() >= 20);
    for (const auto& e : m) CHECK(std::filesystem::exists(testing::kFixtures / e.file));
  }
}

TEST_CASE("sweep plots") {
  BudgetAllocation a{"2019", "a", {{"BE", 1.0}, {"DE", 2.0}}, 3.0, std::nullopt, std::nullopt};
  BudgetAllocation b{"2019", "b", {{"BE", 2.0}, {"DE", 1.0}}, 3.0, std::nullopt, std::nullopt};
  const auto sweep = sweep_linear(a, b);
  PlotSpec spec;
  spec.title = "test";
  const auto all = render_sweep_svg(sweep, spec);
  CHECK(all.rfind("<svg", 0) == 0);
  CHECK(occurrences(all, "<polyline") == 2);
  spec.countries = {"DE"};
  CHECK(occurrences(render_sweep_svg(sweep, spec), "<polyline") == 1);
  spec.countries = {"IT"};
  CHECK_THROWS_AS(render_sweep_svg(sweep, spec), std::invalid_argument);
  spec.countries.clear();
  CHECK_THROWS_AS(render_sweep_svg(BlendSweep{}, spec), std::invalid_argument);
}

TEST_CASE("study runs") {
  SUBCASE("byte-identical reruns") {
    RunConfig c;
    c.study = StudyLabel::Study2019;
    c.data_dir = testing::kData;
    c.fixtures_dir = testing::kFixtures;
    c.output_dir = testing::scratch("run-a");
    const auto first = run_study(c);
    c.output_dir = testing::scratch("run-b");
    const auto second = run_study(c);
    REQUIRE(first.files.size() == second.files.size());
    for (std::size_t i = 0; i < first.files.size(); ++i) {
      CHECK(first.files[i].name == second.files[i].name);
      CHECK(first.files[i].content == second.files[i].content);
      CHECK(testing::read(testing::scratch("run-b").parent_path() / "cquota-test-run-a" / first.files[i].name) ==
            first.files[i].content);
    }
    const auto names = [&] {
      std::vector<std::string> n;
      for (const auto& f : first.files) n.push_back(f.name);
      return n;
    }();
    for (const char* f : {"trajectory.csv", "indices.csv", "blend_diagonal.csv", "groups.json", "diff.csv",
                          "summary.json", "plot_diagonal.svg"})
      CHECK(std::find(names.begin(), names.end(), f) != names.end());
  }
  SUBCASE("format selection") {
    RunConfig c;
    c.data_dir = testing::kData;
    c.formats = {"csv"};
    c.output_dir = testing::scratch("run-csv");
    for (const auto& f : run_study(c).files) CHECK(f.name.ends_with(".csv"));
  }
  SUBCASE("stage context on failure") {
    RunConfig c;
    c.data_dir = testing::scratch("empty-data");
    c.output_dir = testing::scratch("run-fail");
    try {
      run_study(c);
      FAIL("expected a stage error");
    } catch (const StageError& e) {
      CHECK(e.stage() == "ingest");
      CHECK(std::string(e.what()).rfind("[ingest]", 0) == 0);
    }
  }
  SUBCASE("bad budget is a config stage error") {
    RunConfig c;
    c.cb_eu27 = -5.0;
    CHECK_THROWS_AS(compute_study(testing::shipped(), c), StageError);
  }
  SUBCASE("explicit budget overrides the trajectory") {
    RunConfig c;
    c.cb_eu27 = 1000.0;
    const auto r = compute_study(testing::shipped(), c);
    CHECK(r.cb_eu27 == 1000.0);
    CHECK(r.capability.total() == doctest::Approx(1000.0));
  }
}
