#include <doctest.h>

#include <sstream>

#include "carbon_quota/csv.hpp"
#include "carbon_quota/dataset.hpp"
#include "carbon_quota/series.hpp"
#include "support.hpp"

using namespace cquota;

namespace {

std::string registry_series(int from, int to, double value, const std::string& skip = "") {
  std::string s = "country_code,year,value\n";
  auto rows = [&](const std::string& code) {
    if (code == skip) return;
    for (int y = from; y <= to; ++y) s += code + "," + std::to_string(y) + "," + csv::format_number(value) + "\n";
  };
  rows("EU27");
  for (const auto& c : member_states()) rows(c.code);
  return s;
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
  for (const auto& i : issues) {
    if (i.find(needle) != std::string::npos) return true;
  }
  return false;
}

std::vector<std::string> series_issues(const std::string& text, Variable v = Variable::GdpPerCapita,
                                       bool comma = false) {
  const auto dir = testing::scratch("series");
  FileSpec f;
  f.path = testing::write(dir, "s.csv", text);
  f.decimal_comma = comma;
  std::vector<std::string> issues;
  load_series(f, v, issues);
  return issues;
}

}  // namespace

TEST_CASE("registry holds 27 Member States plus the aggregate") {
  CHECK(member_states().size() == 27);
  CHECK(eu27().code == "EU27");
  for (const auto& c : member_states()) CHECK(find_country(c.code));
  CHECK_FALSE(is_member_state("EU27"));
  CHECK_FALSE(find_country("UK"));
  CHECK(member_states().front().code == "BE");
  CHECK(member_states().back().code == "SE");
}

TEST_CASE("csv parsing") {
  SUBCASE("delimiter follows the header") {
    const auto doc = csv::parse("a;b\n1;2\n");
    CHECK(doc.delimiter == ';');
    CHECK(doc.rows.at(0).cells.at(1) == "2");
  }
  SUBCASE("bom, crlf and blank lines") {
    const auto doc = csv::parse("\xEF\xBB\xBF" "a,b\r\n\r\n1,2\r\n");
    REQUIRE(doc.rows.size() == 1);
    CHECK(doc.header.at(0) == "a");
    CHECK(doc.rows[0].line == 3);
  }
  SUBCASE("numbers") {
    CHECK(csv::parse_number("2,08E+09", true) == doctest::Approx(2.08e9));
    CHECK_FALSE(csv::parse_number("2.08", true));
    CHECK(csv::parse_number(" 3875.48 ") == 3875.48);
    CHECK_FALSE(csv::parse_number("12a"));
    CHECK_FALSE(csv::parse_number("inf"));
    CHECK_FALSE(csv::parse_number("nan"));
    CHECK_FALSE(csv::parse_number(""));
  }
  SUBCASE("formatting round-trips") {
    for (const double v : {0.1, 41620.0, 3.886694, 1e-7, -0.7533333333333333}) {
      CHECK(csv::parse_number(csv::format_number(v)) == v);
    }
    CHECK(csv::format_fixed(-0.001, 2) == "0.00");
  }
  SUBCASE("no header") { CHECK_THROWS(csv::parse("\n\n")); }
}

TEST_CASE("shipped dataset loads") {
  const auto& d = testing::shipped();
  CHECK(d.series_for("BE", Variable::GdpPerCapita).at(2019) == 41620);
  CHECK(d.series_for("EU27", Variable::GhgPerCapita).at(2010) == doctest::Approx(7.1));
  // kt and t are converted to Mt on the way in
  CHECK(d.series_for("EU27", Variable::GhgTotal).at(2019) == doctest::Approx(3886.694));
  CHECK(d.series_for("EU27", Variable::GhgTotal).unit == "Mt CO2eq/yr");
  CHECK(d.series_for("EU27", Variable::EsrEmissions).ingest_scale == 1e-6);
  CHECK(d.targets.size() == 27);
  CHECK(d.target_for("MT").regulation_allocations.size() == 10);
  CHECK(d.tapio_override("DE", TapioWindow::W3) == -1.16);
  int series_per_variable = 0;
  for (const auto& s : d.series) series_per_variable += s.variable == Variable::GdpPerCapita;
  CHECK(series_per_variable == 28);
}

TEST_CASE("implausible Tapio delta is accepted and flagged") {
  const auto& d = testing::shipped();
  const auto* se = d.tapio_delta("SE", TapioWindow::W2);
  REQUIRE(se);
  CHECK(se->anomalous);
  CHECK(se->dghg_pct == 53.43);
  CHECK(mentions(d.warnings, "SE W2"));
  CHECK_FALSE(d.tapio_delta("BE", TapioWindow::W2)->anomalous);
}

TEST_CASE("series validation") {
  SUBCASE("empty file") { CHECK(mentions(series_issues("country_code,year,value\n"), "no rows")); }
  SUBCASE("missing Member State is named") {
    const auto issues = series_issues(registry_series(2018, 2019, 10.0, "SE"));
    REQUIRE(issues.size() == 1);
    CHECK(mentions(issues, "missing country SE (Sweden)"));
  }
  SUBCASE("non-numeric cell carries file and line") {
    auto text = registry_series(2019, 2019, 10.0);
    text += "BE,2018,abc\n";
    CHECK(mentions(series_issues(text), "s.csv:30: non-numeric value 'abc'"));
  }
  SUBCASE("non-contiguous years") {
    auto text = registry_series(2019, 2019, 10.0);
    text += "BE,2017,5\n";
    CHECK(mentions(series_issues(text), "non-contiguous years for BE"));
  }
  SUBCASE("duplicate point") {
    auto text = registry_series(2019, 2019, 10.0);
    text += "BE,2019,5\n";
    CHECK(mentions(series_issues(text), "duplicate (BE, GDP_PER_CAPITA, 2019)"));
  }
  SUBCASE("unknown country") {
    auto text = registry_series(2019, 2019, 10.0);
    text += "UK,2019,5\n";
    CHECK(mentions(series_issues(text), "unknown country 'UK'"));
  }
  SUBCASE("GDP must be positive, emissions non-negative") {
    CHECK(mentions(series_issues(registry_series(2019, 2019, 0.0)), "out of range"));
    CHECK(series_issues(registry_series(2019, 2019, 0.0), Variable::GhgPerCapita).empty());
  }
  SUBCASE("header must match") {
    CHECK(mentions(series_issues("country,year,value\nBE,2019,1\n"), "header does not match"));
  }
  SUBCASE("decimal comma needs semicolons") {
    CHECK(mentions(series_issues(registry_series(2019, 2019, 1.5), Variable::GdpPerCapita, true),
                   "decimal comma"));
    std::string text = "country_code;year;value\n";
    for (const auto* code : {"EU27", "BE"}) text += std::string(code) + ";2019;2,08E+09\n";
    FileSpec f;
    f.path = testing::write(testing::scratch("comma"), "esr.csv", text);
    f.decimal_comma = true;
    std::vector<std::string> issues;
    const auto s = load_series(f, Variable::EsrEmissions, issues);
    CHECK(issues.empty());
    REQUIRE(s.size() == 2);
    CHECK(s[0].at(2019) == doctest::Approx(2080.0));
  }
}

TEST_CASE("load_dataset collects every issue before failing") {
  const auto dir = testing::scratch("broken");
  for (const auto* name : {"gdp_per_capita.csv", "ghg_per_capita.csv", "ghg_total.csv", "esr_history.csv",
                           "ets_history.csv", "targets.csv"}) {
    std::filesystem::copy_file(testing::kData / name, dir / name);
  }
  testing::write(dir, "ghg_total.csv", registry_series(2019, 2019, 1.0, "DE"));
  testing::write(dir, "ets_history.csv", "country_code,year,value\n");
  try {
    load_dataset(DatasetPaths::in_directory(dir));
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(mentions(e.issues(), "missing country DE (Germany)"));
    CHECK(mentions(e.issues(), "ets_history.csv: no rows"));
  }
}

TEST_CASE("target validation") {
  const auto dir = testing::scratch("targets");
  auto text = testing::read(testing::kData / "targets.csv");
  SUBCASE("percentage range") {
    const auto pos = text.find("\nBE,");
    const auto line_end = text.find('\n', pos + 1);
    std::string row = text.substr(pos + 1, line_end - pos - 1);
    std::stringstream ss(row);
    std::vector<std::string> cells;
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    cells[2] = "0.35";
    std::string rebuilt;
    for (const auto& c : cells) rebuilt += (rebuilt.empty() ? "" : ",") + c;
    text.replace(pos + 1, line_end - pos - 1, rebuilt);
    FileSpec f;
    f.path = testing::write(dir, "targets.csv", text);
    std::vector<std::string> issues;
    CHECK(load_targets(f, issues).empty());
    CHECK(mentions(issues, "outside [-1, 0]"));
  }
  SUBCASE("nine allocations") {
    FileSpec f;
    f.path = testing::write(dir, "targets.csv",
                            "country_code,e2005_t,pct_reg_2030,pct_gd_2030,alloc_2021,alloc_2022,alloc_2023,"
                            "alloc_2024,alloc_2025,alloc_2026,alloc_2027,alloc_2028,alloc_2029\nBE,1,-0.1,-0.1,1,1,1,1,1,1,1,1,1\n");
    std::vector<std::string> issues;
    load_targets(f, issues);
    CHECK(mentions(issues, "header does not match"));
  }
}

TEST_CASE("overrides must be finite and well formed") {
  const auto dir = testing::scratch("overrides");
  FileSpec f;
  f.path = testing::write(dir, "o.csv", "country_code,window,value\nBE,W3,inf\nBE,W9,1\nBE,W1,0.5\nBE,W1,0.6\n");
  std::vector<std::string> issues;
  load_tapio_overrides(f, issues);
  CHECK(mentions(issues, "non-numeric value 'inf'"));
  CHECK(mentions(issues, "unknown window 'W9'"));
  CHECK(mentions(issues, "duplicate override for BE W1"));
}

TEST_CASE("validation is total on malformed input") {
  const std::string bad[] = {
      "",
      "\n",
      "country_code,year,value",
      "country_code,year,value\nBE",
      "country_code,year,value\nBE,,\n",
      "country_code,year,value\n,,,\n",
      "country_code,year,value\nBE,2019,1,2\n",
      "country_code,year,value\nBE,20x9,1\n",
      "country_code,year,value\nBE,99999999999,1\n",
      "country_code;year;value\nBE;2019;1e400\n",
      "\"country_code\",\"year\",\"value\"\n\"BE\",\"2019\",\"-1\"\n",
  };
  for (const auto& text : bad) {
    CAPTURE(text);
    std::vector<std::string> issues;
    const auto dir = testing::scratch("total");
    FileSpec f;
    f.path = testing::write(dir, "x.csv", text);
    CHECK_NOTHROW(load_series(f, Variable::GdpPerCapita, issues));
    CHECK_FALSE(issues.empty());
  }
  std::vector<std::string> issues;
  FileSpec missing;
  missing.path = "/nonexistent/file.csv";
  CHECK_NOTHROW(load_series(missing, Variable::GdpPerCapita, issues));
  CHECK(mentions(issues, "cannot open"));
}

TEST_CASE("series round-trip is byte identical after canonical formatting") {
  const auto& d = testing::shipped();
  std::vector<CountrySeries> gdp;
  for (const auto& s : d.series) {
    if (s.variable == Variable::GdpPerCapita) gdp.push_back(s);
  }
  std::ostringstream first;
  write_series_csv(first, gdp);
  const auto dir = testing::scratch("roundtrip");
  FileSpec f;
  f.path = testing::write(dir, "gdp.csv", first.str());
  std::vector<std::string> issues;
  const auto again = load_series(f, Variable::GdpPerCapita, issues);
  REQUIRE(issues.empty());
  std::ostringstream second;
  write_series_csv(second, again);
  CHECK(first.str() == second.str());

  // canonical Mt values reload unchanged when no further scaling is applied
  std::vector<CountrySeries> totals;
  for (const auto& s : d.series) {
    if (s.variable == Variable::GhgTotal) totals.push_back(s);
  }
  std::ostringstream t1;
  write_series_csv(t1, totals);
  FileSpec tf;
  tf.path = testing::write(dir, "ghg.csv", t1.str());
  tf.scale = 1.0;
  const auto reloaded = load_series(tf, Variable::GhgTotal, issues);
  std::ostringstream t2;
  write_series_csv(t2, reloaded);
  CHECK(t1.str() == t2.str());
}

TEST_CASE("normalize_to_base") {
  const auto& d = testing::shipped();
  SUBCASE("direct ratio") {
    // 100 * 41620 / 33330, which the printed normalized row does not show
    const auto be = normalize_to_base(d.series_for("BE", Variable::GdpPerCapita), 2010);
    CHECK(be.at(2019) == doctest::Approx(124.87248724872487).epsilon(1e-12));
  }
  SUBCASE("aggregate emissions per capita") {
    const auto eu = normalize_to_base(d.series_for("EU27", Variable::GhgPerCapita), 2010);
    CHECK(eu.at(2019) == doctest::Approx(73.24).epsilon(5e-5));
  }
  SUBCASE("base year is exactly 100 for every series") {
    for (const auto& s : d.series) {
      if (!s.points.contains(2010)) continue;
      CAPTURE(s.country);
      CHECK(normalize_to_base(s, 2010).at(2010) == 100.0);
    }
  }
  SUBCASE("missing or zero base") {
    CountrySeries s;
    s.points = {{2011, 1.0}, {2012, 0.0}};
    CHECK_THROWS_AS(normalize_to_base(s, 2010), std::invalid_argument);
    CHECK_THROWS_AS(normalize_to_base(s, 2012), std::invalid_argument);
  }
}

TEST_CASE("formats reference documents every schema") {
  const auto text = formats_reference();
  for (const auto* needle : {"country_code, year, value", "e2005_t", "alloc_2021", "W3", "dgdp_pct", "tapio_source"}) {
    CHECK(text.find(needle) != std::string::npos);
  }
}
