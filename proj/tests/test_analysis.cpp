#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "carbon_quota/analysis.hpp"
#include "carbon_quota/pipeline.hpp"
#include "support.hpp"

using namespace cquota;

namespace {

constexpr double kCb = 60069.94;

BudgetAllocation alloc(const std::string& tag, CountryValues v, double cb = kCb) {
  return {"2016-2019", tag, std::move(v), cb, std::nullopt, std::nullopt};
}

const StudyResults& study(StudyLabel label) {
  static std::map<StudyLabel, StudyResults> cache;
  auto it = cache.find(label);
  if (it == cache.end()) {
    RunConfig c;
    c.study = label;
    c.data_dir = testing::kData;
    it = cache.emplace(label, compute_study(testing::shipped(), c)).first;
  }
  return it->second;
}

std::map<std::string, std::set<std::string>> memberships(const std::vector<GroupAssignment>& groups) {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& g : groups) out[std::string(short_name(g.group))].insert(g.country);
  return out;
}

std::set<std::string> codes(std::initializer_list<const char*> list) { return {list.begin(), list.end()}; }

BudgetAllocation random_allocation(std::mt19937_64& rng, const std::string& tag) {
  const auto raw = testing::random_values(rng, 0.1, 10.0);
  const double sum = sum_values(raw);
  CountryValues idx;
  for (const auto& v : raw) idx.push_back({v.code, v.value / sum});
  return principle_allocation("2016-2019", tag, idx, kCb);
}

}  // namespace

TEST_CASE("capability_inertia_gap") {
  SUBCASE("Bulgaria") {
    const auto g = capability_inertia_gap(alloc("cap", {{"BG", 5986}}), alloc("ine", {{"BG", 912}}), {});
    CHECK(g[0].gap * 100 == doctest::Approx(84.76).epsilon(1e-4));
    CHECK(g[0].formatted() == "84.76%");
  }
  SUBCASE("Germany falls below the floor") {
    const auto g = capability_inertia_gap(alloc("cap", {{"DE", 1163}}), alloc("ine", {{"DE", 13840}}), {{"DE", -1.55}});
    CHECK(g[0].below_floor());
    CHECK(g[0].formatted() == "< -100%");
    CHECK(g[0].tapio == -1.55);
  }
  SUBCASE("equal budgets") {
    const auto g = capability_inertia_gap(alloc("cap", {{"FR", 7.0}}), alloc("ine", {{"FR", 7.0}}), {});
    CHECK(g[0].gap == 0.0);
    CHECK(g[0].formatted() == "0.00%");
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(capability_inertia_gap(alloc("cap", {{"FR", 0.0}}), alloc("ine", {{"FR", 7.0}}), {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(capability_inertia_gap(alloc("cap", {{"FR", 1.0}}), alloc("ine", {{"DE", 7.0}}), {}),
                    std::invalid_argument);
  }
  SUBCASE("Belgium from the engine") {
    const auto& r = study(StudyLabel::Study2016_2019);
    const auto it = std::find_if(r.gaps.begin(), r.gaps.end(), [](const GapRecord& g) { return g.country == "BE"; });
    CHECK(it->gap * 100 == doctest::Approx(-61.54).epsilon(0.2 / 61.54));
  }
  SUBCASE("scale invariance") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
      const auto cap = random_allocation(rng, "cap");
      const auto ine = random_allocation(rng, "ine");
      const double k = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
      const auto scaled_cap = principle_allocation(cap.study, "cap", [&] {
        CountryValues v = cap.per_country;
        for (auto& x : v) x.value /= kCb;
        return v;
      }(), kCb * k);
      const auto scaled_ine = principle_allocation(ine.study, "ine", [&] {
        CountryValues v = ine.per_country;
        for (auto& x : v) x.value /= kCb;
        return v;
      }(), kCb * k);
      const auto a = capability_inertia_gap(cap, ine, {});
      const auto b = capability_inertia_gap(scaled_cap, scaled_ine, {});
      for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j].gap - b[j].gap) <= 1e-12 * std::max(1.0, std::abs(a[j].gap)));
    }
  }
}

TEST_CASE("group classification on the shipped data") {
  SUBCASE("multi-year study") {
    auto m = memberships(study(StudyLabel::Study2016_2019).groups);
    CHECK(m["G1"] == codes({"DE", "ES", "FR", "HR", "IT", "LV", "LT", "HU", "SI"}));
    CHECK(m["G2"] == codes({"BG", "CZ", "EE", "PL", "PT", "RO", "SK"}));
    CHECK(m["G3"] == codes({"DK", "CY", "MT", "NL"}));
    CHECK(m["G4"] == codes({"BE", "IE", "EL", "LU", "AT", "FI", "SE"}));
  }
  SUBCASE("single-year study") {
    auto m = memberships(study(StudyLabel::Study2019).groups);
    CHECK(m["G1"] == codes({"DE", "ES", "FR", "HR", "IT", "LV", "HU", "SI"}));
    CHECK(m["G2"] == codes({"BG", "CZ", "DK", "EE", "PL", "PT", "RO", "SK"}));
    CHECK(m["G3"] == codes({"CY", "LT", "NL", "FI"}));
    CHECK(m["G4"] == codes({"BE", "IE", "EL", "LU", "MT", "AT", "SE"}));
  }
  SUBCASE("named members") {
    auto a = memberships(study(StudyLabel::Study2016_2019).groups);
    for (const char* c : {"DE", "FR", "IT", "ES"}) CHECK(a["G1"].count(c) == 1);
    for (const char* c : {"CY", "MT"}) CHECK(a["G3"].count(c) == 1);
    auto b = memberships(study(StudyLabel::Study2019).groups);
    CHECK(b["G4"].count("MT") == 1);
    CHECK(b["G3"].count("FI") == 1);
  }
}

TEST_CASE("group classification properties") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cap = random_allocation(rng, "cap");
    const auto dec = random_allocation(rng, "dec");
    const auto ine = random_allocation(rng, "ine");
    const auto diag = sweep_diagonal(cap, dec, ine);
    const auto gaps = capability_inertia_gap(cap, ine, {});
    const auto groups = classify_groups(gaps, diag);
    REQUIRE(groups.size() == 27);
    std::set<std::string> seen;
    for (const auto& g : groups) seen.insert(g.country);
    CHECK(seen.size() == 27);
    CHECK(classify_groups(gaps, diag).size() == groups.size());

    auto shuffled = gaps;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::map<std::string, Group> base;
    for (const auto& g : groups) base[g.country] = g.group;
    for (const auto& g : classify_groups(shuffled, diag)) CHECK(base.at(g.country) == g.group);

    for (const auto& g : groups) {
      CHECK(g.curvature == doctest::Approx(cap.at(g.country) - dec.at(g.country)).epsilon(1e-6));
      CHECK_FALSE(g.rule.empty());
    }
  }
  SUBCASE("errors") {
    std::mt19937_64 r2(1);
    const auto cap = random_allocation(r2, "cap");
    const auto ine = random_allocation(r2, "ine");
    const auto gaps = capability_inertia_gap(cap, ine, {});
    CHECK_THROWS_AS(classify_groups(gaps, sweep_linear(cap, ine, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(classify_groups(gaps, BlendSweep{}), std::invalid_argument);
  }
}

TEST_CASE("feasibility_table") {
  SUBCASE("Belgium ESR budget") {
    const auto& r = study(StudyLabel::Study2016_2019);
    const auto it = std::find_if(r.feasibility.begin(), r.feasibility.end(),
                                 [](const FeasibilityRow& f) { return f.country == "BE"; });
    CHECK(it->esr_budget_2021_2030 == doctest::Approx(554.0085714285715).epsilon(1e-12));
    CHECK(std::abs(it->esr_budget_2021_2030 - 554.0) <= 0.5);
    double total = 0.0;
    for (const auto& f : r.feasibility) total += f.esr_budget_2021_2030;
    CHECK(total == doctest::Approx(18039.27054815229).epsilon(1e-12));
  }
  SUBCASE("boundary is inclusive") {
    GreenDealAllocation ga{"BE", {}, 0.0};
    for (int y = 2021; y <= 2030; ++y) ga.points[y] = 1e7;  // 10 Mt a year
    const auto a = alloc("a", {{"BE", 300.0}});
    const auto b = alloc("b", {{"BE", 299.0}});
    const auto rows = feasibility_table(sweep_linear(a, b, 1.0), std::vector<GreenDealAllocation>{ga});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].esr_budget_2021_2030 == doctest::Approx(100.0));
    CHECK(rows[0].flagged == std::vector<bool>{true, false});
  }
  SUBCASE("missing year") {
    GreenDealAllocation ga{"BE", {{2021, 1e7}}, 0.0};
    const auto a = alloc("a", {{"BE", 300.0}});
    CHECK_THROWS_AS(feasibility_table(sweep_linear(a, a, 1.0), std::vector<GreenDealAllocation>{ga}),
                    std::invalid_argument);
  }
  SUBCASE("flags are monotone along monotone columns") {
    const auto& r = study(StudyLabel::Study2016_2019);
    for (const auto& f : r.feasibility) {
      const bool up = std::is_sorted(f.blended.begin(), f.blended.end());
      const bool down = std::is_sorted(f.blended.rbegin(), f.blended.rend());
      for (std::size_t i = 0; i < f.flagged.size(); ++i)
        CHECK(f.flagged[i] == (f.blended[i] >= kFeasibilityFactor * f.esr_budget_2021_2030));
      if (up) CHECK(std::is_sorted(f.flagged.begin(), f.flagged.end()));
      if (down) CHECK(std::is_sorted(f.flagged.rbegin(), f.flagged.rend()));
    }
  }
}
