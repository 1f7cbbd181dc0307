#include "carbon_quota/blend.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cquota {
namespace {

void check_compatible(const BudgetAllocation& a, const BudgetAllocation& b) {
  if (a.study != b.study) {
    throw std::invalid_argument("blend: mismatched studies '" + a.study + "' and '" + b.study + "'");
  }
  if (std::abs(a.cb_eu27 - b.cb_eu27) > 1e-9 * std::max(std::abs(a.cb_eu27), 1.0)) {
    throw std::invalid_argument("blend: mismatched CB_EU27");
  }
  if (a.per_country.size() != b.per_country.size()) {
    throw std::invalid_argument("blend: mismatched country sets");
  }
  for (std::size_t i = 0; i < a.per_country.size(); ++i) {
    if (a.per_country[i].code != b.per_country[i].code) {
      throw std::invalid_argument("blend: mismatched country order at " + a.per_country[i].code);
    }
  }
}

void check_unit(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string("blend: ") + name + " outside [0, 1]");
}

}  // namespace

BudgetAllocation principle_allocation(std::string study, std::string tag, const CountryValues& index,
                                      double cb_eu27) {
  BudgetAllocation out{std::move(study), std::move(tag), {}, cb_eu27, std::nullopt, std::nullopt};
  out.per_country.reserve(index.size());
  for (const auto& v : index) out.per_country.push_back({v.code, cb_eu27 * v.value});
  return out;
}

BudgetAllocation blend_two(const BudgetAllocation& a, const BudgetAllocation& b, double w) {
  check_compatible(a, b);
  check_unit(w, "w");
  BudgetAllocation out{a.study, a.tag + "+" + b.tag, {}, a.cb_eu27, w, std::nullopt};
  out.per_country.reserve(a.per_country.size());
  for (std::size_t i = 0; i < a.per_country.size(); ++i) {
    const double x = a.per_country[i].value;
    const double y = b.per_country[i].value;
    // Endpoints are returned untouched so sweeps reproduce their inputs bitwise.
    const double v = w == 0.0 ? x : w == 1.0 ? y : (1.0 - w) * x + w * y;
    out.per_country.push_back({a.per_country[i].code, v});
  }
  return out;
}

BudgetAllocation blend_three(const BudgetAllocation& cap, const BudgetAllocation& dec, const BudgetAllocation& ine,
                             double w, double z) {
  check_compatible(cap, dec);
  check_compatible(cap, ine);
  check_unit(w, "w");
  check_unit(z, "z");
  BudgetAllocation out{cap.study, "cap+dec+ine", {}, cap.cb_eu27, w, z};
  out.per_country.reserve(cap.per_country.size());
  for (std::size_t i = 0; i < cap.per_country.size(); ++i) {
    const double c = cap.per_country[i].value;
    const double d = dec.per_country[i].value;
    const double n = ine.per_country[i].value;
    const double inner = w == 0.0 ? c : w == 1.0 ? d : w * d + (1.0 - w) * c;
    const double v = z == 0.0 ? inner : z == 1.0 ? n : (1.0 - z) * inner + z * n;
    out.per_country.push_back({cap.per_country[i].code, v});
  }
  return out;
}

std::vector<double> sweep_grid(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("sweep step must be in (0, 1]");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double t = k * step;
    if (t >= 1.0 - 1e-9) break;
    grid.push_back(t);
  }
  grid.push_back(1.0);
  return grid;
}

std::vector<double> BlendSweep::trace(std::string_view code) const {
  std::vector<double> out;
  out.reserve(allocations.size());
  for (const auto& a : allocations) out.push_back(a.at(code));
  return out;
}

std::vector<double> BlendSweep::parameters() const {
  std::vector<double> out;
  for (const auto& a : allocations) out.push_back(a.w.value_or(0.0));
  return out;
}

std::vector<std::string> BlendSweep::countries() const {
  std::vector<std::string> out;
  if (allocations.empty()) return out;
  for (const auto& v : allocations.front().per_country) out.push_back(v.code);
  return out;
}

BlendSweep sweep_linear(const BudgetAllocation& a, const BudgetAllocation& b, double step) {
  BlendSweep s{"w", step, {}};
  for (const double w : sweep_grid(step)) s.allocations.push_back(blend_two(a, b, w));
  return s;
}

BlendSweep sweep_diagonal(const BudgetAllocation& cap, const BudgetAllocation& dec, const BudgetAllocation& ine,
                          double step) {
  BlendSweep s{"t", step, {}};
  for (const double t : sweep_grid(step)) s.allocations.push_back(blend_three(cap, dec, ine, t, t));
  return s;
}

BlendSweep sweep_surface(const BudgetAllocation& cap, const BudgetAllocation& dec, const BudgetAllocation& ine,
                         double step) {
  BlendSweep s{"w,z", step, {}};
  const auto grid = sweep_grid(step);
  for (const double z : grid) {
    for (const double w : grid) s.allocations.push_back(blend_three(cap, dec, ine, w, z));
  }
  return s;
}

}  // namespace cquota
