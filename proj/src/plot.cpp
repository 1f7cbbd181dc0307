#include "carbon_quota/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "carbon_quota/country.hpp"
#include "carbon_quota/csv.hpp"

namespace cquota {
namespace {

constexpr std::array<const char*, 28> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d", "#31a354", "#756bb1", "#636363",
    "#6baed6", "#fd8d3c", "#74c476", "#9e9ac8", "#969696", "#d6616b", "#ce6dbd", "#000000"};

std::string fmt(double v) { return csv::format_fixed(v, 2); }

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1, 2 or 5 times a power of ten, giving about `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (const double m : {1.0, 2.0, 5.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string render_sweep_svg(const BlendSweep& sweep, const PlotSpec& spec) {
  if (sweep.allocations.empty()) throw std::invalid_argument("render_sweep_svg: empty sweep");
  std::vector<std::string> countries;
  for (const auto& c : sweep.countries()) {
    if (spec.countries.empty() || std::find(spec.countries.begin(), spec.countries.end(), c) != spec.countries.end()) {
      countries.push_back(c);
    }
  }
  if (countries.empty()) throw std::invalid_argument("render_sweep_svg: no country selected");

  const auto t = sweep.parameters();
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& c : countries) {
    for (const double v : sweep.trace(c)) {
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double ystep = nice_step(hi - lo, 6);
  lo = std::floor(lo / ystep) * ystep;
  hi = std::ceil(hi / ystep) * ystep;

  const double left = 80;
  const double right = spec.width - 140;
  const double top = 50;
  const double bottom = spec.height - 60;
  auto px = [&](double x) { return left + (right - left) * x; };
  auto py = [&](double y) { return bottom - (bottom - top) * (y - lo) / (hi - lo); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
    << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  s << "<text x=\"" << fmt(spec.width / 2.0) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
    << escape(spec.title) << "</text>\n";

  for (double y = lo; y <= hi + ystep * 1e-6; y += ystep) {
    s << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(py(y)) << "\" x2=\"" << fmt(right) << "\" y2=\""
      << fmt(py(y)) << "\" stroke=\"#e0e0e0\"/>\n";
    s << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(py(y) + 4) << "\" text-anchor=\"end\">"
      << csv::format_fixed(y, ystep < 1.0 ? 2 : 0) << "</text>\n";
  }
  for (int k = 0; k <= 10; ++k) {
    const double x = k / 10.0;
    s << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << fmt(bottom) << "\" x2=\"" << fmt(px(x)) << "\" y2=\""
      << fmt(bottom + 5) << "\" stroke=\"#000000\"/>\n";
    s << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(bottom + 20) << "\" text-anchor=\"middle\">"
      << csv::format_fixed(x, 1) << "</text>\n";
  }
  s << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(bottom) << "\" x2=\"" << fmt(right) << "\" y2=\""
    << fmt(bottom) << "\" stroke=\"#000000\"/>\n";
  s << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(left) << "\" y2=\"" << fmt(bottom)
    << "\" stroke=\"#000000\"/>\n";
  s << "<text x=\"" << fmt((left + right) / 2) << "\" y=\"" << fmt(bottom + 45) << "\" text-anchor=\"middle\">"
    << escape(spec.x_label) << "</text>\n";
  s << "<text transform=\"translate(18 " << fmt((top + bottom) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(spec.y_label) << "</text>\n";

  for (std::size_t i = 0; i < countries.size(); ++i) {
    const auto& c = countries[i];
    const char* colour = kPalette[std::min(registry_rank(c), kPalette.size() - 1)];
    const auto f = sweep.trace(c);
    s << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < f.size(); ++k) s << (k ? " " : "") << fmt(px(t[k])) << ',' << fmt(py(f[k]));
    s << "\"><title>" << escape(c) << "</title></polyline>\n";
    const double ly = top + 14.0 * static_cast<double>(i);
    s << "<line x1=\"" << fmt(right + 15) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(right + 35) << "\" y2=\""
      << fmt(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << fmt(right + 40) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(c) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace cquota
