#pragma once

#include <string>
#include <vector>

#include "carbon_quota/blend.hpp"

namespace cquota {

struct PlotSpec {
  std::string title;
  std::string x_label = "blend parameter";
  std::string y_label = "Mt CO2eq";
  /// Countries to draw; empty draws every country of the sweep.
  std::vector<std::string> countries;
  int width = 960;
  int height = 600;
};

/// Static SVG line chart, one polyline per country, colours fixed by
/// registry position. Throws std::invalid_argument for an empty sweep or a
/// filter that selects no country.
std::string render_sweep_svg(const BlendSweep& sweep, const PlotSpec& spec);

}  // namespace cquota
