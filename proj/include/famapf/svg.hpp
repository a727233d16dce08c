#pragma once

#include <string>
#include <vector>

#include "famapf/guidance.hpp"

namespace famapf {

// Map with each move edge drawn as a short stroke from the cell centre, coloured by its
// normalised flow cost (pale = aligned with the flow, red = against it).
std::string guidance_svg(const GuidanceGraph& gg, int cell_px = 16);

struct Series {
  std::string name;
  std::vector<double> values;
};

// Grouped bars: one group per category, one bar per series.
std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                          const std::vector<Series>& series, const std::string& y_label);

std::string line_chart_svg(const std::string& title, const std::vector<double>& xs,
                           const std::vector<Series>& series, const std::string& x_label,
                           const std::string& y_label);

}  // namespace famapf
