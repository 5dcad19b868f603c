#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wesma {

struct SvgSeries {
    std::string name;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

// Self-contained SVG line plot: axes, ticks, labels, one polyline per
// series, legend. Deterministic output for identical input.
std::string render_line_plot(const std::string& title, const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<SvgSeries>& series, int width = 720,
                             int height = 480);

} // namespace wesma
