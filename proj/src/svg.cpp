#include "wesma/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace wesma {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

std::string render_line_plot(const std::string& title, const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<SvgSeries>& series, int width, int height) {
    const double margin_left = 64.0;
    const double margin_right = 24.0;
    const double margin_top = 40.0;
    const double margin_bottom = 52.0;
    const double plot_w = width - margin_left - margin_right;
    const double plot_h = height - margin_top - margin_bottom;

    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    double y_min = x_min;
    double y_max = -x_min;
    for (const SvgSeries& s : series) {
        for (const auto& [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (!(x_min < x_max)) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (!(y_min < y_max)) {
        y_min -= 0.5;
        y_max += 0.5;
    }
    auto px = [&](double x) { return margin_left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) {
        return margin_top + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
           std::to_string(width) + " " + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(width / 2.0) +
           "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           escape(title) + "</text>\n";

    // Axes.
    svg += "<line x1=\"" + fmt(margin_left) + "\" y1=\"" + fmt(margin_top) + "\" x2=\"" +
           fmt(margin_left) + "\" y2=\"" + fmt(margin_top + plot_h) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(margin_left) + "\" y1=\"" + fmt(margin_top + plot_h) +
           "\" x2=\"" + fmt(margin_left + plot_w) + "\" y2=\"" + fmt(margin_top + plot_h) +
           "\" stroke=\"black\"/>\n";

    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = x_min + (x_max - x_min) * i / ticks;
        const double fy = y_min + (y_max - y_min) * i / ticks;
        const double tx = px(fx);
        const double ty = py(fy);
        svg += "<line x1=\"" + fmt(tx) + "\" y1=\"" + fmt(margin_top + plot_h) + "\" x2=\"" +
               fmt(tx) + "\" y2=\"" + fmt(margin_top + plot_h + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(tx) + "\" y=\"" + fmt(margin_top + plot_h + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
               fmt(fx) + "</text>\n";
        svg += "<line x1=\"" + fmt(margin_left - 5) + "\" y1=\"" + fmt(ty) + "\" x2=\"" +
               fmt(margin_left) + "\" y2=\"" + fmt(ty) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(margin_left - 8) + "\" y=\"" + fmt(ty + 3) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
               fmt(fy) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(margin_left + plot_w / 2) + "\" y=\"" +
           fmt(height - 12.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape(x_label) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + fmt(margin_top + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 " +
           fmt(margin_top + plot_h / 2) + ")\">" + escape(y_label) + "</text>\n";

    double legend_y = margin_top + 8.0;
    for (const SvgSeries& s : series) {
        if (s.points.empty()) {
            continue;
        }
        std::string poly = "<polyline fill=\"none\" stroke=\"" + s.color +
                           "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points) {
            poly += fmt(px(x)) + "," + fmt(py(y)) + " ";
        }
        poly += "\"/>\n";
        svg += poly;
        svg += "<line x1=\"" + fmt(margin_left + plot_w - 120) + "\" y1=\"" + fmt(legend_y) +
               "\" x2=\"" + fmt(margin_left + plot_w - 100) + "\" y2=\"" + fmt(legend_y) +
               "\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + fmt(margin_left + plot_w - 94) + "\" y=\"" + fmt(legend_y + 3) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(s.name) +
               "</text>\n";
        legend_y += 16.0;
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace wesma
