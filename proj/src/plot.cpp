// SPDX-License-Identifier: Apache-2.0
#include "sbm/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sbm {
namespace {

constexpr const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                         "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string render_svg_plot(const ParsedCsv& csv, const PlotSpec& spec) {
    if (csv.rows.empty()) throw DomainError("render_svg_plot: CSV has no data rows");
    const int xc = csv.column(spec.x_column);
    if (xc < 0) throw DomainError("render_svg_plot: missing column '" + spec.x_column + "'");
    std::vector<int> ycs;
    for (const auto& name : spec.y_columns) {
        const int c = csv.column(name);
        if (c < 0) throw DomainError("render_svg_plot: missing column '" + name + "'");
        ycs.push_back(c);
    }
    if (ycs.empty()) throw DomainError("render_svg_plot: no y columns given");

    const auto tx = [&](double v) {
        if (!spec.log_x) return v;
        if (!(v > 0.0)) throw DomainError("render_svg_plot: log-x with non-positive value");
        return std::log10(v);
    };
    const auto ty = [&](double v) {
        if (!spec.log_y) return v;
        if (!(v > 0.0)) throw DomainError("render_svg_plot: log-y with non-positive value");
        return std::log10(v);
    };

    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& row : csv.rows) {
        const double x = tx(row[static_cast<std::size_t>(xc)]);
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        for (int yc : ycs) {
            const double y = ty(row[static_cast<std::size_t>(yc)]);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
    if (y_hi <= y_lo) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }

    const double ml = 60, mr = 20, mt = spec.title.empty() ? 16 : 34, mb = 40;
    const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
    const auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
    const auto py = [&](double y) { return mt + ph - (y - y_lo) / (y_hi - y_lo) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
        << "\" height=\"" << spec.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        svg << "<text x=\"" << spec.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"14\">" << spec.title << "</text>\n";
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // Axis ticks: 5 per axis, labels in data units.
    for (int i = 0; i <= 4; ++i) {
        const double fx = x_lo + (x_hi - x_lo) * i / 4.0;
        const double fy = y_lo + (y_hi - y_lo) * i / 4.0;
        const double label_x = spec.log_x ? std::pow(10.0, fx) : fx;
        const double label_y = spec.log_y ? std::pow(10.0, fy) : fy;
        svg << "<text x=\"" << px(fx) << "\" y=\"" << spec.height - mb + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
            << fmt(label_x) << "</text>\n";
        svg << "<text x=\"" << ml - 6 << "\" y=\"" << py(fy) + 3
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
            << fmt(label_y) << "</text>\n";
    }

    for (std::size_t s = 0; s < ycs.size(); ++s) {
        svg << "<polyline fill=\"none\" stroke=\"" << kSeriesColors[s % 6]
            << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& row : csv.rows)
            svg << fmt(px(tx(row[static_cast<std::size_t>(xc)]))) << ","
                << fmt(py(ty(row[static_cast<std::size_t>(ycs[s])]))) << " ";
        svg << "\"/>\n";
        svg << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 14 + 14 * s
            << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
            << kSeriesColors[s % 6] << "\">" << spec.y_columns[s] << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace sbm
