// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sbm/io.hpp"

namespace sbm {

struct PlotSpec {
    std::string x_column;
    std::vector<std::string> y_columns;  // one polyline per column
    bool log_x = false;
    bool log_y = false;
    std::string title;
    int width = 720;
    int height = 480;
};

/// Deterministic SVG line plot of CSV columns (no timestamps, pure function
/// of the inputs). Throws DomainError naming any missing column.
std::string render_svg_plot(const ParsedCsv& csv, const PlotSpec& spec);

}  // namespace sbm
