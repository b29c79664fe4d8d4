// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sbm/common.hpp"

namespace sbm {

enum class SweepVerdict { bounded, converges_to_1, failed };

/// Grid of radii (or times) with ratio values computed-quantity / comparison.
/// Boundedness policy shared across the project: the ratio stays within a
/// factor `spread_threshold` over the grid AND the fitted log-log slope over
/// the last decade is at most `slope_threshold` in magnitude.
struct RatioSweep {
    std::vector<double> grid;      // strictly increasing
    std::vector<double> ratios;
    std::string comparison_label;
    SweepVerdict verdict = SweepVerdict::failed;
    double log_slope_tail = 0.0;   // fitted over the last decade toward 0
    double spread = 0.0;           // max ratio / min ratio
    bool partial = false;          // some grid points failed and were skipped

    static constexpr double spread_threshold = 100.0;
    static constexpr double slope_threshold = 0.05;

    /// Computes spread, tail slope and verdict from grid/ratios.
    void finalize(double converge_tol = 0.02);
};

const char* to_string(SweepVerdict v);

}  // namespace sbm
