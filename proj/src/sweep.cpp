// SPDX-License-Identifier: Apache-2.0
#include "sbm/sweep.hpp"

#include <algorithm>
#include <cmath>

namespace sbm {

void RatioSweep::finalize(double converge_tol) {
    if (grid.size() != ratios.size() || grid.size() < 3) {
        verdict = SweepVerdict::failed;
        return;
    }
    double lo = ratios.front(), hi = ratios.front();
    for (double r : ratios) {
        if (!(r > 0.0) || !std::isfinite(r)) {
            verdict = SweepVerdict::failed;
            return;
        }
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    spread = hi / lo;

    // Tail = smallest decade of the grid (the limit in the estimates is at 0).
    std::vector<double> lx, ly;
    const double cutoff = grid.front() * 10.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= cutoff) {
            lx.push_back(std::log(grid[i]));
            ly.push_back(std::log(ratios[i]));
        }
    }
    log_slope_tail = lx.size() >= 2 ? ls_slope(lx, ly) : 0.0;

    if (spread <= spread_threshold && std::fabs(log_slope_tail) <= slope_threshold) {
        const double at_tail = ratios.front();
        verdict = (std::fabs(at_tail - 1.0) <= converge_tol && spread <= 1.0 + 2.0 * converge_tol)
                      ? SweepVerdict::converges_to_1
                      : SweepVerdict::bounded;
    } else {
        verdict = SweepVerdict::failed;
    }
}

const char* to_string(SweepVerdict v) {
    switch (v) {
        case SweepVerdict::bounded: return "bounded";
        case SweepVerdict::converges_to_1: return "converges_to_1";
        default: return "failed";
    }
}

}  // namespace sbm
