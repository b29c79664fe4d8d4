// SPDX-License-Identifier: Apache-2.0
//
// The exponentially-weighted tail integral
//     I(r) = int_0^inf t^(-p) exp(-a r / t) w(t) dt,   p > 1, a > 0,
// for decreasing weights w, and the small-r check that I(r) is comparable to
// a^(1-p-b) r^(1-p) w(r) when w(t) ~ t^(-b) near 0 (up to slow variation).
#pragma once

#include <functional>
#include <vector>

#include "sbm/quadrature.hpp"
#include "sbm/sweep.hpp"

namespace sbm {

/// Quadrature value of I(r); the integration is split at t = a r.
double power_exp_integral(const RealFn& w, double p, double a, double r,
                          double tol = 1e-10);

/// Ratios I(r) / (a^(1-p-b) r^(1-p) w(r)) over r_grid with the shared
/// boundedness verdict.
RatioSweep power_exp_integral_sweep(const RealFn& w, double p, double a, double b,
                                    const std::vector<double>& r_grid,
                                    double tol = 1e-10);

}  // namespace sbm
