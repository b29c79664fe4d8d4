// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sbm/common.hpp"

namespace sbm {

using RealFn = std::function<double(double)>;

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod 15-point quadrature on a finite interval.
QuadratureResult integrate(const RealFn& f, double a, double b, double tol,
                           int max_subdivisions = 2000);

/// Integral of f over (0, inf) for integrands with at worst power-law blowup
/// at 0 and exponential or power decay at infinity. Applies the substitution
/// t = e^s, forces panel boundaries at the given scale points, and extends the
/// truncated s-domain outward until the boundary panels are negligible.
QuadratureResult integrate_zero_inf(const RealFn& f, double tol,
                                    std::span<const double> split_points = {},
                                    int max_subdivisions = 2000);

}  // namespace sbm
