// SPDX-License-Identifier: Apache-2.0
//
// Numerical regular-variation toolkit: index estimation, de Haan limit
// checks, and Potter-type bound fitting. All functions are pure.
#pragma once

#include <functional>
#include <vector>

#include "sbm/common.hpp"

namespace sbm {

struct RVFit {
    double index = 0.0;                  // least-squares slope estimate
    double lambda_max = 0.0;             // probe scale
    std::vector<double> x_points;        // probe multipliers
    std::vector<double> log_ratios;      // log f(lambda x) - log f(lambda)
    double residual = 0.0;               // max |log-ratio - index*log x|
    /// (A-1)-style convenience: alpha with f = phi' (index = alpha/2 - 1).
    double alpha_from_phi_prime() const { return 2.0 * (index + 1.0); }
};

/// Slope of log f(lambda x) - log f(lambda) against log x at lambda = lambda_max.
RVFit estimate_rv_index(const std::function<double(double)>& f, double lambda_max,
                        const std::vector<double>& x_points = {2.0, 4.0, 8.0, 16.0});

struct DeHaanReport {
    std::vector<double> lambda_probes;       // 4 decades ending at lambda_max
    std::vector<double> L_over_ell;          // must grow without bound
    std::vector<double> x_points;
    std::vector<double> limit_deviation;     // |(L(lx)-L(l))/ell(l) - log x| at lambda_max
    double max_deviation = 0.0;
    bool ratio_increasing = false;           // L/ell strictly increasing over probes
};

/// Verifies the slowly-varying integral limits for ell:
///   L(lambda)/ell(lambda) -> inf   and   (L(lambda x)-L(lambda))/ell(lambda) -> log x,
/// with L(lambda) = int_{lower}^lambda ell(t)/t dt evaluated by quadrature.
DeHaanReport check_de_haan(const std::function<double(double)>& ell, double lambda_max,
                           double lower_limit = 0.0,
                           const std::vector<double>& x_points = {2.0, 4.0, 8.0, 16.0});

struct PotterFit {
    double constant = 0.0;    // smallest A on the mesh
    double exponent = 0.0;    // delta' = -index - delta
    double index = 0.0;       // fitted RV index of f
    bool bounded = true;      // false when the mesh ratio grows without bound
};

/// Smallest A with f(lambda/t)/f(lambda) <= A t^{delta'} over a mesh of
/// lambda >= lambda_min and t <= 1, where delta' = -(fitted index) - delta.
PotterFit fit_potter_bound(const std::function<double(double)>& f, double delta,
                           double lambda_min);

}  // namespace sbm
