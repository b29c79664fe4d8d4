// SPDX-License-Identifier: Apache-2.0
//
// Radial jump kernel and Green function of the subordinate Brownian motion,
//   j(r) = int (4 pi t)^(-d/2) exp(-r^2/4t) mu(t) dt
//   g(r) = int (4 pi t)^(-d/2) exp(-r^2/4t) u(t) dt    (d >= 3),
// their small-r comparison sweeps, the Green-difference estimate and the
// shell jump-mass bound.
#pragma once

#include <cstdint>
#include <vector>

#include "sbm/densities.hpp"
#include "sbm/sweep.hpp"

namespace sbm {

/// Log-log piecewise-linear interpolant of a positive function on [lo, hi].
/// Cheap to evaluate; used where a kernel appears inside another quadrature.
class RadialProfile {
public:
    RadialProfile() = default;
    RadialProfile(const std::function<double(double)>& f, double lo, double hi,
                  int points_per_decade = 48);
    double operator()(double r) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    double lo_ = 0.0, hi_ = 0.0, step_ = 0.0;
    std::vector<double> log_values_;
};

enum class KernelKind { jump_j, green_g };

struct RadialKernel {
    KernelKind kind{};
    int dim = 0;
    std::vector<double> r;
    std::vector<double> value;       // core + tail estimate
    std::vector<double> tail_bound;  // contribution estimated by the monotone bound
    std::string exponent_key;
};

struct KernelPoint {
    double value = 0.0;       // includes tail estimate
    double tail_bound = 0.0;  // monotone-bound tail part, reported separately
};

KernelPoint jump_kernel_point(const CatalogEntry& entry, int d, double r,
                              double rel_tol = 1e-9);
KernelPoint green_kernel_point(const CatalogEntry& entry, int d, double r,
                               double rel_tol = 1e-9);
double jump_kernel(const CatalogEntry& entry, int d, double r);
double green_kernel(const CatalogEntry& entry, int d, double r);

RadialKernel kernel_curve(const CatalogEntry& entry, KernelKind kind, int d,
                          const std::vector<double>& r_grid);

/// j(r) against r^(-d-2) phi'(r^-2) (alpha < 2) or the alpha = 2 variant
/// r^(-d-2) (r^2 phi(r^-2) - phi'(r^-2)).
RatioSweep jump_ratio_sweep(const CatalogEntry& entry, int d,
                            const std::vector<double>& r_grid);

enum class GreenComparison {
    automatic,        // alpha < 2 form, or derivative_form when alpha = 2
    derivative_form,  // r^(2-d) / phi'(r^-2)
    reciprocal_form   // r^(-d) / phi(r^-2)
};
RatioSweep green_ratio_sweep(const CatalogEntry& entry, int d,
                             const std::vector<double>& r_grid,
                             GreenComparison form = GreenComparison::automatic);

/// |g(|x|) - g(|y|)| <= C g(r) (1 and |x-y|/r) over random admissible pairs.
struct GreenDiffReport {
    std::vector<double> r_values;
    std::vector<double> empirical_constants;  // max ratio per r
    double max_constant = 0.0;
    double spread = 0.0;   // max/min of the per-r constants
    bool stable = false;   // finite and spread <= 10
};
GreenDiffReport green_difference_check(const CatalogEntry& entry, int d,
                                       const std::vector<double>& r_values,
                                       int pairs_per_radius, std::uint64_t seed);

/// Integral of f(|y|) over the ball B_rho(z), |z| = center_dist, via the
/// spherical-cap reduction (any d >= 2).
double ball_radial_integral(const RadialProfile& f, int d, double center_dist,
                            double rho, double rel_tol = 1e-8);

/// Integral of f(|z - y|) over the shell s_lo <= |y| <= s_hi, |z| = center_dist.
double shell_offset_integral(const RadialProfile& f, int d, double center_dist,
                             double s_lo, double s_hi, double rel_tol = 1e-8);

/// Checks int_{B_rho(z)} j(|y|) dy <= C phi((|z|-rho)^-2) over a mesh of z.
struct ShellMassReport {
    std::vector<double> z_values;
    std::vector<double> masses;
    std::vector<double> bounds;
    double max_constant = 0.0;
    bool finite = false;
};
ShellMassReport shell_mass_check(const CatalogEntry& entry, int d,
                                 const std::vector<double>& z_values,
                                 double rho_factor = 0.25);

/// Total jump mass away from the origin, int_{|x| >= 1} j(|x|) dx.
double jump_mass_outside_unit_ball(const CatalogEntry& entry, int d);

}  // namespace sbm
