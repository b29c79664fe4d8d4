// SPDX-License-Identifier: Apache-2.0
//
// Levy density mu(t) and potential density u(t) of a subordinator, computed
// three ways: closed form where known, numerical Laplace inversion inside the
// validated range [1e-6, 10], and the small-time asymptotic formulas
//   mu(t) ~ t^-2 phi'(1/t)                                   (alpha in [0,2))
//   mu(t) ~ t^-2 (t phi(1/t) - phi'(1/t))                    (alpha = 2)
//   u(t)  ~ (1/Gamma(1+alpha/2)) t^-2 phi'(1/t)/phi(1/t)^2   (alpha in [0,2))
//   u(t)  ~ 1/phi'(1/t)  ~  1/(t phi(1/t))                   (alpha = 2).
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sbm/catalog.hpp"
#include "sbm/sweep.hpp"

namespace sbm {

enum class DensityKind { levy_mu, potential_u };
enum class DensityMethod { closed_form, inversion, asymptotic, hybrid };

struct DensityCurve {
    DensityKind kind{};
    DensityMethod method{};
    std::vector<double> t;
    std::vector<double> value;
    std::string exponent_key;
};

/// Laplace-inversion validated range; outside it only asymptotics are offered.
inline constexpr double kInversionTMin = 1e-6;
inline constexpr double kInversionTMax = 10.0;

double mu_closed_form(const CatalogEntry& entry, double t);
double mu_asymptotic(const LaplaceExponent& exp, double t);
/// Inversion of phi' - drift (the transform of t mu(t)), divided by t.
double mu_numeric(const LaplaceExponent& exp, double t);

/// second_form selects the 1/(t phi(1/t)) variant in the alpha = 2 branch.
double u_asymptotic(const LaplaceExponent& exp, double t, bool second_form = false);
/// Inversion of 1/phi with order (and, when possible, method) cross-check.
double u_numeric(const LaplaceExponent& exp, double t);

/// Full-range density evaluator for the kernel integrals: closed form when
/// known, otherwise inversion on the validated range stitched to the
/// seam-matched asymptotic formula below it. Beyond t_hi callers must fall
/// back to the monotone bound eval(t_hi).
struct DensityProfile {
    std::function<double(double)> eval;
    double t_hi = 0.0;
    DensityMethod method{};
};

DensityProfile mu_profile(const CatalogEntry& entry);
DensityProfile u_profile(const CatalogEntry& entry);

/// Tail mass mu((t, inf)) by quadrature of the density profile.
double mu_tail_mass(const CatalogEntry& entry, double t, double rel_tol = 1e-8);

DensityCurve density_curve(const CatalogEntry& entry, DensityKind kind,
                           DensityMethod method, const std::vector<double>& t_grid);

/// Ratio sweep mu(t) / (t^-2 phi'(1/t)) plus the pointwise explicit upper
/// bound mu(t) <= t^-2 phi'(1/t) / (1 - 2/e).
struct LevyDensityCheck {
    RatioSweep sweep;
    bool explicit_bound_holds = false;
    double max_bound_ratio = 0.0;  // max of mu(t) (1-2/e) / (t^-2 phi'(1/t))
};
LevyDensityCheck check_levy_density_bounds(const CatalogEntry& entry,
                                           const std::vector<double>& t_grid);

}  // namespace sbm
