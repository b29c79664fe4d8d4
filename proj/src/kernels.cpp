// SPDX-License-Identifier: Apache-2.0
#include "sbm/kernels.hpp"

#include <cmath>

#include "sbm/quadrature.hpp"
#include "sbm/rng.hpp"

namespace sbm {

RadialProfile::RadialProfile(const std::function<double(double)>& f, double lo,
                             double hi, int points_per_decade) {
    if (!(lo > 0.0) || !(hi > lo)) throw DomainError("RadialProfile: need 0 < lo < hi");
    lo_ = std::log(lo);
    hi_ = std::log(hi);
    const int n = std::max(3, static_cast<int>(std::ceil(
                                  (hi_ - lo_) / M_LN10 * points_per_decade)) + 1);
    step_ = (hi_ - lo_) / (n - 1);
    log_values_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double v = f(std::exp(lo_ + i * step_));
        if (!(v > 0.0) || !std::isfinite(v))
            throw NumericalError("RadialProfile: function not positive on grid");
        log_values_[static_cast<std::size_t>(i)] = std::log(v);
    }
}

double RadialProfile::operator()(double r) const {
    if (!(r > 0.0)) throw DomainError("RadialProfile: argument must be positive");
    const double x = std::log(r);
    if (x <= lo_) return std::exp(log_values_.front());   // clamp; callers stay in range
    if (x >= hi_) return std::exp(log_values_.back());
    const double pos = (x - lo_) / step_;
    const auto i = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(i);
    return std::exp(log_values_[i] * (1.0 - w) + log_values_[i + 1] * w);
}

namespace {

double sphere_surface(int d) {  // |S^{d-1}|
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

// Gaussian-mixture integral int (4 pi t)^(-d/2) exp(-r^2/4t) w(t) dt over
// (0, t_hi], plus the monotone-bound tail  w(t_hi) * int_{t_hi}^inf ... dt
// (bounded by dropping the exponential; requires d >= 3 for convergence).
KernelPoint mixture_point(const DensityProfile& w, int d, double r, double rel_tol,
                          const char* what) {
    if (!(r > 0.0)) throw DomainError(std::string(what) + ": r must be positive");
    const double gauss_norm = std::pow(4.0 * M_PI, -0.5 * d);
    const auto f = [&w, d, r, gauss_norm](double t) {
        if (t > w.t_hi) return 0.0;
        return gauss_norm * std::pow(t, -0.5 * d) * std::exp(-r * r / (4.0 * t)) *
               w.eval(t);
    };
    const double peak = r * r / 4.0;
    const double splits[] = {peak, std::max(1.0, peak)};
    QuadratureResult coarse = integrate_zero_inf(f, 1e-6, splits, 400);
    const double scale =
        std::isfinite(coarse.value) ? std::fabs(coarse.value) : 1.0;
    const double tol = rel_tol * std::max(scale, 1e-300);
    QuadratureResult q = integrate_zero_inf(f, tol, splits);
    if (!q.converged)
        throw NumericalError(std::string(what) + ": quadrature did not converge");
    KernelPoint p;
    p.value = q.value;
    if (std::isfinite(w.t_hi)) {
        if (d < 3)
            throw DomainError(std::string(what) +
                              ": monotone tail bound needs d >= 3 for this exponent");
        // w decreasing: the t > t_hi remainder is at most w(t_hi) times the
        // bare Gaussian-mixture tail, which keeps the exp(-r^2/4t) decay.
        const double w_hi = w.eval(w.t_hi);
        const double t_hi = w.t_hi;
        const auto tail = [d, r, gauss_norm, t_hi](double t) {
            if (t <= t_hi) return 0.0;
            return gauss_norm * std::pow(t, -0.5 * d) * std::exp(-r * r / (4.0 * t));
        };
        const double tail_splits[] = {t_hi, 10.0 * t_hi};
        const double tail_scale =
            gauss_norm * std::pow(t_hi, 1.0 - 0.5 * d) / (0.5 * d - 1.0);
        p.tail_bound =
            w_hi * integrate_zero_inf(tail, 1e-6 * tail_scale, tail_splits, 400).value;
        p.value += p.tail_bound;
    }
    return p;
}

}  // namespace

KernelPoint jump_kernel_point(const CatalogEntry& entry, int d, double r,
                              double rel_tol) {
    if (d < 1) throw DomainError("jump_kernel: need d >= 1");
    // Pure drift has no jump part.
    if (entry.has_mu() && entry.closed_form_mu(1.0) == 0.0 &&
        entry.closed_form_mu(1e-3) == 0.0)
        return {0.0, 0.0};
    return mixture_point(mu_profile(entry), d, r, rel_tol, "jump_kernel");
}

KernelPoint green_kernel_point(const CatalogEntry& entry, int d, double r,
                               double rel_tol) {
    if (d < 3) throw DomainError("green_kernel: transient regime needs d >= 3");
    return mixture_point(u_profile(entry), d, r, rel_tol, "green_kernel");
}

double jump_kernel(const CatalogEntry& entry, int d, double r) {
    return jump_kernel_point(entry, d, r).value;
}

double green_kernel(const CatalogEntry& entry, int d, double r) {
    return green_kernel_point(entry, d, r).value;
}

RadialKernel kernel_curve(const CatalogEntry& entry, KernelKind kind, int d,
                          const std::vector<double>& r_grid) {
    RadialKernel k;
    k.kind = kind;
    k.dim = d;
    k.r = r_grid;
    k.exponent_key = entry.key;
    for (double r : r_grid) {
        const KernelPoint p = kind == KernelKind::jump_j
                                  ? jump_kernel_point(entry, d, r)
                                  : green_kernel_point(entry, d, r);
        k.value.push_back(p.value);
        k.tail_bound.push_back(p.tail_bound);
    }
    return k;
}

RatioSweep jump_ratio_sweep(const CatalogEntry& entry, int d,
                            const std::vector<double>& r_grid) {
    const LaplaceExponent& exp = entry.exponent;
    if (!exp.alpha) throw DomainError("jump_ratio_sweep: alpha unknown");
    RatioSweep sweep;
    const bool alpha2 = *exp.alpha >= 2.0;
    sweep.comparison_label = alpha2 ? "r^(-d-2) (r^2 phi(r^-2) - phi'(r^-2))"
                                    : "r^(-d-2) phi'(r^-2)";
    for (double r : r_grid) {
        const double lam = 1.0 / (r * r);
        const double comparison =
            std::pow(r, -(d + 2.0)) *
            (alpha2 ? (r * r * exp.eval(lam) - exp.prime(lam)) : exp.prime(lam));
        try {
            sweep.grid.push_back(r);
            sweep.ratios.push_back(jump_kernel(entry, d, r) / comparison);
        } catch (const NumericalError&) {
            sweep.grid.pop_back();
            sweep.partial = true;
        }
    }
    sweep.finalize();
    return sweep;
}

RatioSweep green_ratio_sweep(const CatalogEntry& entry, int d,
                             const std::vector<double>& r_grid,
                             GreenComparison form) {
    const LaplaceExponent& exp = entry.exponent;
    if (!exp.alpha) throw DomainError("green_ratio_sweep: alpha unknown");
    const bool alpha2 = *exp.alpha >= 2.0;
    if (form == GreenComparison::automatic && alpha2)
        form = GreenComparison::derivative_form;
    RatioSweep sweep;
    sweep.comparison_label =
        !alpha2 ? "r^(-d-2) phi'(r^-2) / phi(r^-2)^2"
                : (form == GreenComparison::derivative_form ? "r^(2-d) / phi'(r^-2)"
                                                            : "r^(-d) / phi(r^-2)");
    for (double r : r_grid) {
        const double lam = 1.0 / (r * r);
        double comparison;
        if (!alpha2) {
            const double phi = exp.eval(lam);
            comparison = std::pow(r, -(d + 2.0)) * exp.prime(lam) / (phi * phi);
        } else if (form == GreenComparison::derivative_form) {
            comparison = std::pow(r, 2.0 - d) / exp.prime(lam);
        } else {
            comparison = std::pow(r, -static_cast<double>(d)) / exp.eval(lam);
        }
        try {
            sweep.grid.push_back(r);
            sweep.ratios.push_back(green_kernel(entry, d, r) / comparison);
        } catch (const NumericalError&) {
            sweep.grid.pop_back();
            sweep.partial = true;
        }
    }
    sweep.finalize();
    return sweep;
}

GreenDiffReport green_difference_check(const CatalogEntry& entry, int d,
                                       const std::vector<double>& r_values,
                                       int pairs_per_radius, std::uint64_t seed) {
    GreenDiffReport rep;
    RngStream rng(seed, 0x67726569);
    for (double r : r_values) {
        const double gr = green_kernel(entry, d, r);
        // Radii in [r, 3r]: interpolate g once per radius for speed.
        const RadialProfile g([&](double s) { return green_kernel(entry, d, s); },
                              0.9 * r, 3.1 * r, 96);
        double worst = 0.0;
        for (int i = 0; i < pairs_per_radius; ++i) {
            const double rx = r * (1.0 + 2.0 * rng.uniform());
            const double ry = r * (1.0 + 2.0 * rng.uniform());
            // |x - y| for random directions; only the norm matters for g.
            double cosang = 2.0 * rng.uniform() - 1.0;
            const double dist =
                std::sqrt(std::max(rx * rx + ry * ry - 2.0 * rx * ry * cosang, 0.0));
            if (dist == 0.0) continue;
            const double denom = gr * std::min(1.0, dist / r);
            worst = std::max(worst, std::fabs(g(rx) - g(ry)) / denom);
        }
        rep.r_values.push_back(r);
        rep.empirical_constants.push_back(worst);
    }
    double lo = rep.empirical_constants.front(), hi = lo;
    for (double c : rep.empirical_constants) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    rep.max_constant = hi;
    rep.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    rep.stable = std::isfinite(hi) && rep.spread <= 10.0;
    return rep;
}

namespace {

// Fraction of the sphere of radius s (centered at the origin) lying inside
// B_rho(z) with |z| = R: polar-cap weight of angle acos(c*),
// c* = (s^2 + R^2 - rho^2) / (2 s R).
double cap_fraction(int d, double s, double R, double rho) {
    const double c = (s * s + R * R - rho * rho) / (2.0 * s * R);
    if (c <= -1.0) return 1.0;
    if (c >= 1.0) return 0.0;
    const double theta = std::acos(c);
    const auto w = [d](double th) { return std::pow(std::sin(th), d - 2); };
    const double num = integrate(w, 0.0, theta, 1e-10, 200).value;
    const double den = integrate(w, 0.0, M_PI, 1e-10, 200).value;
    return num / den;
}

}  // namespace

double ball_radial_integral(const RadialProfile& f, int d, double center_dist,
                            double rho, double rel_tol) {
    if (d < 2) throw DomainError("ball_radial_integral: need d >= 2");
    if (!(rho > 0.0) || !(center_dist > rho))
        throw DomainError("ball_radial_integral: ball must exclude the origin");
    const double surf = sphere_surface(d);
    const auto integrand = [&](double s) {
        return f(s) * surf * std::pow(s, d - 1) * cap_fraction(d, s, center_dist, rho);
    };
    QuadratureResult q = integrate(integrand, center_dist - rho, center_dist + rho,
                                   rel_tol, 800);
    QuadratureResult fine = integrate(integrand, center_dist - rho,
                                      center_dist + rho,
                                      rel_tol * std::max(std::fabs(q.value), 1e-300), 800);
    return fine.value;
}

double shell_offset_integral(const RadialProfile& f, int d, double center_dist,
                             double s_lo, double s_hi, double rel_tol) {
    if (d < 2) throw DomainError("shell_offset_integral: need d >= 2");
    if (!(s_hi > s_lo) || s_lo < 0.0)
        throw DomainError("shell_offset_integral: bad shell radii");
    const double R = center_dist;
    // int_shell f(|z-y|) dy = |S^{d-2}| int s^{d-1} int_0^pi f(sqrt(s^2+R^2-2sRc))
    //                         sin^{d-2}(theta) dtheta ds     (c = cos theta)
    const double ring = d == 2 ? 2.0 : sphere_surface(d - 1);
    const auto inner = [&](double s) {
        const auto h = [&](double th) {
            const double c = std::cos(th);
            const double v = std::sqrt(std::max(s * s + R * R - 2.0 * s * R * c, 1e-300));
            return f(v) * std::pow(std::sin(th), d - 2);
        };
        return integrate(h, 0.0, M_PI, 1e-9, 400).value;
    };
    const auto integrand = [&](double s) {
        return ring * std::pow(s, d - 1) * inner(s);
    };
    QuadratureResult coarse = integrate(integrand, s_lo, s_hi, 1e-6, 200);
    QuadratureResult q = integrate(integrand, s_lo, s_hi,
                                   rel_tol * std::max(std::fabs(coarse.value), 1e-300),
                                   400);
    return q.value;
}

ShellMassReport shell_mass_check(const CatalogEntry& entry, int d,
                                 const std::vector<double>& z_values,
                                 double rho_factor) {
    if (!(rho_factor > 0.0 && rho_factor < 1.0))
        throw DomainError("shell_mass_check: rho_factor must be in (0,1)");
    ShellMassReport rep;
    double max_c = 0.0;
    bool any = false;
    for (double z : z_values) {
        const double rho = rho_factor * z;
        const RadialProfile j([&](double s) { return jump_kernel(entry, d, s); },
                              0.9 * (z - rho), 1.1 * (z + rho), 64);
        const double mass = ball_radial_integral(j, d, z, rho);
        const double bound = entry.exponent.eval(std::pow(z - rho, -2.0));
        rep.z_values.push_back(z);
        rep.masses.push_back(mass);
        rep.bounds.push_back(bound);
        if (bound > 0.0) {
            max_c = std::max(max_c, mass / bound);
            any = true;
        }
    }
    rep.max_constant = max_c;
    rep.finite = any && std::isfinite(max_c);
    return rep;
}

double jump_mass_outside_unit_ball(const CatalogEntry& entry, int d) {
    const DensityProfile mu = mu_profile(entry);
    // Radial quadrature of j over [1, inf): j decays at least like the
    // mixture of Gaussians with the available mu; integrate to a generous
    // cutoff and add the monotone tail in r (j decreasing).
    const double surf = sphere_surface(d);
    const auto f = [&](double r) {
        if (r < 1.0) return 0.0;
        return surf * std::pow(r, d - 1) *
               mixture_point(mu, d, r, 1e-8, "jump_mass").value;
    };
    const double splits[] = {1.0, 10.0};
    QuadratureResult q = integrate_zero_inf(f, 1e-8, splits, 600);
    return q.value;
}

}  // namespace sbm
