// SPDX-License-Identifier: Apache-2.0
#include "sbm/regvar.hpp"

#include <cmath>

#include "sbm/quadrature.hpp"

namespace sbm {

RVFit estimate_rv_index(const std::function<double(double)>& f, double lambda_max,
                        const std::vector<double>& x_points) {
    if (!(lambda_max > 0.0)) throw DomainError("estimate_rv_index: lambda_max must be positive");
    if (x_points.size() < 2) throw DomainError("estimate_rv_index: need two or more probes");
    RVFit fit;
    fit.lambda_max = lambda_max;
    fit.x_points = x_points;
    const double f0 = f(lambda_max);
    if (!(f0 > 0.0)) throw DomainError("estimate_rv_index: f not positive at lambda_max");
    std::vector<double> lx, lr;
    for (double x : x_points) {
        const double fx = f(lambda_max * x);
        if (!(fx > 0.0)) throw DomainError("estimate_rv_index: f not positive on probe set");
        lx.push_back(std::log(x));
        lr.push_back(std::log(fx) - std::log(f0));
    }
    fit.log_ratios = lr;
    fit.index = ls_slope(lx, lr);
    for (std::size_t i = 0; i < lx.size(); ++i)
        fit.residual = std::max(fit.residual, std::fabs(lr[i] - fit.index * lx[i]));
    return fit;
}

DeHaanReport check_de_haan(const std::function<double(double)>& ell, double lambda_max,
                           double lower_limit, const std::vector<double>& x_points) {
    if (!(lambda_max > std::max(lower_limit, 0.0)))
        throw DomainError("check_de_haan: need lambda_max above the lower limit");
    DeHaanReport rep;
    rep.x_points = x_points;

    const auto integrand = [&ell](double t) {
        const double v = ell(t);
        if (!(v > 0.0)) throw DomainError("check_de_haan: ell not positive on probe");
        return v / t;
    };
    // L(lambda) = int ell(t)/t dt, integrated in log space where the
    // integrand is ell(e^s) and slowly varying.
    const auto big_l = [&](double lam) {
        QuadratureResult q;
        if (lower_limit > 0.0) {
            const auto g = [&ell](double s) { return ell(std::exp(s)); };
            const double s_lo = std::log(lower_limit), s_hi = std::log(lam);
            const QuadratureResult coarse = integrate(g, s_lo, s_hi, 1e-4, 200);
            q = integrate(g, s_lo, s_hi,
                          1e-11 * std::max(std::fabs(coarse.value), 1e-300), 4000);
        } else {
            const auto f = [&](double t) { return t < lam ? integrand(t) : 0.0; };
            const std::vector<double> splits{lam};
            const QuadratureResult coarse = integrate_zero_inf(f, 1e-4, splits, 300);
            q = integrate_zero_inf(
                f, 1e-11 * std::max(std::fabs(coarse.value), 1e-300), splits, 4000);
        }
        if (!q.converged)
            throw NumericalError("check_de_haan: quadrature for L did not converge (error " +
                                 std::to_string(q.abs_error_estimate) + ")");
        return q.value;
    };

    // L/ell over 4 logarithmic decades ending at lambda_max.
    for (int k = 3; k >= 0; --k) {
        const double lam = lambda_max * std::pow(10.0, -k);
        if (lam <= lower_limit) continue;
        rep.lambda_probes.push_back(lam);
        rep.L_over_ell.push_back(big_l(lam) / ell(lam));
    }
    rep.ratio_increasing = true;
    for (std::size_t i = 1; i < rep.L_over_ell.size(); ++i)
        if (rep.L_over_ell[i] <= rep.L_over_ell[i - 1]) rep.ratio_increasing = false;

    const double L0 = big_l(lambda_max);
    const double e0 = ell(lambda_max);
    for (double x : x_points) {
        const double dev = std::fabs((big_l(lambda_max * x) - L0) / e0 - std::log(x));
        rep.limit_deviation.push_back(dev);
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    return rep;
}

PotterFit fit_potter_bound(const std::function<double(double)>& f, double delta,
                           double lambda_min) {
    if (!(delta > 0.0)) throw DomainError("fit_potter_bound: delta must be positive");
    if (!(lambda_min > 0.0)) throw DomainError("fit_potter_bound: lambda_min must be positive");
    PotterFit fit;
    fit.index = estimate_rv_index(f, std::max(lambda_min * 1e6, 1e8)).index;
    fit.exponent = -fit.index - delta;

    const std::vector<double> lams = log_grid(lambda_min, lambda_min * 1e4, 25);
    const std::vector<double> ts = log_grid(1e-4, 1.0, 25);
    double a = 0.0;
    for (double lam : lams) {
        const double flam = f(lam);
        if (!(flam > 0.0)) throw DomainError("fit_potter_bound: f not positive on mesh");
        for (double t : ts) {
            const double ratio = f(lam / t) / flam / std::pow(t, fit.exponent);
            if (!std::isfinite(ratio) || ratio > 1e12) {
                fit.bounded = false;
                fit.constant = ratio;
                return fit;
            }
            a = std::max(a, ratio);
        }
    }
    fit.constant = a;
    return fit;
}

}  // namespace sbm
