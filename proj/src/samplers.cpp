// SPDX-License-Identifier: Apache-2.0
#include "sbm/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sbm/densities.hpp"
#include "sbm/inversion.hpp"
#include "sbm/quadrature.hpp"

namespace sbm {
namespace {

class DriftSampler final : public SubordinatorSampler {
public:
    explicit DriftSampler(double gamma) : gamma_(gamma) {}
    double increment(double dt, RngStream&) const override { return gamma_ * dt; }

private:
    double gamma_;
};

class StableSampler final : public SubordinatorSampler {
public:
    explicit StableSampler(double alpha) : a_(alpha / 2.0) {
        if (!(a_ > 0.0 && a_ < 1.0)) throw DomainError("StableSampler: alpha in (0,2)");
    }
    double increment(double dt, RngStream& rng) const override {
        return std::pow(dt, 1.0 / a_) * rng.stable_positive(a_);
    }

private:
    double a_;
};

// geo(b) and its n-fold nesting. Each level maps a time s to
// Gamma(s)^(1/a) * S_a with a = b/2 (identity scaling when b = 2).
class GammaChainSampler final : public SubordinatorSampler {
public:
    GammaChainSampler(double b, int levels) : a_(b / 2.0), levels_(levels) {
        if (!(a_ > 0.0 && a_ <= 1.0)) throw DomainError("GammaChainSampler: b in (0,2]");
        if (levels < 1) throw DomainError("GammaChainSampler: levels >= 1");
    }

    double increment(double dt, RngStream& rng) const override {
        double v = dt;
        for (int i = 0; i < levels_; ++i) v = level(v, rng);
        return v;
    }

    double increment_coarse(double dt, double floor, RngStream& rng) const override {
        if (a_ < 1.0 || floor <= 1e-20) return increment(dt, rng);
        // Level-1 gamma via the boost Gamma(dt) = Gamma(1+dt) U^(1/dt). When
        // log(U)/dt is far enough down, the whole chain stays below ~1e-25
        // except with probability < 1e-20 per step, so the step is a no-op.
        const double log_u = std::log(rng.uniform());
        if (log_u / dt < -102.6 /* log(1e-25) - 45 */) return 0.0;
        double v = std::exp(std::log(rng.gamma(1.0 + dt)) + log_u / dt);
        for (int i = 1; i < levels_; ++i) v = level(v, rng);
        return v;
    }

private:
    double level(double s, RngStream& rng) const {
        if (s <= 0.0) return 0.0;
        const double g = rng.gamma(s);
        if (a_ == 1.0) return g;
        if (g <= 0.0) return 0.0;
        return std::pow(g, 1.0 / a_) * rng.stable_positive(a_);
    }

    double a_;
    int levels_;
};

class CompoundPoissonSampler final : public SubordinatorSampler {
public:
    CompoundPoissonSampler(const CatalogEntry& entry, double eps)
        : table_(build_jump_table(entry, eps)), drift_(entry.exponent.drift) {
        kill_rate_ = entry.exponent.kill_rate;
        exact_ = false;
    }

    double increment(double dt, RngStream& rng) const override {
        double s = (drift_ + table_.small_jump_drift) * dt;
        if (table_.gaussian_correction)
            s += std::sqrt(table_.small_jump_var * dt) * rng.normal();
        if (s < 0.0) s = 0.0;  // Gaussian correction must not break monotonicity
        const std::uint64_t n = rng.poisson(table_.total_rate * dt);
        for (std::uint64_t i = 0; i < n; ++i) s += table_.sample(rng);
        return s;
    }

private:
    JumpTable table_;
    double drift_;
};

}  // namespace

double JumpTable::sample(RngStream& rng) const {
    const double target = rng.uniform() * total_rate;
    const auto it = std::lower_bound(cum_mass.begin(), cum_mass.end(), target);
    const std::size_t i =
        std::min(static_cast<std::size_t>(it - cum_mass.begin()), cum_mass.size() - 1);
    const double lo = edges[i], hi = edges[i + 1];
    const double within =
        (target - (i == 0 ? 0.0 : cum_mass[i - 1])) /
        std::max(cum_mass[i] - (i == 0 ? 0.0 : cum_mass[i - 1]), 1e-300);
    // mu ~ mu_left (t/lo)^q on the cell; invert the cell CDF analytically.
    const double q = slopes[i];
    if (std::fabs(q + 1.0) < 1e-9) {
        return lo * std::pow(hi / lo, within);
    }
    const double p = q + 1.0;
    const double ratio = std::pow(hi / lo, p);
    return lo * std::pow(1.0 + within * (ratio - 1.0), 1.0 / p);
}

JumpTable build_jump_table(const CatalogEntry& entry, double eps, double t_max,
                           int cells_per_decade) {
    if (!(eps > 0.0) || !(t_max > eps)) throw DomainError("build_jump_table: bad range");
    const DensityProfile prof = mu_profile(entry);
    // The table needs mu beyond the validated inversion range; extend with the
    // same inversion (smooth transforms keep series acceleration well-behaved
    // there) rather than truncating the jump distribution.
    const LaplaceExponent exp = entry.exponent;
    const auto mu = [&prof, &exp](double t) {
        if (t <= prof.t_hi) return prof.eval(t);
        if (exp.phi_prime_complex) {
            const ComplexFn dphi_c = exp.phi_prime_complex;
            const double drift = exp.drift;
            return talbot([dphi_c, drift](std::complex<double> s) { return dphi_c(s) - drift; },
                          t) / t;
        }
        const RealFn1 dphi = exp.phi_prime;
        const double drift = exp.drift;
        return stehfest([dphi, drift](double l) { return dphi(l) - drift; }, t) / t;
    };

    JumpTable tab;
    // Extend cells geometrically until the remaining tail is negligible or
    // the density underflows (exponential tails do, far past any relevant
    // mass). The power-law interpolant integrates exactly per cell.
    const double growth = std::pow(10.0, 1.0 / cells_per_decade);
    double lo = eps;
    double mlo = mu(lo);
    if (!(mlo > 0.0))
        throw NumericalError("build_jump_table: density not positive at eps");
    tab.edges.push_back(lo);
    double cum = 0.0;
    while (lo < t_max) {
        const double hi = std::min(lo * growth, t_max);
        const double mhi = mu(hi);
        if (!(mhi > 0.0) || !std::isfinite(mhi)) break;  // underflowed tail
        const double q = std::log(mhi / mlo) / std::log(hi / lo);
        const double p = q + 1.0;
        const double mass = std::fabs(p) < 1e-9
                                ? mlo * lo * std::log(hi / lo)
                                : mlo * lo / p * (std::pow(hi / lo, p) - 1.0);
        cum += mass;
        tab.edges.push_back(hi);
        tab.cum_mass.push_back(cum);
        tab.slopes.push_back(q);
        tab.mu_left.push_back(mlo);
        // Stop once an entire decade would add less than 1e-12 of the total.
        if (hi > 10.0 && mass * cells_per_decade < 1e-12 * cum) break;
        lo = hi;
        mlo = mhi;
    }
    if (tab.cum_mass.empty())
        throw NumericalError("build_jump_table: empty jump table");
    tab.total_rate = cum;

    // Sub-eps compensation, calibrated so that the sampled process satisfies
    // the Laplace identity exactly at lambda = 1: the drift absorbs the
    // sub-eps mean together with every table-approximation residual
    // (interpolation, truncation). For t <= eps the jumps are linear in
    // lambda to O((lambda eps)^2), so the calibration holds across lambda.
    const double lam_star = 1.0;
    double transform_sum = 0.0;  // int (1 - e^{-lam* s}) against the interpolant
    for (std::size_t i = 0; i + 1 < tab.edges.size(); ++i) {
        const double lo2 = tab.edges[i], hi2 = tab.edges[i + 1];
        const double ml = tab.mu_left[i], q = tab.slopes[i];
        transform_sum +=
            integrate(
                [lam_star, lo2, ml, q](double s) {
                    return -std::expm1(-lam_star * s) * ml * std::pow(s / lo2, q);
                },
                lo2, hi2, 1e-12 * std::max(tab.total_rate, 1.0), 200)
                .value;
    }
    const double phi_star = entry.exponent.eval(lam_star);
    tab.small_jump_drift =
        std::max((phi_star - entry.exponent.drift * lam_star -
                  entry.exponent.kill_rate - transform_sum) / lam_star,
                 0.0);

    const auto below = [&mu, eps](double t) { return t >= eps ? 0.0 : mu(t); };
    const double splits[] = {eps * 1e-3, eps};
    tab.small_jump_var =
        integrate_zero_inf([&below](double t) { return t * t * below(t); }, 1e-14,
                           splits)
            .value;
    // Variance proxy: discarded variance against the kept-jump second moment
    // on (eps, 1].
    double kept_var = 0.0;
    for (std::size_t i = 0; i < tab.cum_mass.size() && tab.edges[i] < 1.0; ++i) {
        const double mass = tab.cum_mass[i] - (i == 0 ? 0.0 : tab.cum_mass[i - 1]);
        const double mid = std::sqrt(tab.edges[i] * tab.edges[i + 1]);
        kept_var += mass * mid * mid;
    }
    tab.gaussian_correction = tab.small_jump_var > 1e-3 * (kept_var + tab.small_jump_var);
    return tab;
}

std::unique_ptr<SubordinatorSampler> make_sampler(const CatalogEntry& entry,
                                                  double jump_truncation) {
    const std::string& key = entry.key;
    double p = 0.0;
    int n = 0;
    if (key == "drift")
        return std::make_unique<DriftSampler>(entry.exponent.drift);
    if (key == "vg") return std::make_unique<GammaChainSampler>(2.0, 1);
    if (std::sscanf(key.c_str(), "stable(%lf)", &p) == 1 && key.back() == ')' &&
        key.rfind("stable(", 0) == 0)
        return std::make_unique<StableSampler>(p);
    if (std::sscanf(key.c_str(), "geo(%lf)", &p) == 1 && key.rfind("geo(", 0) == 0)
        return std::make_unique<GammaChainSampler>(p, 1);
    if (std::sscanf(key.c_str(), "geo-iter(%lf,%d)", &p, &n) == 2 &&
        key.rfind("geo-iter(", 0) == 0)
        return std::make_unique<GammaChainSampler>(p, n);
    return std::make_unique<CompoundPoissonSampler>(entry, jump_truncation);
}

}  // namespace sbm
