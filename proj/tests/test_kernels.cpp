// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sbm/kernels.hpp"

using namespace sbm;

namespace {

// Closed-form Green function of the stable exponent in d = 3, from the
// Gamma-function reduction of the Gaussian-mixture integral with
// u(t) = t^(a-1)/Gamma(a):  g(r) = (4 pi)^{-3/2} Gamma(3/2-a)/Gamma(a)
//                                  (r^2/4)^{a-3/2}.
double stable_green(double alpha, double r) {
    const double a = alpha / 2.0;
    return std::pow(4.0 * M_PI, -1.5) * std::tgamma(1.5 - a) / std::tgamma(a) *
           std::pow(r * r / 4.0, a - 1.5);
}

}  // namespace

TEST_CASE("Newtonian Green function for the pure-drift exponent") {
    const auto drift = catalog("drift");
    for (double r : {0.01, 0.1, 1.0})
        CHECK(green_kernel(drift, 3, r) ==
              doctest::Approx(1.0 / (4.0 * M_PI * r)).epsilon(1e-9));
    CHECK_THROWS_AS(green_kernel(drift, 2, 0.1), DomainError);
}

TEST_CASE("stable Green function matches the Gamma-reduction closed form") {
    for (double alpha : {0.5, 1.0, 1.5}) {
        char key[24];
        std::snprintf(key, sizeof key, "stable(%g)", alpha);
        const auto entry = catalog(key);
        for (double r : {1e-3, 0.1})
            CHECK(green_kernel(entry, 3, r) ==
                  doctest::Approx(stable_green(alpha, r)).epsilon(1e-8));
    }
}

TEST_CASE("jump kernel: drift vanishes, slopes match the small-r laws") {
    CHECK(jump_kernel(catalog("drift"), 3, 0.1) == 0.0);

    const auto slope = [](const CatalogEntry& e, double lo, double hi) {
        std::vector<double> lx, ly;
        for (double r : log_grid(lo, hi, 9)) {
            lx.push_back(std::log(r));
            ly.push_back(std::log(jump_kernel(e, 3, r)));
        }
        return ls_slope(lx, ly);
    };
    CHECK(std::fabs(slope(catalog("vg"), 1e-3, 1e-2) + 3.0) <= 0.05);
    CHECK(std::fabs(slope(catalog("stable(1)"), 1e-3, 1e-1) + 4.0) <= 0.02);
    // Green's small-r slope for stable(1): g ~ r^{-2}.
    std::vector<double> lx, ly;
    const auto st = catalog("stable(1)");
    for (double r : log_grid(1e-3, 1e-1, 9)) {
        lx.push_back(std::log(r));
        ly.push_back(std::log(green_kernel(st, 3, r)));
    }
    CHECK(std::fabs(ls_slope(lx, ly) + 2.0) <= 0.02);
}

TEST_CASE("kernels decrease along radial grids") {
    for (const char* key : {"vg", "stable(1)", "example3"}) {
        const auto entry = catalog(key);
        double prev_j = 1e308, prev_g = 1e308;
        for (double r : log_grid(1e-3, 0.5, 12)) {
            const double j = jump_kernel(entry, 3, r);
            const double g = green_kernel(entry, 3, r);
            INFO("key = ", key);
            CHECK(j < prev_j);
            CHECK(g < prev_g);
            prev_j = j;
            prev_g = g;
        }
    }
}

TEST_CASE("example3 Green function carries the logarithmic correction") {
    // g(r) / (r^{-1} log(1/r)) stays within a narrow band.
    const auto entry = catalog("example3");
    double lo = 1e300, hi = 0.0;
    for (double r : log_grid(1e-4, 1e-2, 8)) {
        const double ratio =
            green_kernel(entry, 3, r) / (std::log(1.0 / r) / r);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 3.0);
}

TEST_CASE("ratio sweeps: exact scaling is constant, others bounded") {
    const auto grid = log_grid(1e-4, 1e-1, 12);
    const auto st = jump_ratio_sweep(catalog("stable(1)"), 3, grid);
    CHECK(st.verdict != SweepVerdict::failed);
    CHECK(st.spread <= 1.0 + 1e-3);

    const auto stg = green_ratio_sweep(catalog("stable(1)"), 3, grid);
    CHECK(stg.spread <= 1.0 + 1e-3);

    for (const char* key : {"vg", "geo-iter(2,2)", "example3"}) {
        INFO("key = ", key);
        CHECK(jump_ratio_sweep(catalog(key), 3, grid).verdict != SweepVerdict::failed);
        CHECK(green_ratio_sweep(catalog(key), 3, grid).verdict != SweepVerdict::failed);
    }
    // alpha = 2: both stated comparabilities hold.
    CHECK(green_ratio_sweep(catalog("example3"), 3, grid,
                            GreenComparison::reciprocal_form)
              .verdict != SweepVerdict::failed);
}

TEST_CASE("green difference: Newtonian pair reproduces ratio 1/2") {
    const auto drift = catalog("drift");
    const double g01 = green_kernel(drift, 3, 0.1);
    const double g02 = green_kernel(drift, 3, 0.2);
    const double ratio = std::fabs(g01 - g02) / (g01 * std::min(1.0, 0.1 / 0.1));
    CHECK(ratio == doctest::Approx(0.5).epsilon(1e-8));

    const auto rep = green_difference_check(catalog("vg"), 3,
                                            {0.02, 0.05, 0.1, 0.2}, 100, 42);
    CHECK(rep.stable);
    CHECK(rep.max_constant > 0.0);
    CHECK(rep.max_constant < 50.0);
}

TEST_CASE("geometric reductions: constant weight recovers volumes") {
    const RadialProfile one([](double) { return 1.0; }, 1e-3, 10.0);
    // Ball of radius 0.25 centered at distance 0.5.
    const double vol = 4.0 / 3.0 * M_PI * std::pow(0.25, 3);
    CHECK(ball_radial_integral(one, 3, 0.5, 0.25) ==
          doctest::Approx(vol).epsilon(1e-6));
    // Shell 0.1 <= |y| <= 0.3 seen from |z| = 1.
    const double shell = 4.0 / 3.0 * M_PI * (std::pow(0.3, 3) - std::pow(0.1, 3));
    CHECK(shell_offset_integral(one, 3, 1.0, 0.1, 0.3) ==
          doctest::Approx(shell).epsilon(1e-6));
}

TEST_CASE("radial profile interpolates power laws exactly") {
    const RadialProfile p([](double r) { return 3.0 * std::pow(r, -2.3); }, 1e-3,
                          10.0, 24);
    for (double r : {2e-3, 0.7, 9.0})
        CHECK(p(r) == doctest::Approx(3.0 * std::pow(r, -2.3)).epsilon(1e-10));
}

TEST_CASE("shell jump mass stays below the phi bound") {
    const auto stable_rep = shell_mass_check(catalog("stable(1)"), 3, {0.5});
    CHECK(stable_rep.finite);
    CHECK(stable_rep.masses.front() > 0.0);

    const auto vg_rep =
        shell_mass_check(catalog("vg"), 3, {0.3, 0.5, 0.7, 1.0});
    CHECK(vg_rep.finite);
    CHECK(vg_rep.max_constant < 100.0);
}

TEST_CASE("whole-catalog ratio sweeps stay bounded in the applicable branch") {
    // Covers the entries the acceptance sweep skips, including the
    // hybrid-density ones. The alpha = 2 conjugates converge at a 1/log rate
    // and need the deeper grid before the tail slope settles below the
    // threshold (measured: -0.069 on [1e-3,1e-2] vs -0.034 on [1e-4,1e-3]).
    const auto grid = log_grid(1e-3, 1e-1, 8);
    for (const char* key : {"geo(0.5)", "geo(1.5)", "geo-iter(1,2)", "stable-log(0.5)",
                            "stable-log(1)", "stable-log(1.5)"}) {
        const auto entry = catalog(key);
        INFO("key = ", key);
        CHECK(jump_ratio_sweep(entry, 3, grid).verdict != SweepVerdict::failed);
        CHECK(green_ratio_sweep(entry, 3, grid).verdict != SweepVerdict::failed);
    }
    const auto deep = log_grid(1e-4, 1e-1, 10);
    for (const char* key : {"conj-geo-iter(2,1)", "conj-geo-iter(2,2)"}) {
        const auto entry = catalog(key);
        INFO("key = ", key);
        CHECK(jump_ratio_sweep(entry, 3, deep).verdict != SweepVerdict::failed);
        CHECK(green_ratio_sweep(entry, 3, deep).verdict != SweepVerdict::failed);
    }
}

TEST_CASE("total jump mass away from the origin is finite") {
    // Oracle: int mu(t) P(|N(0, 2t I_3)| >= 1) dt by high-precision quadrature
    // of the chi-square tail.
    CHECK(jump_mass_outside_unit_ball(catalog("vg"), 3) ==
          doctest::Approx(1.1745267511339).epsilon(1e-4));
    CHECK(jump_mass_outside_unit_ball(catalog("stable(1)"), 3) ==
          doctest::Approx(1.2732395447348).epsilon(1e-4));
}
