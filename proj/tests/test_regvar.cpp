// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sbm/catalog.hpp"
#include "sbm/regvar.hpp"

using sbm::catalog;
using sbm::check_de_haan;
using sbm::estimate_rv_index;
using sbm::fit_potter_bound;

TEST_CASE("pure powers are recovered exactly") {
    for (double rho : {-1.5, -0.5, 0.0, 0.77, 2.0}) {
        const auto fit =
            estimate_rv_index([rho](double l) { return std::pow(l, rho); }, 1e6);
        CHECK(std::fabs(fit.index - rho) <= 1e-10);
        CHECK(fit.residual <= 1e-9);
    }
}

TEST_CASE("catalog indices at large probe scales") {
    // phi' of stable(1) is a pure power with index -1/2.
    const auto st = catalog("stable(1)").exponent;
    CHECK(std::fabs(estimate_rv_index([st](double l) { return st.prime(l); }, 1e8).index +
                    0.5) <= 1e-10);

    // Slowly-varying phi (alpha = 0): phi' index -> -1.
    const auto vg = catalog("vg").exponent;
    const auto fit_vg = estimate_rv_index([vg](double l) { return vg.prime(l); }, 1e8);
    CHECK(std::fabs(fit_vg.index + 1.0) <= 0.02);
    CHECK(std::fabs(fit_vg.alpha_from_phi_prime()) <= 0.04);

    // alpha = 2 family: the limit index is 0 but the approach is O(1/log), so
    // expect the documented pre-asymptotic drift and require it to shrink.
    const auto ex3 = catalog("example3").exponent;
    const double i10 =
        estimate_rv_index([ex3](double l) { return ex3.prime(l); }, 1e10).index;
    const double i16 =
        estimate_rv_index([ex3](double l) { return ex3.prime(l); }, 1e16).index;
    CHECK(std::fabs(i10) <= 0.05);
    CHECK(std::fabs(i16) < std::fabs(i10));
}

TEST_CASE("Karamata consistency: index(phi) - index(phi') = 1 for alpha > 0") {
    for (const char* key : {"stable(0.5)", "stable(1.5)", "stable-log(1)", "example3"}) {
        const auto exp = catalog(key).exponent;
        const double ip = estimate_rv_index([exp](double l) { return exp.eval(l); }, 1e8).index;
        const double idp =
            estimate_rv_index([exp](double l) { return exp.prime(l); }, 1e8).index;
        INFO("key = ", key);
        CHECK(std::fabs(ip - idp - 1.0) <= 0.05);
    }
}

TEST_CASE("de Haan limits") {
    // ell == 1: L(lambda) = log lambda, deviation is exactly zero.
    const auto flat = check_de_haan([](double) { return 1.0; }, 1e6);
    CHECK(flat.max_deviation <= 1e-8);
    CHECK(flat.ratio_increasing);

    // ell = 1/log: probe above 2 with a shifted lower limit. The quadrature
    // oracle gives deviations -0.0127 (x=2), -0.0497 (x=4), -0.1329 (x=10) at
    // lambda = 1e8: the second-order term is -log^2(x)/(2 log lambda).
    const auto invlog =
        check_de_haan([](double l) { return 1.0 / std::log(l); }, 1e8, 2.0,
                      {2.0, 4.0, 10.0});
    CHECK(invlog.limit_deviation[0] <= 0.02);
    CHECK(invlog.limit_deviation[1] <= 0.06);
    CHECK(invlog.max_deviation <= 0.15);
    const auto invlog_far =
        check_de_haan([](double l) { return 1.0 / std::log(l); }, 1e12, 2.0,
                      {2.0, 4.0, 10.0});
    CHECK(invlog_far.max_deviation < invlog.max_deviation);

    // ell = lambda phi'(lambda) for vg: L/ell strictly increasing over decades.
    const auto vg = catalog("vg").exponent;
    const auto rep = check_de_haan(
        [vg](double l) { return l * vg.prime(l); }, 1e8, 0.0, {2.0, 4.0});
    CHECK(rep.ratio_increasing);
    CHECK(rep.L_over_ell.back() > 10.0);  // grows beyond any fixed bound
}

TEST_CASE("limit deviation shrinks with the probe scale") {
    const auto vg = catalog("vg").exponent;
    const auto ell = [vg](double l) { return l * vg.prime(l); };
    double prev = 1e300;
    for (double lmax : {1e5, 1e7, 1e9}) {
        const auto rep = check_de_haan(ell, lmax);
        CHECK(rep.max_deviation < prev);
        prev = rep.max_deviation;
    }
}

TEST_CASE("Potter bounds") {
    // Pure power: the bound holds with A = 1.
    const auto pure = fit_potter_bound(
        [](double l) { return std::pow(l, -0.5); }, 0.1, 1.0);
    CHECK(pure.bounded);
    CHECK(pure.constant <= 1.0 + 1e-9);

    // vg derivative: finite constant.
    const auto vg = catalog("vg").exponent;
    const auto fit = fit_potter_bound([vg](double l) { return vg.prime(l); }, 0.1, 1.0);
    CHECK(fit.bounded);
    CHECK(fit.constant < 1e3);

    // Bounded oscillating factor: still finite.
    const auto osc = fit_potter_bound(
        [](double l) { return std::pow(l, -0.5) * (std::sin(std::log(l)) + 2.0); },
        0.1, 1.0);
    CHECK(osc.bounded);
    CHECK(osc.constant < 1e6);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(estimate_rv_index([](double) { return -1.0; }, 1e6),
                    sbm::DomainError);
    CHECK_THROWS_AS(fit_potter_bound([](double l) { return l; }, -0.1, 1.0),
                    sbm::DomainError);
}
