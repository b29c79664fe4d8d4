// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sbm/asymptotics.hpp"

using sbm::power_exp_integral;
using sbm::power_exp_integral_sweep;
using sbm::SweepVerdict;

TEST_CASE("pure-power weights give exact Gamma values") {
    // w = t^-1/2, p = 2, a = 1, r = 1 -> Gamma(1.5).
    CHECK(power_exp_integral([](double t) { return std::pow(t, -0.5); }, 2.0, 1.0, 1.0)
          == doctest::Approx(std::tgamma(1.5)).epsilon(1e-9));
    // w == 1, p = 2, a = 1, r = 0.5 -> Gamma(1)/0.5 = 2.
    CHECK(power_exp_integral([](double) { return 1.0; }, 2.0, 1.0, 0.5) ==
          doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("scaling identity holds for any (p, a, b, r)") {
    for (double p : {1.3, 2.0, 2.7})
        for (double b : {0.0, 0.5, 1.2})
            for (double a : {0.25, 1.0, 3.0})
                for (double r : {0.01, 0.3, 2.0}) {
                    const double val = power_exp_integral(
                        [b](double t) { return std::pow(t, -b); }, p, a, r, 1e-10);
                    const double normalized = val * std::pow(a, p + b - 1.0) *
                                              std::pow(r, p - 1.0) * std::pow(r, b);
                    CHECK(normalized ==
                          doctest::Approx(std::tgamma(p + b - 1.0)).epsilon(1e-8));
                }
}

TEST_CASE("ratio sweep: pure power is constant, verdict converges") {
    const auto sweep = power_exp_integral_sweep(
        [](double t) { return std::pow(t, -0.5); }, 2.0, 1.0, 0.5,
        sbm::log_grid(1e-6, 1e-1, 15));
    CHECK(sweep.verdict != SweepVerdict::failed);
    for (double ratio : sweep.ratios)
        CHECK(ratio == doctest::Approx(std::tgamma(1.5)).epsilon(1e-7));
}

TEST_CASE("perturbed power converges to the dominant-term constant") {
    const auto sweep = power_exp_integral_sweep(
        [](double t) { return std::pow(t, -0.5) * (1.0 + t); }, 2.0, 1.0, 0.5,
        sbm::log_grid(1e-6, 1e-1, 15));
    CHECK(sweep.verdict != SweepVerdict::failed);
    CHECK(sweep.ratios.front() == doctest::Approx(std::tgamma(1.5)).epsilon(1e-4));
}

TEST_CASE("slowly varying weight stays within a narrow band") {
    const auto sweep = power_exp_integral_sweep(
        [](double t) { return std::log(M_E + 1.0 / t); }, 2.0, 1.0, 0.0,
        sbm::log_grid(1e-6, 1e-1, 15));
    CHECK(sweep.verdict != SweepVerdict::failed);
    CHECK(sweep.spread < 10.0);
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(power_exp_integral([](double) { return 1.0; }, 1.0, 1.0, 1.0),
                    sbm::DomainError);
    CHECK_THROWS_AS(power_exp_integral([](double) { return 1.0; }, 2.0, -1.0, 1.0),
                    sbm::DomainError);
}
