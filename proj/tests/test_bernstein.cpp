// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sbm/catalog.hpp"

using sbm::catalog;
using sbm::catalog_keys;
using sbm::compose;
using sbm::conjugate;
using sbm::LaplaceExponent;

TEST_CASE("pointwise catalog values") {
    CHECK(catalog("vg").exponent.eval(M_E - 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(catalog("stable(1)").exponent.eval(4.0) == doctest::Approx(2.0).epsilon(1e-14));
    const auto phi2 = catalog("geo-iter(2,2)").exponent;
    CHECK(phi2.eval(std::exp(M_E - 1.0) - 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(catalog("vg").exponent.eval(0.0), sbm::DomainError);
    CHECK_THROWS_AS(catalog("vg").exponent.eval(-2.0), sbm::DomainError);
    CHECK_THROWS_AS(catalog("nope"), sbm::DomainError);
}

TEST_CASE("derivatives: closed forms and the numerical fallback") {
    CHECK(catalog("vg").exponent.prime(1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(catalog("stable(1)").exponent.prime(4.0) ==
          doctest::Approx(0.25).epsilon(1e-14));
    // Numerical derivative against the closed form.
    const double num = sbm::numerical_derivative(
        [](double l) { return std::log1p(l); }, 1.0);
    CHECK(std::fabs(num - 0.5) <= 1e-8);
}

TEST_CASE("composition: values, chain rule, flags") {
    const auto vg = catalog("vg").exponent;
    const auto phi2 = compose(vg, vg);
    CHECK(phi2.eval(std::exp(M_E - 1.0) - 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    // Hand chain rule at lambda = 0.5: (1/(1+log 1.5)) * (1/1.5).
    const double want = 1.0 / (1.0 + std::log(1.5)) / 1.5;
    CHECK(phi2.prime(0.5) == doctest::Approx(want).epsilon(1e-14));
    CHECK(phi2.prime(0.5) == doctest::Approx(0.4743388240808324).epsilon(1e-12));
    CHECK(phi2.is_complete_bernstein);

    // compose(identity, phi) = phi pointwise.
    const auto idphi = compose(sbm::identity_exponent(), vg);
    for (double l : sbm::log_grid(1e-5, 1e5, 40))
        CHECK(idphi.eval(l) == doctest::Approx(vg.eval(l)).epsilon(1e-14));
}

TEST_CASE("composition is associative on grids") {
    const auto a = catalog("geo(1)").exponent;
    const auto b = catalog("vg").exponent;
    const auto c = catalog("stable(1)").exponent;
    const auto left = compose(compose(a, b), c);
    const auto right = compose(a, compose(b, c));
    for (double l : sbm::log_grid(1e-5, 1e5, 60))
        CHECK(std::fabs(left.eval(l) / right.eval(l) - 1.0) <= 1e-12);
}

TEST_CASE("conjugate: values, self-conjugacy, pair identity") {
    const auto vg = catalog("vg").exponent;
    const auto star = conjugate(vg);
    CHECK(star.eval(M_E - 1.0) == doctest::Approx(M_E - 1.0).epsilon(1e-14));

    // conjugate of log(1+sqrt(lambda)) is the catalog's example3 exponent.
    const auto ex3 = catalog("example3").exponent;
    const auto built = conjugate(catalog("geo(1)").exponent);
    for (double l : sbm::log_grid(1e-4, 1e4, 40))
        CHECK(built.eval(l) == doctest::Approx(ex3.eval(l)).epsilon(1e-13));

    // stable(1) is self-conjugate.
    const auto half = catalog("stable(1)").exponent;
    const auto half_star = conjugate(half);
    for (double l : sbm::log_grid(1e-4, 1e4, 40))
        CHECK(half_star.eval(l) == doctest::Approx(half.eval(l)).epsilon(1e-13));

    // phi(lambda) * phi*(lambda) = lambda exactly (to rounding).
    for (const char* key : {"vg", "geo(1.5)", "stable(0.5)", "stable-log(1)"}) {
        const auto phi = catalog(key).exponent;
        const auto phis = conjugate(phi);
        for (double l : sbm::log_grid(1e-6, 1e6, 30))
            CHECK(std::fabs(phi.eval(l) * phis.eval(l) / l - 1.0) <= 1e-14);
    }
}

TEST_CASE("catalog-wide shape properties on evaluation grids") {
    const auto grid = sbm::log_grid(1e-6, 1e6, 120);
    for (const auto& key : catalog_keys()) {
        const auto entry = catalog(key);
        INFO("key = ", key);
        CHECK(entry.expected_alpha == doctest::Approx(*entry.exponent.alpha));
        double prev_phi = 0.0, prev_prime = 1e308;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double phi = entry.exponent.eval(grid[i]);
            const double dphi = entry.exponent.prime(grid[i]);
            CHECK(phi > prev_phi);        // increasing
            CHECK(dphi > 0.0);            // positive derivative
            CHECK(dphi <= prev_prime * (1.0 + 1e-12));  // decreasing derivative
            // Bernstein inequality with 1e-12 absolute slack.
            CHECK(grid[i] * dphi <= phi + 1e-12);
            prev_phi = phi;
            prev_prime = dphi;
        }
        // Divided differences decrease (concavity).
        for (std::size_t i = 2; i < grid.size(); i += 7) {
            const double d1 = (entry.exponent.eval(grid[i - 1]) -
                               entry.exponent.eval(grid[i - 2])) /
                              (grid[i - 1] - grid[i - 2]);
            const double d2 =
                (entry.exponent.eval(grid[i]) - entry.exponent.eval(grid[i - 1])) /
                (grid[i] - grid[i - 1]);
            CHECK(d2 <= d1 * (1.0 + 1e-10));
        }
    }
}

TEST_CASE("bernstein inequality survives composition and conjugation") {
    const auto base = catalog("geo(1)").exponent;
    for (const LaplaceExponent& exp :
         {compose(base, base), conjugate(base), conjugate(compose(base, base))}) {
        for (double l : sbm::log_grid(1e-6, 1e6, 80))
            CHECK(l * exp.prime(l) <= exp.eval(l) + 1e-12);
    }
}

TEST_CASE("killing conventions") {
    CHECK(catalog("conj-geo-iter(2,1)").exponent.kill_rate == doctest::Approx(1.0));
    CHECK(catalog("conj-geo-iter(2,2)").exponent.kill_rate == doctest::Approx(1.0));
    CHECK(catalog("example3").exponent.kill_rate == 0.0);
    CHECK(catalog("vg").exponent.kill_rate == 0.0);
    CHECK(catalog("drift").exponent.drift == 1.0);
}
