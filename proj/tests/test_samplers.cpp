// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sbm/montecarlo.hpp"
#include "sbm/quadrature.hpp"
#include "sbm/samplers.hpp"

using namespace sbm;

namespace {

mc::SimConfig small_cfg(const std::string& key, std::int64_t n = 150000) {
    mc::SimConfig cfg;
    cfg.exponent_key = key;
    cfg.master_seed = 99;
    cfg.n_paths = n;
    return cfg;
}

}  // namespace

TEST_CASE("Laplace identity for every catalog entry (moderate n)") {
    for (const auto& key : catalog_keys()) {
        const auto rows =
            mc::laplace_identity_check(small_cfg(key), {0.5, 2.0}, {0.1, 1.0});
        for (const auto& row : rows) {
            INFO("key = ", key, " lambda = ", row.lambda, " t = ", row.t);
            if (row.std_error == 0.0)
                CHECK(std::fabs(row.empirical - row.expected) <= 1e-12);
            else
                CHECK(std::fabs(row.z) <= 4.0);
        }
    }
}

TEST_CASE("vg increments are Gamma(dt,1): unit mean at dt = 1") {
    const auto sampler = make_sampler(catalog("vg"));
    RngStream rng(7, 0);
    const int n = 400000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += sampler->increment(1.0, rng);
    CHECK(std::fabs(s / n - 1.0) <= 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("coarse increments preserve the mean above the floor") {
    const auto sampler = make_sampler(catalog("vg"));
    RngStream rng(8, 0);
    const int n = 1000000;
    const double dt = 1e-3;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += sampler->increment_coarse(dt, 1e-10, rng);
    const double se = std::sqrt(dt / n);  // Var(Gamma(dt)) = dt
    CHECK(std::fabs(s / n - dt) <= 4.0 * se);
}

TEST_CASE("jump table: construction, masses and sampling") {
    const auto entry = catalog("example3");
    const auto tab = build_jump_table(entry, 1e-4);
    CHECK(tab.total_rate > 0.0);
    CHECK(tab.edges.front() == doctest::Approx(1e-4));
    CHECK(tab.small_jump_drift > 0.0);

    RngStream rng(21, 5);
    double below_median = 0.0;
    const int n = 20000;
    const double mid = tab.edges[tab.edges.size() / 2];
    double expected_below = 0.0;
    for (std::size_t i = 0; i + 1 < tab.edges.size(); ++i)
        if (tab.edges[i + 1] <= mid)
            expected_below = tab.cum_mass[i];
    expected_below /= tab.total_rate;
    for (int i = 0; i < n; ++i) {
        const double x = tab.sample(rng);
        REQUIRE(x >= tab.edges.front());
        REQUIRE(x <= tab.edges.back() * (1.0 + 1e-12));
        below_median += x <= mid;
    }
    CHECK(std::fabs(below_median / n - expected_below) <=
          4.0 * std::sqrt(0.25 / n));
}

TEST_CASE("vg small-jump compensation is small and nonnegative") {
    const auto tab = build_jump_table(catalog("vg"), 1e-4);
    // The drift folds int_0^eps t mu(t) dt (= 1 - e^-eps ~ 1e-4) together
    // with the table's interpolation residual, so it is only required to be
    // of that order; the Laplace-identity checks pin the distribution itself.
    CHECK(tab.small_jump_drift >= 0.0);
    CHECK(tab.small_jump_drift <= 5e-4);
    CHECK(tab.small_jump_drift >= 0.5 * -std::expm1(-1e-4));
    CHECK_FALSE(tab.gaussian_correction);  // discarded variance is negligible
}

TEST_CASE("killed sampler: kill rate surfaces and the identity includes it") {
    const auto entry = catalog("conj-geo-iter(2,1)");
    const auto sampler = make_sampler(entry);
    CHECK(sampler->kill_rate() == doctest::Approx(1.0));
    // With killing at rate 1, P(alive at t=1) = e^-1; the Laplace identity
    // at lambda -> 0 would approach it. Spot-check lambda = 0.05.
    const auto rows = mc::laplace_identity_check(small_cfg("conj-geo-iter(2,1)"),
                                                 {0.05}, {1.0});
    CHECK(std::fabs(rows[0].z) <= 4.0);
    CHECK(rows[0].expected < std::exp(-1.0));  // killing plus jump mass
}

TEST_CASE("sampler factory routes exact families") {
    CHECK(make_sampler(catalog("vg"))->exact());
    CHECK(make_sampler(catalog("geo(1.5)"))->exact());
    CHECK(make_sampler(catalog("geo-iter(2,3)"))->exact());
    CHECK(make_sampler(catalog("stable(0.7)"))->exact());
    CHECK(make_sampler(catalog("drift"))->exact());
    CHECK_FALSE(make_sampler(catalog("example3"))->exact());
    CHECK_FALSE(make_sampler(catalog("stable-log(1)"))->exact());
}
