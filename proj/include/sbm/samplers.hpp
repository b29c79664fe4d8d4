// SPDX-License-Identifier: Apache-2.0
//
// Samplers for subordinator increments. Exact constructions:
//   drift            S_dt = gamma dt
//   stable(a)        S_dt = dt^(2/a) * one-sided (a/2)-stable
//   geo(b)           S_dt = G^(2/b) * one-sided (b/2)-stable, G ~ Gamma(dt,1)
//                    (b = 2: S_dt = G, the gamma subordinator)
//   geo-iter(b,n)    n-fold nesting of the geo(b) construction
// Everything else uses the compound-Poisson approximation: jumps above the
// truncation eps drawn from a tabulated inverse CDF of mu, the sub-eps mean
// restored as deterministic drift, and an optional Gaussian correction when
// the discarded variance is non-negligible. Killing is exposed as a rate; the
// callers run the exponential clock.
#pragma once

#include <memory>
#include <vector>

#include "sbm/catalog.hpp"
#include "sbm/rng.hpp"

namespace sbm {

class SubordinatorSampler {
public:
    virtual ~SubordinatorSampler() = default;

    /// Sample of S_{t+dt} - S_t (killing excluded).
    virtual double increment(double dt, RngStream& rng) const = 0;

    /// Like increment(), but may return exact 0 cheaply when the sample is
    /// certain (up to probability ~1e-20) to fall below `floor`. Exit
    /// simulations buffer sub-floor mass, so this only skips work, not mass
    /// above the floor.
    virtual double increment_coarse(double dt, double floor, RngStream& rng) const {
        (void)floor;
        return increment(dt, rng);
    }

    double kill_rate() const { return kill_rate_; }
    bool exact() const { return exact_; }

protected:
    double kill_rate_ = 0.0;
    bool exact_ = true;
};

/// Chooses the exact sampler for drift / stable / geo / geo-iter keys and the
/// compound-Poisson sampler otherwise.
std::unique_ptr<SubordinatorSampler> make_sampler(const CatalogEntry& entry,
                                                  double jump_truncation = 1e-4);

/// Compound-Poisson approximation internals, exposed for tests.
struct JumpTable {
    std::vector<double> edges;       // cell edges (log spaced)
    std::vector<double> cum_mass;    // cumulative cell masses
    std::vector<double> slopes;      // per-cell log-log slope of mu
    std::vector<double> mu_left;     // mu at left edge
    double total_rate = 0.0;         // mu((eps, t_max))
    double small_jump_drift = 0.0;   // int_0^eps t mu(t) dt
    double small_jump_var = 0.0;     // int_0^eps t^2 mu(t) dt
    bool gaussian_correction = false;

    double sample(RngStream& rng) const;
};

JumpTable build_jump_table(const CatalogEntry& entry, double eps,
                           double t_max = 1e6, int cells_per_decade = 40);

}  // namespace sbm
