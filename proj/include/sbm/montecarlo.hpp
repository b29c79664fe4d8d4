// SPDX-License-Identifier: Apache-2.0
//
// Path simulation of the subordinate Brownian motion X_t = B(S_t) on a
// discrete time skeleton (Gaussian increments with covariance 2 dS per
// coordinate), exit statistics from balls, occupation/exit-position kernel
// estimates and the probabilistic verification sweeps built on them.
//
// Determinism: path i draws from the counter-based stream (master_seed, i).
// Paths are distributed over workers in fixed chunks and chunk results are
// merged in index order, so results are bit-identical for any worker count.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sbm/catalog.hpp"
#include "sbm/samplers.hpp"

namespace sbm::mc {

inline constexpr int kMaxDim = 8;
using Point = std::array<double, kMaxDim>;

struct SimConfig {
    std::string exponent_key;
    int dim = 3;
    double time_step = 1e-3;
    double jump_truncation = 1e-4;
    std::uint64_t master_seed = 1;
    std::int64_t n_paths = 10000;
    double ball_radius = 0.1;
    std::vector<Point> start_points;  // empty means the origin
    std::uint64_t max_steps = 10'000'000;
    int workers = 0;  // 0 = hardware concurrency

    void validate() const;
};

struct ExitRecord {
    std::uint64_t path_index = 0;
    Point start{};
    double radius = 0.0;
    double exit_time = 0.0;
    Point exit_position{};
    bool censored = false;
    bool killed = false;
};

struct ExitStats {
    std::vector<ExitRecord> records;  // path-index order
    int dim = 0;
    double censored_fraction = 0.0;
    double killed_fraction = 0.0;
    double mean_exit_time = 0.0;
};

/// Exit of each path from B_{ball_radius}(0) started at cfg.start_points[0]
/// (the origin when unset).
ExitStats simulate_exit(const SimConfig& cfg);

/// Empirical E[exp(-lambda S_t)] against exp(-t phi(lambda)).
struct LaplaceIdentityRow {
    double lambda = 0.0, t = 0.0;
    double empirical = 0.0, std_error = 0.0, expected = 0.0, z = 0.0;
};
std::vector<LaplaceIdentityRow> laplace_identity_check(
    const SimConfig& cfg, const std::vector<double>& lambdas,
    const std::vector<double>& ts);

/// Occupation-density estimate of the killed-ball Green function G_B(0, .)
/// on radial shells (d >= 3, start at the origin).
struct GreenBallEstimate {
    std::vector<double> edges;  // n_shells + 1 radial edges, edges[0] = 0
    std::vector<double> value;
    std::vector<double> std_error;
    double mean_exit_time = 0.0;
    double se_exit_time = 0.0;
    double censored_fraction = 0.0;
    std::int64_t n_paths = 0;
};
GreenBallEstimate estimate_green_ball(const SimConfig& cfg, int n_shells = 40);

/// Exit-position density estimate (Poisson kernel) on radial exterior bins.
struct PoissonKernelEstimate {
    std::vector<double> edges;  // n_bins + 1 edges from ball_radius to z_max
    std::vector<double> value;
    std::vector<double> std_error;
    double overflow_fraction = 0.0;  // exits beyond z_max
    double total_mass = 0.0;         // binned mass + overflow
    std::int64_t n_paths = 0;
};
PoissonKernelEstimate estimate_poisson_kernel(const SimConfig& cfg, double z_max,
                                              int n_bins = 24);

/// Exit-position histogram against the exit formula
///   K(0,z) = int_B G_B(0,y) j(|z-y|) dy
/// evaluated with the Monte Carlo Green estimate and quadrature jump kernel,
/// with the difference and its standard error computed path-by-path.
struct ExitConsistencyBin {
    double z_lo = 0.0, z_hi = 0.0;
    double k_mc = 0.0, se_mc = 0.0;
    double k_quad = 0.0;
    double diff = 0.0, se_diff = 0.0;
    bool eligible = false;  // se_mc < 20% of k_mc
    bool pass = false;      // |diff| <= 3 se_diff
};
struct ExitConsistencyReport {
    std::vector<ExitConsistencyBin> bins;
    int n_eligible = 0;
    double pass_fraction = 0.0;  // among eligible bins
    double censored_fraction = 0.0;
};
ExitConsistencyReport exit_consistency_check(const SimConfig& cfg, int n_shells = 40,
                                             double z_max = 0.0, int n_zbins = 24);

/// Empirical shell-exit probabilities p(r) with the comparison weight
/// rho(r) = r^-2 phi'(r^-2)/phi(r^-2), in both annulus conventions:
/// exit of B_{r/2} landing in B_r \ B_{r/2}, and exit of B_{r/4} landing in
/// B_r \ B_{r/4}.
struct ShellExitPoint {
    double r = 0.0;
    double p_half = 0.0, se_half = 0.0;
    double p_quarter = 0.0, se_quarter = 0.0;
    double rho = 0.0;
    double censored_fraction = 0.0;
};
struct ShellExitSweep {
    std::vector<ShellExitPoint> points;  // ordered by r
};
ShellExitSweep shell_exit_sweep(const SimConfig& cfg, const std::vector<double>& r_list);

/// Harmonic function f(x) = P_x(X_{tau_{B_4r}} . e1 > 0) estimated on a
/// 9-point grid in B_{r/4}, with the normalized modulus
///   M = max |f(x)-f(y)| phi(|x-y|^-2) / phi(r^-2)
/// and a mean-value check through a sub-ball exit decomposition.
struct HarmonicReport {
    double r = 0.0;
    std::vector<Point> grid;
    std::vector<double> f_hat;
    std::vector<double> se;
    double modulus = 0.0;
    double max_se = 0.0;
    double mean_value_diff = 0.0;
    double mean_value_se = 0.0;
    bool mean_value_pass = false;
    double censored_fraction = 0.0;
};
HarmonicReport harmonic_modulus_check(const SimConfig& cfg);

/// Poisson-kernel difference bound check for x = (r/16) e1, y = -x (axial
/// bins; K(y,.) obtained from the same paths by mirror symmetry).
struct PoissonDiffBin {
    double z_lo = 0.0, z_hi = 0.0, cos_lo = 0.0, cos_hi = 0.0;
    double diff = 0.0, se = 0.0, bound = 0.0;
    bool near_regime = false;
};
struct PoissonDiffReport {
    double r = 0.0;
    double separation = 0.0;
    std::vector<PoissonDiffBin> bins;
    double c_near = 0.0;  // max (|diff|-3se)+ / bound over near bins
    double c_far = 0.0;
    int signal_bins = 0;  // bins with |diff| > 3 se
};
PoissonDiffReport poisson_difference_check(const SimConfig& cfg, double z_max = 0.0,
                                           int n_radial = 8, int n_angular = 6);

}  // namespace sbm::mc
