// SPDX-License-Identifier: Apache-2.0
#include "sbm/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "sbm/kernels.hpp"
#include "sbm/quadrature.hpp"

namespace sbm::mc {
namespace {

constexpr std::int64_t kChunk = 4096;

int resolve_workers(int workers) {
    int w = workers > 0 ? workers
                        : static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, std::min(w, 64));
}

// Fixed chunks processed by a worker pool; chunk accumulators are merged by
// the caller in index order, making results independent of the worker count.
template <class Acc, class Body>
std::vector<Acc> run_chunks(std::int64_t n_paths, int workers, const Acc& proto,
                            const Body& body) {
    const std::int64_t n_chunks = (n_paths + kChunk - 1) / kChunk;
    std::vector<Acc> accs(static_cast<std::size_t>(n_chunks), proto);
    std::atomic<std::int64_t> next{0};
    const auto work = [&]() {
        for (;;) {
            const std::int64_t ci = next.fetch_add(1);
            if (ci >= n_chunks) return;
            Acc& acc = accs[static_cast<std::size_t>(ci)];
            const std::int64_t lo = ci * kChunk;
            const std::int64_t hi = std::min(n_paths, lo + kChunk);
            for (std::int64_t p = lo; p < hi; ++p) body(p, acc);
        }
    };
    const int w = resolve_workers(workers);
    if (w == 1 || n_chunks == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(w));
        for (int i = 0; i < w; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return accs;
}

struct NoObserver {
    void dwell(double, std::uint64_t) const {}
};

struct PathResult {
    double time = 0.0;
    Point pos{};
    int status = 0;  // 0 exit, 1 censored, 2 killed
};

// Discrete skeleton X_{kh} = B(S_{kh}); Gaussian moves with variance
// 2 dS per coordinate. Sub-floor subordinator mass is buffered and applied
// in one merged Gaussian move (exact: Gaussian subordination is additive).
// The observer sees (squared radius, step count) dwell episodes.
template <class Obs>
PathResult run_exit_path(const SubordinatorSampler& sampler, int d, double h,
                         double ball_radius, const Point& start,
                         std::uint64_t max_steps, RngStream& rng, Obs&& obs) {
    const double floor = 5e-9 * ball_radius * ball_radius;
    double t_kill = std::numeric_limits<double>::infinity();
    if (sampler.kill_rate() > 0.0) t_kill = rng.exponential() / sampler.kill_rate();

    PathResult res;
    Point x = start;
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
    const double R2 = ball_radius * ball_radius;
    double pending = 0.0;
    std::uint64_t last_move = 0;

    for (std::uint64_t k = 1; k <= max_steps; ++k) {
        if (k * h > t_kill) {
            obs.dwell(r2, k - 1 - last_move);
            res.time = t_kill;
            res.pos = x;
            res.status = 2;
            return res;
        }
        pending += sampler.increment_coarse(h, floor, rng);
        if (pending < floor) continue;
        obs.dwell(r2, k - last_move);
        last_move = k;
        const double sd = std::sqrt(2.0 * pending);
        pending = 0.0;
        r2 = 0.0;
        for (int i = 0; i < d; ++i) {
            x[i] += sd * rng.normal();
            r2 += x[i] * x[i];
        }
        if (r2 >= R2) {
            res.time = static_cast<double>(k) * h;
            res.pos = x;
            res.status = 0;
            return res;
        }
    }
    obs.dwell(r2, max_steps - last_move);
    res.time = static_cast<double>(max_steps) * h;
    res.pos = x;
    res.status = 1;
    return res;
}

Point start_point(const SimConfig& cfg) {
    if (cfg.start_points.empty()) return Point{};
    return cfg.start_points.front();
}

// Radial shell index helper: bin 0 is [0, edges[1]), bins are log-spaced
// above it. Returns -1 for radii past the last edge.
struct ShellIndexer {
    double log_lo = 0.0, step = 0.0;
    int n = 0;
    double r_lo = 0.0, r_hi = 0.0;

    static ShellIndexer make(double r_inner, double r_outer, int n_log_bins) {
        ShellIndexer s;
        s.r_lo = r_inner;
        s.r_hi = r_outer;
        s.n = n_log_bins;
        s.log_lo = std::log(r_inner);
        s.step = (std::log(r_outer) - s.log_lo) / n_log_bins;
        return s;
    }
    // index in [0, n]: 0 = inner ball, 1..n = log shells
    int index_with_inner(double r) const {
        if (r < r_lo) return 0;
        if (r >= r_hi) return -1;
        const int i = static_cast<int>((std::log(r) - log_lo) / step);
        return 1 + std::min(i, n - 1);
    }
    std::vector<double> edges_with_inner() const {
        std::vector<double> e(static_cast<std::size_t>(n) + 2);
        e[0] = 0.0;
        for (int i = 0; i <= n; ++i)
            e[static_cast<std::size_t>(i) + 1] = std::exp(log_lo + i * step);
        return e;
    }
};

double ball_volume(int d, double r) {
    return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * std::pow(r, d);
}

double shell_volume(int d, double lo, double hi) {
    return ball_volume(d, hi) - ball_volume(d, lo);
}

double mean_of(double sum, std::int64_t n) { return sum / static_cast<double>(n); }

double se_of(double sum, double sumsq, std::int64_t n) {
    const double nn = static_cast<double>(n);
    const double m = sum / nn;
    const double var = std::max(sumsq / nn - m * m, 0.0);
    return std::sqrt(var / nn);
}

}  // namespace

void SimConfig::validate() const {
    if (dim < 1 || dim > kMaxDim) throw DomainError("SimConfig: dim must be in [1,8]");
    if (!(time_step > 0.0)) throw DomainError("SimConfig: time_step must be positive");
    if (!(jump_truncation > 0.0))
        throw DomainError("SimConfig: jump_truncation must be positive");
    if (n_paths < 1) throw DomainError("SimConfig: n_paths must be >= 1");
    if (!(ball_radius > 0.0)) throw DomainError("SimConfig: ball_radius must be positive");
    if (max_steps < 1) throw DomainError("SimConfig: max_steps must be >= 1");
    for (const Point& p : start_points) {
        double r2 = 0.0;
        for (int i = 0; i < dim; ++i) r2 += p[i] * p[i];
        if (r2 >= ball_radius * ball_radius)
            throw DomainError("SimConfig: start point outside the ball");
    }
}

ExitStats simulate_exit(const SimConfig& cfg) {
    cfg.validate();
    const CatalogEntry entry = catalog(cfg.exponent_key);
    const auto sampler = make_sampler(entry, cfg.jump_truncation);
    const Point start = start_point(cfg);

    ExitStats stats;
    stats.dim = cfg.dim;
    stats.records.resize(static_cast<std::size_t>(cfg.n_paths));
    ExitRecord* out = stats.records.data();

    struct Nothing {};
    run_chunks<Nothing>(cfg.n_paths, cfg.workers, Nothing{},
                        [&](std::int64_t p, Nothing&) {
                            RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(p));
                            const PathResult r = run_exit_path(
                                *sampler, cfg.dim, cfg.time_step, cfg.ball_radius,
                                start, cfg.max_steps, rng, NoObserver{});
                            ExitRecord& rec = out[p];
                            rec.path_index = static_cast<std::uint64_t>(p);
                            rec.start = start;
                            rec.radius = cfg.ball_radius;
                            rec.exit_time = r.time;
                            rec.exit_position = r.pos;
                            rec.censored = r.status == 1;
                            rec.killed = r.status == 2;
                        });

    double time_sum = 0.0;
    std::int64_t censored = 0, killed = 0;
    for (const ExitRecord& r : stats.records) {
        time_sum += r.exit_time;
        censored += r.censored;
        killed += r.killed;
    }
    stats.censored_fraction = mean_of(static_cast<double>(censored), cfg.n_paths);
    stats.killed_fraction = mean_of(static_cast<double>(killed), cfg.n_paths);
    stats.mean_exit_time = time_sum / static_cast<double>(cfg.n_paths);
    return stats;
}

std::vector<LaplaceIdentityRow> laplace_identity_check(
    const SimConfig& cfg, const std::vector<double>& lambdas,
    const std::vector<double>& ts) {
    cfg.validate();
    const CatalogEntry entry = catalog(cfg.exponent_key);
    const auto sampler = make_sampler(entry, cfg.jump_truncation);
    const std::size_t cells = lambdas.size() * ts.size();

    struct Acc {
        std::vector<double> sum, sumsq;
    };
    Acc proto{std::vector<double>(cells, 0.0), std::vector<double>(cells, 0.0)};
    const double kill = sampler->kill_rate();

    const auto accs = run_chunks<Acc>(
        cfg.n_paths, cfg.workers, proto, [&](std::int64_t p, Acc& acc) {
            RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(p));
            const double t_kill =
                kill > 0.0 ? rng.exponential() / kill
                           : std::numeric_limits<double>::infinity();
            for (std::size_t it = 0; it < ts.size(); ++it) {
                const double t = ts[it];
                const double s = sampler->increment(t, rng);
                const bool alive = t_kill > t;
                for (std::size_t il = 0; il < lambdas.size(); ++il) {
                    const double v = alive ? std::exp(-lambdas[il] * s) : 0.0;
                    const std::size_t c = it * lambdas.size() + il;
                    acc.sum[c] += v;
                    acc.sumsq[c] += v * v;
                }
            }
        });

    Acc total = proto;
    for (const Acc& a : accs)
        for (std::size_t c = 0; c < cells; ++c) {
            total.sum[c] += a.sum[c];
            total.sumsq[c] += a.sumsq[c];
        }

    std::vector<LaplaceIdentityRow> rows;
    for (std::size_t it = 0; it < ts.size(); ++it)
        for (std::size_t il = 0; il < lambdas.size(); ++il) {
            const std::size_t c = it * lambdas.size() + il;
            LaplaceIdentityRow row;
            row.lambda = lambdas[il];
            row.t = ts[it];
            row.empirical = mean_of(total.sum[c], cfg.n_paths);
            row.std_error = se_of(total.sum[c], total.sumsq[c], cfg.n_paths);
            row.expected = std::exp(-ts[it] * entry.exponent.eval(lambdas[il]));
            row.z = row.std_error > 0.0
                        ? (row.empirical - row.expected) / row.std_error
                        : 0.0;
            rows.push_back(row);
        }
    return rows;
}

namespace {

// Occupation observer writing dwell times into radial shells.
struct ShellObserver {
    const ShellIndexer* shells;
    double h;
    std::vector<double>* occ;  // size shells->n + 1
    void dwell(double r2, std::uint64_t steps) const {
        if (steps == 0) return;
        const int i = shells->index_with_inner(std::sqrt(r2));
        if (i >= 0) (*occ)[static_cast<std::size_t>(i)] += h * static_cast<double>(steps);
    }
};

struct GreenAcc {
    std::vector<double> sum, sumsq;  // per shell occupation
    double t_sum = 0.0, t_sumsq = 0.0;
    std::int64_t censored = 0;
};

}  // namespace

GreenBallEstimate estimate_green_ball(const SimConfig& cfg, int n_shells) {
    cfg.validate();
    if (cfg.dim < 3) throw DomainError("estimate_green_ball: need d >= 3");
    if (!cfg.start_points.empty())
        for (int i = 0; i < cfg.dim; ++i)
            if (cfg.start_points.front()[i] != 0.0)
                throw DomainError("estimate_green_ball: radial bins need start at 0");
    const CatalogEntry entry = catalog(cfg.exponent_key);
    const auto sampler = make_sampler(entry, cfg.jump_truncation);
    const ShellIndexer shells =
        ShellIndexer::make(cfg.ball_radius / 64.0, cfg.ball_radius, n_shells - 1);
    const std::size_t nb = static_cast<std::size_t>(n_shells);

    GreenAcc proto{std::vector<double>(nb, 0.0), std::vector<double>(nb, 0.0), 0, 0, 0};
    const auto accs = run_chunks<GreenAcc>(
        cfg.n_paths, cfg.workers, proto, [&](std::int64_t p, GreenAcc& acc) {
            RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(p));
            std::vector<double> occ(nb, 0.0);
            ShellObserver obs{&shells, cfg.time_step, &occ};
            const PathResult r =
                run_exit_path(*sampler, cfg.dim, cfg.time_step, cfg.ball_radius,
                              Point{}, cfg.max_steps, rng, obs);
            for (std::size_t i = 0; i < nb; ++i) {
                acc.sum[i] += occ[i];
                acc.sumsq[i] += occ[i] * occ[i];
            }
            acc.t_sum += r.time;
            acc.t_sumsq += r.time * r.time;
            acc.censored += r.status == 1;
        });

    GreenAcc total = proto;
    for (const GreenAcc& a : accs) {
        for (std::size_t i = 0; i < nb; ++i) {
            total.sum[i] += a.sum[i];
            total.sumsq[i] += a.sumsq[i];
        }
        total.t_sum += a.t_sum;
        total.t_sumsq += a.t_sumsq;
        total.censored += a.censored;
    }

    GreenBallEstimate est;
    est.edges = shells.edges_with_inner();
    est.n_paths = cfg.n_paths;
    est.mean_exit_time = mean_of(total.t_sum, cfg.n_paths);
    est.se_exit_time = se_of(total.t_sum, total.t_sumsq, cfg.n_paths);
    est.censored_fraction = mean_of(static_cast<double>(total.censored), cfg.n_paths);
    for (std::size_t i = 0; i < nb; ++i) {
        const double vol = shell_volume(cfg.dim, est.edges[i], est.edges[i + 1]);
        est.value.push_back(mean_of(total.sum[i], cfg.n_paths) / vol);
        est.std_error.push_back(se_of(total.sum[i], total.sumsq[i], cfg.n_paths) / vol);
    }
    return est;
}

PoissonKernelEstimate estimate_poisson_kernel(const SimConfig& cfg, double z_max,
                                              int n_bins) {
    cfg.validate();
    if (cfg.dim < 3) throw DomainError("estimate_poisson_kernel: need d >= 3");
    if (!(z_max > cfg.ball_radius))
        throw DomainError("estimate_poisson_kernel: z_max must exceed the ball radius");
    const CatalogEntry entry = catalog(cfg.exponent_key);
    const auto sampler = make_sampler(entry, cfg.jump_truncation);
    const Point start = start_point(cfg);

    const double log_lo = std::log(cfg.ball_radius);
    const double step = (std::log(z_max) - log_lo) / n_bins;
    const std::size_t nb = static_cast<std::size_t>(n_bins);

    struct Acc {
        std::vector<double> count;
        double overflow = 0.0;
        std::int64_t lost = 0;  // censored or killed
    };
    Acc proto{std::vector<double>(nb, 0.0), 0.0, 0};
    const auto accs = run_chunks<Acc>(
        cfg.n_paths, cfg.workers, proto, [&](std::int64_t p, Acc& acc) {
            RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(p));
            const PathResult r =
                run_exit_path(*sampler, cfg.dim, cfg.time_step, cfg.ball_radius,
                              start, cfg.max_steps, rng, NoObserver{});
            if (r.status != 0) {
                ++acc.lost;
                return;
            }
            double rr = 0.0;
            for (int i = 0; i < cfg.dim; ++i) rr += r.pos[i] * r.pos[i];
            const double z = std::sqrt(rr);
            const int bin = static_cast<int>((std::log(z) - log_lo) / step);
            if (bin >= n_bins)
                acc.overflow += 1.0;
            else
                acc.count[static_cast<std::size_t>(std::max(bin, 0))] += 1.0;
        });

    Acc total = proto;
    for (const Acc& a : accs) {
        for (std::size_t i = 0; i < nb; ++i) total.count[i] += a.count[i];
        total.overflow += a.overflow;
        total.lost += a.lost;
    }

    PoissonKernelEstimate est;
    est.n_paths = cfg.n_paths;
    est.edges.push_back(cfg.ball_radius);
    const double n = static_cast<double>(cfg.n_paths);
    double mass = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
        const double lo = std::exp(log_lo + static_cast<double>(i) * step);
        const double hi = std::exp(log_lo + static_cast<double>(i + 1) * step);
        est.edges.push_back(hi);
        const double vol = shell_volume(cfg.dim, lo, hi);
        const double p = total.count[i] / n;
        est.value.push_back(p / vol);
        est.std_error.push_back(std::sqrt(p * (1.0 - p) / n) / vol);
        mass += p;
    }
    est.overflow_fraction = total.overflow / n;
    est.total_mass = mass + est.overflow_fraction;
    return est;
}

ExitConsistencyReport exit_consistency_check(const SimConfig& cfg, int n_shells,
                                             double z_max, int n_zbins) {
    cfg.validate();
    if (cfg.dim < 3) throw DomainError("exit_consistency_check: need d >= 3");
    const double r = cfg.ball_radius;
    if (z_max <= 0.0) z_max = 3.0 * r;
    const CatalogEntry entry = catalog(cfg.exponent_key);
    const auto sampler = make_sampler(entry, cfg.jump_truncation);

    const ShellIndexer shells = ShellIndexer::make(r / 64.0, r, n_shells - 1);
    const std::vector<double> shell_edges = shells.edges_with_inner();
    const std::size_t ns = static_cast<std::size_t>(n_shells);

    // Exterior z bins.
    const double zlog_lo = std::log(r), zstep = (std::log(z_max) - zlog_lo) / n_zbins;
    std::vector<double> z_lo(static_cast<std::size_t>(n_zbins)),
        z_hi(static_cast<std::size_t>(n_zbins)), z_c(static_cast<std::size_t>(n_zbins)),
        z_vol(static_cast<std::size_t>(n_zbins));
    for (int i = 0; i < n_zbins; ++i) {
        z_lo[static_cast<std::size_t>(i)] = std::exp(zlog_lo + i * zstep);
        z_hi[static_cast<std::size_t>(i)] = std::exp(zlog_lo + (i + 1) * zstep);
        z_c[static_cast<std::size_t>(i)] = std::sqrt(
            z_lo[static_cast<std::size_t>(i)] * z_hi[static_cast<std::size_t>(i)]);
        z_vol[static_cast<std::size_t>(i)] = shell_volume(
            cfg.dim, z_lo[static_cast<std::size_t>(i)], z_hi[static_cast<std::size_t>(i)]);
    }

    // Jump kernel profile and the weights
    //   W[z][s] = int_{shell_s} j(|z_c - y|) dy / vol_s.
    const double v_min = 0.45 * (z_c.front() - r) > 0.0 ? 0.45 * (z_c.front() - r)
                                                        : 1e-3 * r;
    const RadialProfile j_prof(
        [&](double s) { return jump_kernel(entry, cfg.dim, s); }, v_min,
        z_max + 1.05 * r, 48);
    std::vector<std::vector<double>> w(static_cast<std::size_t>(n_zbins),
                                       std::vector<double>(ns, 0.0));
    for (int zb = 0; zb < n_zbins; ++zb)
        for (std::size_t s = 0; s < ns; ++s) {
            const double s_lo = std::max(shell_edges[s], 1e-9 * r);
            const double s_hi = shell_edges[s + 1];
            const double vol = shell_volume(cfg.dim, shell_edges[s], shell_edges[s + 1]);
            w[static_cast<std::size_t>(zb)][s] =
                shell_offset_integral(j_prof, cfg.dim, z_c[static_cast<std::size_t>(zb)],
                                      s_lo, s_hi, 1e-6) /
                vol;
        }

    struct Acc {
        std::vector<double> d_sum, d_sumsq, ind_sum, a_sum;
        std::int64_t lost = 0;
    };
    const std::size_t nz = static_cast<std::size_t>(n_zbins);
    Acc proto{std::vector<double>(nz, 0.0), std::vector<double>(nz, 0.0),
              std::vector<double>(nz, 0.0), std::vector<double>(nz, 0.0), 0};

    const auto accs = run_chunks<Acc>(
        cfg.n_paths, cfg.workers, proto, [&](std::int64_t p, Acc& acc) {
            RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(p));
            std::vector<double> occ(ns, 0.0);
            ShellObserver obs{&shells, cfg.time_step, &occ};
            const PathResult res =
                run_exit_path(*sampler, cfg.dim, cfg.time_step, r, Point{},
                              cfg.max_steps, rng, obs);
            int exit_bin = -1;
            if (res.status == 0) {
                double rr = 0.0;
                for (int i = 0; i < cfg.dim; ++i) rr += res.pos[i] * res.pos[i];
                const int b = static_cast<int>((0.5 * std::log(rr) - zlog_lo) / zstep);
                if (b >= 0 && b < n_zbins) exit_bin = b;
            } else {
                ++acc.lost;
            }
            for (std::size_t zb = 0; zb < nz; ++zb) {
                double a = 0.0;
                for (std::size_t s = 0; s < ns; ++s) a += occ[s] * w[zb][s];
                const double ind =
                    exit_bin == static_cast<int>(zb) ? 1.0 / z_vol[zb] : 0.0;
                const double d = ind - a;
                acc.d_sum[zb] += d;
                acc.d_sumsq[zb] += d * d;
                acc.ind_sum[zb] += ind;
                acc.a_sum[zb] += a;
            }
        });

    Acc total = proto;
    for (const Acc& a : accs) {
        for (std::size_t i = 0; i < nz; ++i) {
            total.d_sum[i] += a.d_sum[i];
            total.d_sumsq[i] += a.d_sumsq[i];
            total.ind_sum[i] += a.ind_sum[i];
            total.a_sum[i] += a.a_sum[i];
        }
        total.lost += a.lost;
    }

    ExitConsistencyReport rep;
    rep.censored_fraction = mean_of(static_cast<double>(total.lost), cfg.n_paths);
    int eligible = 0, passed = 0;
    const double n = static_cast<double>(cfg.n_paths);
    for (std::size_t zb = 0; zb < nz; ++zb) {
        ExitConsistencyBin bin;
        bin.z_lo = z_lo[zb];
        bin.z_hi = z_hi[zb];
        bin.k_mc = total.ind_sum[zb] / n;
        const double pmass = bin.k_mc * z_vol[zb];
        bin.se_mc = std::sqrt(std::max(pmass * (1.0 - pmass), 0.0) / n) / z_vol[zb];
        bin.k_quad = total.a_sum[zb] / n;
        bin.diff = total.d_sum[zb] / n;
        bin.se_diff = se_of(total.d_sum[zb], total.d_sumsq[zb], cfg.n_paths);
        bin.eligible = bin.k_mc > 0.0 && bin.se_mc < 0.2 * bin.k_mc;
        bin.pass = std::fabs(bin.diff) <= 3.0 * bin.se_diff;
        eligible += bin.eligible;
        passed += bin.eligible && bin.pass;
        rep.bins.push_back(bin);
    }
    rep.n_eligible = eligible;
    rep.pass_fraction = eligible > 0 ? static_cast<double>(passed) / eligible : 0.0;
    return rep;
}

ShellExitSweep shell_exit_sweep(const SimConfig& cfg, const std::vector<double>& r_list) {
    cfg.validate();
    const CatalogEntry entry = catalog(cfg.exponent_key);
    const auto sampler = make_sampler(entry, cfg.jump_truncation);

    ShellExitSweep sweep;
    std::uint64_t run = 0;
    for (double r : r_list) {
        ShellExitPoint pt;
        pt.r = r;
        const double lam = 1.0 / (r * r);
        pt.rho = lam * entry.exponent.prime(lam) / entry.exponent.eval(lam);

        for (int conv = 0; conv < 2; ++conv) {
            const double ball = conv == 0 ? 0.5 * r : 0.25 * r;
            struct Acc {
                double hits = 0.0;
                std::int64_t lost = 0;
            };
            const std::uint64_t base = (run++) * static_cast<std::uint64_t>(cfg.n_paths);
            const auto accs = run_chunks<Acc>(
                cfg.n_paths, cfg.workers, Acc{}, [&](std::int64_t p, Acc& acc) {
                    RngStream rng(cfg.master_seed,
                                  base + static_cast<std::uint64_t>(p));
                    const PathResult res =
                        run_exit_path(*sampler, cfg.dim, cfg.time_step, ball,
                                      Point{}, cfg.max_steps, rng, NoObserver{});
                    if (res.status != 0) {
                        ++acc.lost;
                        return;
                    }
                    double rr = 0.0;
                    for (int i = 0; i < cfg.dim; ++i) rr += res.pos[i] * res.pos[i];
                    if (rr < r * r) acc.hits += 1.0;
                });
            double hits = 0.0;
            std::int64_t lost = 0;
            for (const auto& a : accs) {
                hits += a.hits;
                lost += a.lost;
            }
            const double n = static_cast<double>(cfg.n_paths);
            const double p = hits / n;
            const double se = std::sqrt(p * (1.0 - p) / n);
            if (conv == 0) {
                pt.p_half = p;
                pt.se_half = se;
            } else {
                pt.p_quarter = p;
                pt.se_quarter = se;
            }
            pt.censored_fraction =
                std::max(pt.censored_fraction, static_cast<double>(lost) / n);
        }
        sweep.points.push_back(pt);
    }
    std::sort(sweep.points.begin(), sweep.points.end(),
              [](const ShellExitPoint& a, const ShellExitPoint& b) { return a.r < b.r; });
    return sweep;
}

namespace {

double phi_of_sep(const CatalogEntry& entry, double sep) {
    return entry.exponent.eval(1.0 / (sep * sep));
}

// f(x) = P_x(exit position of B_R has positive first coordinate).
double harmonic_target(const CatalogEntry& entry, const SimConfig& cfg, double R,
                       const Point& start, std::uint64_t stream_base,
                       std::int64_t n_paths, double* se_out, double* lost_out,
                       const SubordinatorSampler& sampler) {
    (void)entry;
    struct Acc {
        double hits = 0.0;
        std::int64_t lost = 0;
    };
    const auto accs = run_chunks<Acc>(
        n_paths, cfg.workers, Acc{}, [&](std::int64_t p, Acc& acc) {
            RngStream rng(cfg.master_seed, stream_base + static_cast<std::uint64_t>(p));
            const PathResult res = run_exit_path(sampler, cfg.dim, cfg.time_step, R,
                                                 start, cfg.max_steps, rng,
                                                 NoObserver{});
            if (res.status != 0) {
                ++acc.lost;
                return;
            }
            if (res.pos[0] > 0.0) acc.hits += 1.0;
        });
    double hits = 0.0;
    std::int64_t lost = 0;
    for (const auto& a : accs) {
        hits += a.hits;
        lost += a.lost;
    }
    const double n = static_cast<double>(n_paths);
    const double f = hits / n;
    if (se_out) *se_out = std::sqrt(f * (1.0 - f) / n);
    if (lost_out) *lost_out = static_cast<double>(lost) / n;
    return f;
}

}  // namespace

HarmonicReport harmonic_modulus_check(const SimConfig& cfg) {
    cfg.validate();
    if (cfg.dim < 3) throw DomainError("harmonic_modulus_check: need d >= 3");
    const double r = cfg.ball_radius;  // theorem scale; paths exit B_{4r}
    const double R = 4.0 * r;
    const CatalogEntry entry = catalog(cfg.exponent_key);
    const auto sampler = make_sampler(entry, cfg.jump_truncation);

    HarmonicReport rep;
    rep.r = r;
    // 9-point grid in B_{r/4}: center plus two scales along two axes.
    const double d1 = r / 16.0, d2 = r / 8.0;
    rep.grid.assign(9, Point{});
    rep.grid[1][0] = d1;
    rep.grid[2][0] = -d1;
    rep.grid[3][0] = d2;
    rep.grid[4][0] = -d2;
    rep.grid[5][1] = d1;
    rep.grid[6][1] = -d1;
    rep.grid[7][1] = d2;
    rep.grid[8][1] = -d2;

    const auto n = cfg.n_paths;
    std::uint64_t base = 0;
    for (const Point& x : rep.grid) {
        double se = 0.0, lost = 0.0;
        const double f = harmonic_target(entry, cfg, R, x, base, n, &se, &lost,
                                         *sampler);
        rep.f_hat.push_back(f);
        rep.se.push_back(se);
        rep.max_se = std::max(rep.max_se, se);
        rep.censored_fraction = std::max(rep.censored_fraction, lost);
        base += static_cast<std::uint64_t>(n);
    }

    const double phi_r = phi_of_sep(entry, r);
    for (std::size_t i = 0; i < rep.grid.size(); ++i)
        for (std::size_t j = i + 1; j < rep.grid.size(); ++j) {
            double s2 = 0.0;
            for (int c = 0; c < cfg.dim; ++c) {
                const double d = rep.grid[i][c] - rep.grid[j][c];
                s2 += d * d;
            }
            const double sep = std::sqrt(s2);
            if (sep == 0.0) continue;
            const double m =
                std::fabs(rep.f_hat[i] - rep.f_hat[j]) * phi_of_sep(entry, sep) / phi_r;
            rep.modulus = std::max(rep.modulus, m);
        }

    // Mean-value check at x0 = grid[3] (= (r/8) e1) through the sub-ball
    // B_{2r}: f(x0) = sum over exit bins of mass * f(representative) plus the
    // exactly-known contribution of exits past 4r.
    const Point x0 = rep.grid[3];
    const double rho = 2.0 * r;
    constexpr int kNR = 4, kNC = 6;
    const double blog_lo = std::log(rho), blog_step = (std::log(R) - blog_lo) / kNR;

    struct Acc {
        std::array<double, kNR * kNC> mass{};
        double direct = 0.0;  // sum of exact indicators for |z| >= 4r
        std::int64_t lost = 0;
    };
    const std::uint64_t mv_base = base;
    const auto accs = run_chunks<Acc>(
        n, cfg.workers, Acc{}, [&](std::int64_t p, Acc& acc) {
            RngStream rng(cfg.master_seed, mv_base + static_cast<std::uint64_t>(p));
            const PathResult res = run_exit_path(*sampler, cfg.dim, cfg.time_step,
                                                 rho, x0, cfg.max_steps, rng,
                                                 NoObserver{});
            if (res.status != 0) {
                ++acc.lost;
                return;
            }
            double rr = 0.0;
            for (int i = 0; i < cfg.dim; ++i) rr += res.pos[i] * res.pos[i];
            const double z = std::sqrt(rr);
            if (z >= R) {
                acc.direct += res.pos[0] > 0.0 ? 1.0 : 0.0;
                return;
            }
            int rb = static_cast<int>((std::log(z) - blog_lo) / blog_step);
            rb = std::clamp(rb, 0, kNR - 1);
            const double c = res.pos[0] / z;
            int cb = static_cast<int>((c + 1.0) * 0.5 * kNC);
            cb = std::clamp(cb, 0, kNC - 1);
            acc.mass[static_cast<std::size_t>(rb * kNC + cb)] += 1.0;
        });

    Acc tot{};
    for (const Acc& a : accs) {
        for (std::size_t i = 0; i < tot.mass.size(); ++i) tot.mass[i] += a.mass[i];
        tot.direct += a.direct;
        tot.lost += a.lost;
    }

    // f at bin representatives, estimated with n/8 paths each.
    const std::int64_t n_rep = std::max<std::int64_t>(n / 8, 20000);
    std::uint64_t rep_base = mv_base + static_cast<std::uint64_t>(n);
    double mv = tot.direct / static_cast<double>(n);
    double second_moment = tot.direct / static_cast<double>(n);  // indicators
    double rep_var = 0.0;
    for (int rb = 0; rb < kNR; ++rb)
        for (int cb = 0; cb < kNC; ++cb) {
            const double mass =
                tot.mass[static_cast<std::size_t>(rb * kNC + cb)] / static_cast<double>(n);
            if (mass == 0.0) continue;
            const double zc = std::exp(blog_lo + (rb + 0.5) * blog_step);
            const double cc = -1.0 + (cb + 0.5) * 2.0 / kNC;
            Point repp{};
            repp[0] = zc * cc;
            repp[1] = zc * std::sqrt(std::max(1.0 - cc * cc, 0.0));
            double se_r = 0.0;
            const double fr = harmonic_target(entry, cfg, R, repp, rep_base, n_rep,
                                              &se_r, nullptr, *sampler);
            rep_base += static_cast<std::uint64_t>(n_rep);
            mv += mass * fr;
            second_moment += mass * fr * fr;
            rep_var += mass * mass * se_r * se_r;
        }
    const double stage1_var =
        std::max(second_moment - mv * mv, 0.0) / static_cast<double>(n);
    rep.mean_value_diff = std::fabs(rep.f_hat[3] - mv);
    rep.mean_value_se =
        std::sqrt(rep.se[3] * rep.se[3] + stage1_var + rep_var);
    rep.mean_value_pass = rep.mean_value_diff <= 3.0 * rep.mean_value_se;
    return rep;
}

PoissonDiffReport poisson_difference_check(const SimConfig& cfg, double z_max,
                                           int n_radial, int n_angular) {
    cfg.validate();
    if (cfg.dim < 3) throw DomainError("poisson_difference_check: need d >= 3");
    const double r = cfg.ball_radius;
    if (z_max <= 0.0) z_max = 4.0 * r;
    const CatalogEntry entry = catalog(cfg.exponent_key);
    const auto sampler = make_sampler(entry, cfg.jump_truncation);

    PoissonDiffReport rep;
    rep.r = r;
    Point x{};
    x[0] = r / 16.0;
    rep.separation = r / 8.0;  // |x - (-x)|

    const double blog_lo = std::log(r), blog_step = (std::log(z_max) - blog_lo) / n_radial;
    const std::size_t nbins = static_cast<std::size_t>(n_radial * n_angular);

    // Solid-angle fractions of the cos(theta) bands (exact for d = 3,
    // sin^{d-2} weights otherwise).
    std::vector<double> band_fraction(static_cast<std::size_t>(n_angular));
    {
        const auto wfun = [&](double th) {
            return std::pow(std::sin(th), cfg.dim - 2);
        };
        const double full = integrate(wfun, 0.0, M_PI, 1e-12, 200).value;
        for (int cb = 0; cb < n_angular; ++cb) {
            const double c_lo = -1.0 + 2.0 * cb / n_angular;
            const double c_hi = -1.0 + 2.0 * (cb + 1) / n_angular;
            band_fraction[static_cast<std::size_t>(cb)] =
                integrate(wfun, std::acos(c_hi), std::acos(c_lo), 1e-12, 200).value /
                full;
        }
    }

    struct Acc {
        std::vector<double> d_sum, d_sumsq;
    };
    Acc proto{std::vector<double>(nbins, 0.0), std::vector<double>(nbins, 0.0)};
    const auto accs = run_chunks<Acc>(
        cfg.n_paths, cfg.workers, proto, [&](std::int64_t p, Acc& acc) {
            RngStream rng(cfg.master_seed, static_cast<std::uint64_t>(p));
            const PathResult res = run_exit_path(*sampler, cfg.dim, cfg.time_step, r,
                                                 x, cfg.max_steps, rng, NoObserver{});
            if (res.status != 0) return;
            double rr = 0.0;
            for (int i = 0; i < cfg.dim; ++i) rr += res.pos[i] * res.pos[i];
            const double z = std::sqrt(rr);
            const int rb = static_cast<int>((std::log(z) - blog_lo) / blog_step);
            if (rb < 0 || rb >= n_radial) return;
            const double c = res.pos[0] / z;
            int cb = static_cast<int>((c + 1.0) * 0.5 * n_angular);
            cb = std::clamp(cb, 0, n_angular - 1);
            // K(x,.) in bin (rb,cb); K(-x,.) in the mirrored band by symmetry.
            const std::size_t b1 = static_cast<std::size_t>(rb * n_angular + cb);
            const std::size_t b2 =
                static_cast<std::size_t>(rb * n_angular + (n_angular - 1 - cb));
            acc.d_sum[b1] += 1.0;
            acc.d_sumsq[b1] += 1.0;  // adjusted below via pair handling
            acc.d_sum[b2] -= 1.0;
            acc.d_sumsq[b2] += 1.0;
        });

    Acc total = proto;
    for (const Acc& a : accs)
        for (std::size_t i = 0; i < nbins; ++i) {
            total.d_sum[i] += a.d_sum[i];
            total.d_sumsq[i] += a.d_sumsq[i];
        }

    const double sep_phi = phi_of_sep(entry, rep.separation);
    const RadialProfile j_prof(
        [&](double s) { return jump_kernel(entry, cfg.dim, s); }, 0.4 * r,
        0.55 * z_max, 48);

    const double n = static_cast<double>(cfg.n_paths);
    for (int rb = 0; rb < n_radial; ++rb) {
        const double lo = std::exp(blog_lo + rb * blog_step);
        const double hi = std::exp(blog_lo + (rb + 1) * blog_step);
        const double zc = std::sqrt(lo * hi);
        const double shell_vol = shell_volume(cfg.dim, lo, hi);
        for (int cb = 0; cb < n_angular; ++cb) {
            const std::size_t b = static_cast<std::size_t>(rb * n_angular + cb);
            PoissonDiffBin bin;
            bin.z_lo = lo;
            bin.z_hi = hi;
            bin.cos_lo = -1.0 + 2.0 * cb / n_angular;
            bin.cos_hi = -1.0 + 2.0 * (cb + 1) / n_angular;
            const double vol = shell_vol * band_fraction[static_cast<std::size_t>(cb)];
            bin.diff = total.d_sum[b] / n / vol;
            bin.se = se_of(total.d_sum[b], total.d_sumsq[b], cfg.n_paths) / vol;
            bin.near_regime = zc <= 2.0 * r;
            bin.bound = bin.near_regime
                            ? std::pow(zc, -cfg.dim) *
                                  entry.exponent.eval(std::pow(zc - r, -2.0)) / sep_phi
                            : j_prof(0.5 * zc) / sep_phi;
            const double excess = std::max(std::fabs(bin.diff) - 3.0 * bin.se, 0.0);
            if (bin.near_regime)
                rep.c_near = std::max(rep.c_near, excess / bin.bound);
            else
                rep.c_far = std::max(rep.c_far, excess / bin.bound);
            if (std::fabs(bin.diff) > 3.0 * bin.se) ++rep.signal_bins;
            rep.bins.push_back(bin);
        }
    }
    return rep;
}

}  // namespace sbm::mc
