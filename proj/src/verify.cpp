// SPDX-License-Identifier: Apache-2.0
#include "sbm/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "sbm/asymptotics.hpp"
#include "sbm/densities.hpp"
#include "sbm/inversion.hpp"
#include "sbm/io.hpp"
#include "sbm/kernels.hpp"
#include "sbm/montecarlo.hpp"
#include "sbm/quadrature.hpp"
#include "sbm/regvar.hpp"

namespace sbm::verify {
namespace {

using clock_type = std::chrono::steady_clock;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::int64_t scaled(std::int64_t n, double scale) {
    return std::max<std::int64_t>(static_cast<std::int64_t>(n * scale), 1000);
}

// Time-step policy: aim for a few hundred skeleton steps per path by the
// small-radius mean-exit-time scales (log for the slowly varying family,
// power for stable).
double pick_time_step(const std::string& key, double ball_radius) {
    double alpha = 0.0;
    if (std::sscanf(key.c_str(), "stable(%lf)", &alpha) == 1)
        return std::pow(ball_radius, alpha) / 500.0;
    return 1.0 / (500.0 * std::max(std::log(1.0 / ball_radius), 0.5));
}

// ---------------------------------------------------------------- criterion 1
CheckResult criterion1(const SuiteOptions&) {
    CheckResult res{"c1_closed_form_oracles", true, false, "", 0};
    std::ostringstream detail;

    // Newtonian Green function for the pure-drift exponent.
    const CatalogEntry drift = catalog("drift");
    double worst = 0.0;
    for (double r : {0.05, 0.2, 1.0}) {
        const double got = green_kernel(drift, 3, r);
        const double want = 1.0 / (4.0 * M_PI * r);
        worst = std::max(worst, std::fabs(got / want - 1.0));
    }
    detail << "newtonian_rel=" << num(worst);
    if (worst > 1e-7) res.pass = false;

    // Inverse transform of lambda^(-1/2) over t in [1e-3, 1].
    worst = 0.0;
    for (double t : log_grid(1e-3, 1.0, 10)) {
        const double got = invert_laplace(
                               [](std::complex<double> s) {
                                   return std::exp(-0.5 * std::log(s));
                               },
                               t)
                               .value;
        const double want = 1.0 / std::sqrt(M_PI * t);
        worst = std::max(worst, std::fabs(got / want - 1.0));
    }
    detail << " sqrt_inversion_rel=" << num(worst);
    if (worst > 1e-6) res.pass = false;

    // The vg Levy density reproduces phi = log(1+lambda) through quadrature.
    worst = 0.0;
    for (double lam : {0.5, 1.0, 10.0, 100.0}) {
        const auto f = [lam](double t) {
            return -std::expm1(-lam * t) * std::exp(-t) / t;
        };
        const double splits[] = {1.0 / lam, 1.0};
        const double got = integrate_zero_inf(f, 1e-11 * std::log1p(lam), splits).value;
        worst = std::max(worst, std::fabs(got / std::log1p(lam) - 1.0));
    }
    detail << " levy_transform_rel=" << num(worst);
    if (worst > 1e-8) res.pass = false;

    // Pure-power weights reproduce the Gamma value on a 5x5 mesh.
    worst = 0.0;
    for (double p : {1.2, 1.6, 2.0, 2.5, 3.0})
        for (double b : {0.0, 0.25, 0.5, 1.0, 1.5}) {
            const double r = 0.5;
            const double got =
                power_exp_integral([b](double t) { return std::pow(t, -b); }, p, 1.0,
                                   r, 1e-11) *
                std::pow(r, p + b - 1.0);
            worst = std::max(worst, std::fabs(got / std::tgamma(p + b - 1.0) - 1.0));
        }
    detail << " tail_integral_rel=" << num(worst);
    if (worst > 1e-8) res.pass = false;

    res.detail = detail.str();
    return res;
}

// ---------------------------------------------------------------- criterion 2
CheckResult criterion2(const SuiteOptions&) {
    CheckResult res{"c2_bernstein_inequality", true, false, "", 0};
    double worst = -1e300;
    std::string worst_key;
    for (const std::string& key : catalog_keys()) {
        const CatalogEntry entry = catalog(key);
        for (double lam : log_grid(1e-6, 1e6, 200)) {
            const double margin =
                lam * entry.exponent.prime(lam) - entry.exponent.eval(lam);
            if (margin > worst) {
                worst = margin;
                worst_key = key;
            }
        }
    }
    res.pass = worst <= 1e-12;
    res.detail = "max lambda*phi'-phi = " + num(worst) + " (" + worst_key + ")";
    return res;
}

// ---------------------------------------------------------------- criterion 3
CheckResult criterion3(const SuiteOptions&) {
    CheckResult res{"c3_potential_density_convergence", true, false, "", 0};
    std::ostringstream detail;
    for (const std::string& key :
         {std::string("stable(0.5)"), std::string("stable(1)"),
          std::string("stable(1.5)"), std::string("vg")}) {
        const CatalogEntry entry = catalog(key);
        const auto gap = [&](double t) {
            return std::fabs(u_numeric(entry.exponent, t) /
                                 u_asymptotic(entry.exponent, t) -
                             1.0);
        };
        const double v3 = gap(1e-3), v5 = gap(1e-5);
        const bool ok = v5 <= 0.5 * v3;
        detail << key << ": gap(1e-3)=" << num(v3) << " gap(1e-5)=" << num(v5)
               << (ok ? " ok; " : " FAIL; ");
        if (!ok) res.pass = false;
    }
    res.detail = detail.str();
    return res;
}

// ---------------------------------------------------------------- criterion 4
CheckResult criterion4(const SuiteOptions& opt) {
    CheckResult res{"c4_kernel_ratio_sweeps", true, false, "", 0};
    std::ostringstream detail;
    const std::vector<double> r_grid = log_grid(1e-4, 1e-1, 25);
    const std::vector<std::string> keys = {"stable(0.5)", "stable(1)", "stable(1.5)",
                                           "vg",          "geo(1)",    "geo-iter(2,2)",
                                           "example3"};
    CsvTable csv({"r", "jump_ratio", "green_ratio"});
    for (const std::string& key : keys) {
        const CatalogEntry entry = catalog(key);
        const RatioSweep js = jump_ratio_sweep(entry, 3, r_grid);
        const RatioSweep gs = green_ratio_sweep(entry, 3, r_grid);
        const bool stable_entry = key.rfind("stable(", 0) == 0;
        bool ok = js.verdict != SweepVerdict::failed && gs.verdict != SweepVerdict::failed;
        if (stable_entry)
            ok = ok && js.spread <= 1.01 && gs.spread <= 1.01;
        if (key == "example3") {
            const RatioSweep gs2 =
                green_ratio_sweep(entry, 3, r_grid, GreenComparison::reciprocal_form);
            ok = ok && gs2.verdict != SweepVerdict::failed;
            detail << "example3 alt form " << to_string(gs2.verdict) << "; ";
        }
        detail << key << ": j " << to_string(js.verdict) << " (spread " << num(js.spread)
               << ", tail slope " << num(js.log_slope_tail) << "), g "
               << to_string(gs.verdict) << " (spread " << num(gs.spread)
               << ", tail slope " << num(gs.log_slope_tail) << "); ";
        if (!ok) res.pass = false;
        if (key == "vg")
            for (std::size_t i = 0; i < js.grid.size(); ++i)
                csv.add_row({js.grid[i], js.ratios[i], gs.ratios[i]});
    }
    if (!opt.out_dir.empty())
        atomic_write_file(opt.out_dir / "c4_vg_ratios.csv", csv.to_string());
    res.detail = detail.str();
    return res;
}

// ---------------------------------------------------------------- criterion 5
CheckResult criterion5(const SuiteOptions&) {
    CheckResult res{"c5_jump_kernel_slopes", true, false, "", 0};
    std::ostringstream detail;
    const auto slope_of = [](const CatalogEntry& entry, double lo, double hi) {
        std::vector<double> lx, ly;
        for (double r : log_grid(lo, hi, 10)) {
            lx.push_back(std::log(r));
            ly.push_back(std::log(jump_kernel(entry, 3, r)));
        }
        return ls_slope(lx, ly);
    };
    const double s_vg = slope_of(catalog("vg"), 1e-3, 1e-2);
    detail << "vg slope=" << num(s_vg);
    if (std::fabs(s_vg + 3.0) > 0.05) res.pass = false;
    for (double a : {0.5, 1.0, 1.5}) {
        char key[32];
        std::snprintf(key, sizeof key, "stable(%g)", a);
        const double s = slope_of(catalog(key), 1e-3, 1e-1);
        detail << " " << key << " slope=" << num(s);
        if (std::fabs(s + 3.0 + a) > 0.02) res.pass = false;
    }
    res.detail = detail.str();
    return res;
}

// ---------------------------------------------------------------- criterion 6
CheckResult criterion6(const SuiteOptions& opt) {
    CheckResult res{"c6_sampler_laplace_identity", true, false, "", 0};
    std::ostringstream detail;
    const std::vector<std::string> keys = {
        "vg",          "geo(1)",    "geo-iter(2,2)",     "stable(0.5)", "stable(1)",
        "stable(1.5)", "drift",     "example3",          "conj-geo-iter(2,1)"};
    for (const std::string& key : keys) {
        mc::SimConfig cfg;
        cfg.exponent_key = key;
        cfg.master_seed = opt.seed;
        cfg.workers = opt.workers;
        cfg.n_paths = scaled(1000000, opt.paths_scale);
        const auto rows =
            mc::laplace_identity_check(cfg, {0.5, 1.0, 2.0}, {0.1, 1.0});
        double worst_z = 0.0;
        bool ok = true;
        for (const auto& row : rows) {
            if (row.std_error == 0.0) {
                ok = ok && std::fabs(row.empirical - row.expected) <= 1e-12;
                continue;
            }
            worst_z = std::max(worst_z, std::fabs(row.z));
        }
        ok = ok && worst_z <= 3.0;
        detail << key << " max|z|=" << num(worst_z) << (ok ? "; " : " FAIL; ");
        if (!ok) res.pass = false;
    }
    res.detail = detail.str();
    return res;
}

// ---------------------------------------------------------------- criterion 7
CheckResult criterion7(const SuiteOptions& opt) {
    CheckResult res{"c7_shell_exit_probabilities", true, false, "", 0};
    std::ostringstream detail;

    const auto run = [&](const std::string& key) {
        mc::SimConfig cfg;
        cfg.exponent_key = key;
        cfg.master_seed = opt.seed + 7;
        cfg.workers = opt.workers;
        cfg.n_paths = scaled(100000, opt.paths_scale);
        std::vector<mc::ShellExitPoint> pts;
        for (double r : {0.01, 0.02, 0.05, 0.1}) {
            cfg.time_step = pick_time_step(key, r / 2.0);
            const auto sweep = mc::shell_exit_sweep(cfg, {r});
            pts.push_back(sweep.points.front());
        }
        return pts;
    };

    const auto vg = run("vg");
    const double sep = (vg.back().p_half - vg.front().p_half) /
                       std::sqrt(vg.back().se_half * vg.back().se_half +
                                 vg.front().se_half * vg.front().se_half);
    double ratio_lo = 1e300, ratio_hi = 0.0;
    for (const auto& p : vg) {
        ratio_lo = std::min(ratio_lo, p.p_half / p.rho);
        ratio_hi = std::max(ratio_hi, p.p_half / p.rho);
    }
    detail << "vg p(0.01)=" << num(vg.front().p_half) << " p(0.1)="
           << num(vg.back().p_half) << " separation_z=" << num(sep)
           << " ratio range [" << num(ratio_lo) << "," << num(ratio_hi) << "]";
    if (!(sep >= 3.0) || !(ratio_hi / ratio_lo <= 100.0)) res.pass = false;

    const auto st = run("stable(1)");
    double st_lo = 1e300, st_hi = 0.0;
    bool st_signal = true;
    for (const auto& p : st) {
        st_lo = std::min(st_lo, p.p_half / p.rho);
        st_hi = std::max(st_hi, p.p_half / p.rho);
        st_signal = st_signal && p.p_half > 3.0 * p.se_half;
    }
    detail << "; stable(1) ratio range [" << num(st_lo) << "," << num(st_hi) << "]";
    if (!(st_signal && st_lo > 0.0 && st_hi / st_lo <= 100.0)) res.pass = false;

    if (!opt.out_dir.empty()) {
        CsvTable csv({"r", "p_half", "se_half", "p_quarter", "se_quarter", "rho"});
        for (const auto& p : vg)
            csv.add_row({p.r, p.p_half, p.se_half, p.p_quarter, p.se_quarter, p.rho});
        atomic_write_file(opt.out_dir / "c7_vg_shell_exit.csv", csv.to_string());
    }
    res.detail = detail.str();
    return res;
}

// ---------------------------------------------------------------- criterion 8
CheckResult criterion8(const SuiteOptions& opt) {
    CheckResult res{"c8_harmonic_modulus", true, false, "", 0};
    std::ostringstream detail;
    for (const std::string& key : {std::string("vg"), std::string("stable(0.5)")}) {
        double m_lo = 1e300, m_hi = 0.0;
        bool mv_ok = true;
        for (double r : {0.05, 0.1, 0.2}) {
            mc::SimConfig cfg;
            cfg.exponent_key = key;
            cfg.master_seed = opt.seed + 11;
            cfg.workers = opt.workers;
            cfg.ball_radius = r;
            cfg.n_paths = scaled(1000000, opt.paths_scale);
            cfg.time_step = pick_time_step(key, 4.0 * r);
            const auto rep = mc::harmonic_modulus_check(cfg);
            m_lo = std::min(m_lo, rep.modulus);
            m_hi = std::max(m_hi, rep.modulus);
            mv_ok = mv_ok && rep.mean_value_pass;
            detail << key << " r=" << num(r) << " M=" << num(rep.modulus)
                   << " mv_diff=" << num(rep.mean_value_diff) << "±"
                   << num(rep.mean_value_se) << "; ";
        }
        const bool ok = std::isfinite(m_hi) && m_hi > 0.0 && m_hi / m_lo <= 2.0 && mv_ok;
        detail << key << " M spread=" << num(m_hi / m_lo) << (ok ? "; " : " FAIL; ");
        if (!ok) res.pass = false;
    }
    res.detail = detail.str();
    return res;
}

// ---------------------------------------------------------------- criterion 9
CheckResult criterion9(const SuiteOptions& opt) {
    CheckResult res{"c9_exit_distribution_consistency", true, false, "", 0};
    mc::SimConfig cfg;
    cfg.exponent_key = "vg";
    cfg.master_seed = opt.seed + 13;
    cfg.workers = opt.workers;
    cfg.ball_radius = 0.25;
    cfg.n_paths = scaled(1000000, opt.paths_scale);
    cfg.time_step = pick_time_step("vg", 0.25);
    const auto rep = mc::exit_consistency_check(cfg);
    std::ostringstream detail;
    detail << "eligible_bins=" << rep.n_eligible
           << " pass_fraction=" << num(rep.pass_fraction)
           << " censored=" << num(rep.censored_fraction);
    res.pass = rep.n_eligible >= 10 && rep.pass_fraction >= 0.9 &&
               rep.censored_fraction < 0.001;
    res.detail = detail.str();
    return res;
}

// --------------------------------------------------------------- criterion 10
CheckResult criterion10(const SuiteOptions& opt) {
    CheckResult res{"c10_determinism_across_workers", true, false, "", 0};
    const auto run = [&](int workers) {
        mc::SimConfig cfg;
        cfg.exponent_key = "vg";
        cfg.master_seed = opt.seed + 17;
        cfg.workers = workers;
        cfg.ball_radius = 0.1;
        cfg.n_paths = 2000;
        cfg.time_step = 1e-3;
        const auto stats = mc::simulate_exit(cfg);
        CsvTable csv({"path_index", "exit_time", "x0", "x1", "x2", "censored",
                      "killed"});
        for (const auto& rec : stats.records)
            csv.add_row({static_cast<double>(rec.path_index), rec.exit_time,
                         rec.exit_position[0], rec.exit_position[1],
                         rec.exit_position[2], static_cast<double>(rec.censored),
                         static_cast<double>(rec.killed)});
        return csv.to_string();
    };
    const std::string a = run(1), b = run(2), c = run(3);
    res.pass = a == b && b == c;
    res.detail = res.pass ? "byte-identical CSVs for 1/2/3 workers"
                          : "CSV outputs differ across worker counts";
    return res;
}

CheckResult timed(CheckResult (*fn)(const SuiteOptions&), const SuiteOptions& opt) {
    const auto start = clock_type::now();
    CheckResult res = fn(opt);
    res.seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    return res;
}

}  // namespace

CheckResult run_criterion(int index, const SuiteOptions& opt) {
    switch (index) {
        case 1: return timed(criterion1, opt);
        case 2: return timed(criterion2, opt);
        case 3: return timed(criterion3, opt);
        case 4: return timed(criterion4, opt);
        case 5: return timed(criterion5, opt);
        case 6: return timed(criterion6, opt);
        case 7: return timed(criterion7, opt);
        case 8: return timed(criterion8, opt);
        case 9: return timed(criterion9, opt);
        case 10: return timed(criterion10, opt);
        default: throw DomainError("criterion index must be 1..10");
    }
}

std::vector<CheckResult> run_analytic_suite(const SuiteOptions& opt) {
    return {run_criterion(1, opt), run_criterion(2, opt)};
}

std::vector<CheckResult> run_asymptotic_suite(const SuiteOptions& opt) {
    return {run_criterion(3, opt), run_criterion(4, opt), run_criterion(5, opt)};
}

std::vector<CheckResult> run_montecarlo_suite(const SuiteOptions& opt) {
    std::vector<CheckResult> out;
    for (int i = 6; i <= 10; ++i) out.push_back(run_criterion(i, opt));
    return out;
}

std::vector<CheckResult> run_full_suite(const SuiteOptions& opt) {
    std::vector<CheckResult> out = run_analytic_suite(opt);
    for (auto& r : run_asymptotic_suite(opt)) out.push_back(std::move(r));
    for (auto& r : run_montecarlo_suite(opt)) out.push_back(std::move(r));
    return out;
}

int report_suite(const std::vector<CheckResult>& results,
                 const std::filesystem::path& out_dir) {
    int failures = 0;
    std::ostringstream table;
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : results) {
        const char* mark = r.inconclusive ? "INCONCLUSIVE" : (r.pass ? "PASS" : "FAIL");
        table << mark << "\t" << r.name << "\t" << num(r.seconds) << "s\t" << r.detail
              << "\n";
        std::printf("[%s] %s (%.1fs): %s\n", mark, r.name.c_str(), r.seconds,
                    r.detail.c_str());
        if (!r.pass && !r.inconclusive) ++failures;
        j.push_back({{"name", r.name},
                     {"pass", r.pass},
                     {"inconclusive", r.inconclusive},
                     {"seconds", r.seconds},
                     {"detail", r.detail}});
    }
    if (!out_dir.empty()) {
        atomic_write_file(out_dir / "verify_summary.txt", table.str());
        atomic_write_file(out_dir / "verify_results.json", j.dump(2) + "\n");
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace sbm::verify
