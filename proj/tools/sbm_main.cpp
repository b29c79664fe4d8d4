// SPDX-License-Identifier: Apache-2.0
//
// Command-line harness. Subcommands:
//   phi       catalog listing and pointwise evaluation
//   regvar    regular-variation index / de Haan / Potter probes
//   density   mu and u curves (closed | inversion | asymptotic | hybrid)
//   kernel    jump kernel j and Green function g on radial grids
//   sweep     thm41 | thm42 | greendiff ratio sweeps with verdicts
//   lemmaA1   exponential-tail integral sweep
//   mc        subordinator | exit | green | poisson | ks | harmonic
//   verify    acceptance suites (analytic | asymptotic | montecarlo | full)
//   plot      CSV -> SVG line plot
// A JSON config file supplies defaults; explicit flags override it. Every run
// writes a manifest listing the produced files with content hashes.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbm/asymptotics.hpp"
#include "sbm/densities.hpp"
#include "sbm/io.hpp"
#include "sbm/kernels.hpp"
#include "sbm/montecarlo.hpp"
#include "sbm/plot.hpp"
#include "sbm/regvar.hpp"
#include "sbm/verify.hpp"

namespace {

using nlohmann::json;

struct GridSpec {
    double lo = 1e-4, hi = 1e-1;
    int n = 25;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &g.lo, &g.hi, &g.n) != 3)
        throw sbm::DomainError("grid must be LO:HI:N, got '" + text + "'");
    return g;
}

struct Session {
    std::string out_dir = sbm::default_output_dir().string();
    sbm::RunManifest manifest;

    std::filesystem::path dir() const { return out_dir; }

    void emit(const std::string& name, const std::string& content) {
        const auto path = dir() / name;
        sbm::atomic_write_file(path, content);
        manifest.record_output(name, content);
        std::printf("wrote %s\n", path.string().c_str());
    }

    void finish(const json& config) {
        sbm::RunManifest m = manifest;
        m.config_json = config.dump();
        m.stamp_finish();
        sbm::atomic_write_file(dir() / "manifest.json", m.to_json());
    }
};

std::string verdict_json(const sbm::RatioSweep& sweep) {
    json j;
    j["verdict"] = sbm::to_string(sweep.verdict);
    j["comparison"] = sweep.comparison_label;
    j["spread"] = sweep.spread;
    j["log_slope_tail"] = sweep.log_slope_tail;
    j["partial"] = sweep.partial;
    return j.dump(2) + "\n";
}

std::string sweep_csv(const sbm::RatioSweep& sweep) {
    sbm::CsvTable csv({"r", "ratio"});
    for (std::size_t i = 0; i < sweep.grid.size(); ++i)
        csv.add_row({sweep.grid[i], sweep.ratios[i]});
    return csv.to_string();
}

json load_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw sbm::DomainError(std::string("cannot open config ") + argv[i + 1]);
            json j;
            in >> j;
            return j;
        }
    return json::object();
}

template <class T>
void from_config(const json& cfg, const char* key, T& value) {
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subordinate Brownian motion potential-theory toolkit"};
    app.require_subcommand(1);

    json cfg;
    try {
        cfg = load_config(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file with defaults");

    Session session;
    std::string exponent = "vg";
    int dim = 3;
    std::uint64_t seed = 1;
    std::int64_t paths = 100000;
    int workers = 0;
    std::string grid_text = "1e-4:1e-1:25";
    double time_step = 1e-3;
    from_config(cfg, "out_dir", session.out_dir);
    from_config(cfg, "exponent", exponent);
    from_config(cfg, "dim", dim);
    from_config(cfg, "seed", seed);
    from_config(cfg, "paths", paths);
    from_config(cfg, "workers", workers);
    from_config(cfg, "grid", grid_text);
    from_config(cfg, "time_step", time_step);

    const auto add_common = [&](CLI::App* sub, bool with_grid = true) {
        sub->add_option("--out", session.out_dir, "output directory");
        sub->add_option("--exponent", exponent, "catalog key");
        sub->add_option("--dim", dim, "space dimension");
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--paths", paths, "number of Monte Carlo paths");
        sub->add_option("--workers", workers, "worker threads (0 = hardware)");
        if (with_grid) sub->add_option("--grid", grid_text, "log grid LO:HI:N");
    };

    // ---- phi ----
    auto* phi_cmd = app.add_subcommand("phi", "catalog access");
    auto* phi_list = phi_cmd->add_subcommand("list", "list catalog keys");
    auto* phi_eval = phi_cmd->add_subcommand("eval", "evaluate phi and phi'");
    double lambda_value = 1.0;
    phi_eval->add_option("--lambda", lambda_value, "evaluation point")->required();
    add_common(phi_eval, false);

    // ---- regvar ----
    auto* rv_cmd = app.add_subcommand("regvar", "regular-variation probes");
    std::string rv_mode = "index";
    rv_cmd->add_option("mode", rv_mode, "index|dehaan|potter")->required();
    double lambda_max = 1e8, rv_delta = 0.1, rv_lambda_min = 1.0;
    bool rv_use_phi = false;
    rv_cmd->add_option("--lambda-max", lambda_max, "probe scale");
    rv_cmd->add_option("--delta", rv_delta, "Potter delta");
    rv_cmd->add_option("--lambda-min", rv_lambda_min, "Potter lambda_min");
    rv_cmd->add_flag("--phi", rv_use_phi, "probe phi instead of phi'");
    add_common(rv_cmd, false);

    // ---- density ----
    auto* den_cmd = app.add_subcommand("density", "mu and u curves");
    std::string den_kind = "mu", den_method = "hybrid";
    den_cmd->add_option("kind", den_kind, "mu|u")->required();
    den_cmd->add_option("--method", den_method, "closed|inversion|asymptotic|hybrid");
    add_common(den_cmd);

    // ---- kernel ----
    auto* ker_cmd = app.add_subcommand("kernel", "jump kernel / Green function");
    std::string ker_kind = "j";
    ker_cmd->add_option("kind", ker_kind, "j|g")->required();
    add_common(ker_cmd);

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "ratio sweeps with verdicts");
    std::string sweep_kind;
    sweep_cmd->add_option("kind", sweep_kind, "thm41|thm42|greendiff")->required();
    std::string green_form = "auto";
    sweep_cmd->add_option("--form", green_form, "auto|derivative|reciprocal");
    add_common(sweep_cmd);

    // ---- lemmaA1 ----
    auto* lem_cmd = app.add_subcommand("lemmaA1", "exponential-tail integral sweep");
    double lem_p = 2.0, lem_a = 1.0, lem_b = 0.5;
    lem_cmd->add_option("--p", lem_p, "power p > 1");
    lem_cmd->add_option("--a", lem_a, "scale a > 0");
    lem_cmd->add_option("--b", lem_b, "weight exponent b >= 0");
    add_common(lem_cmd);

    // ---- mc ----
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimators");
    std::string mc_mode;
    mc_cmd->add_option("mode", mc_mode, "subordinator|exit|green|poisson|ks|harmonic")
        ->required();
    double ball_radius = 0.1, z_max = 0.0;
    std::string r_list_text = "0.01,0.02,0.05,0.1";
    mc_cmd->add_option("--radius", ball_radius, "ball radius (or theorem r)");
    mc_cmd->add_option("--z-max", z_max, "outer radius of exterior bins");
    mc_cmd->add_option("--r-list", r_list_text, "comma-separated radii for ks");
    mc_cmd->add_option("--time-step", time_step, "skeleton time step");
    add_common(mc_cmd, false);

    // ---- verify ----
    auto* ver_cmd = app.add_subcommand("verify", "acceptance suites");
    std::string suite = "full";
    double paths_scale = 1.0;
    ver_cmd->add_option("--suite", suite, "analytic|asymptotic|montecarlo|full");
    ver_cmd->add_option("--paths-scale", paths_scale, "scale Monte Carlo path counts");
    add_common(ver_cmd, false);

    // ---- plot ----
    auto* plot_cmd = app.add_subcommand("plot", "CSV to SVG");
    std::string plot_csv, plot_x = "r", plot_y = "ratio", plot_out = "plot.svg";
    bool log_x = false, log_y = false;
    plot_cmd->add_option("--csv", plot_csv, "input CSV path")->required();
    plot_cmd->add_option("--x", plot_x, "x column");
    plot_cmd->add_option("--y", plot_y, "comma-separated y columns");
    plot_cmd->add_option("--svg", plot_out, "output file name");
    plot_cmd->add_flag("--log-x", log_x, "logarithmic x axis");
    plot_cmd->add_flag("--log-y", log_y, "logarithmic y axis");
    plot_cmd->add_option("--out", session.out_dir, "output directory");

    // Shared flags may appear after the subcommand name.
    const std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
        for (CLI::App* sub : a->get_subcommands([](CLI::App*) { return true; })) {
            sub->fallthrough();
            enable_fallthrough(sub);
        }
    };
    enable_fallthrough(&app);

    CLI11_PARSE(app, argc, argv);

    std::ostringstream cmdline;
    for (int i = 0; i < argc; ++i) cmdline << (i ? " " : "") << argv[i];
    session.manifest.command_line = cmdline.str();
    session.manifest.master_seed = seed;
    session.manifest.tool_version = sbm::kToolVersion;
    session.manifest.stamp_start();

    json effective{{"exponent", exponent}, {"dim", dim},     {"seed", seed},
                   {"paths", paths},       {"grid", grid_text}, {"out_dir", session.out_dir},
                   {"workers", workers},   {"time_step", time_step}};

    try {
        if (phi_list->parsed()) {
            for (const auto& key : sbm::catalog_keys()) {
                const auto entry = sbm::catalog(key);
                std::printf("%-22s alpha=%-4g drift=%g kill=%g cbf=%d\n", key.c_str(),
                            entry.expected_alpha, entry.exponent.drift,
                            entry.exponent.kill_rate,
                            entry.exponent.is_complete_bernstein ? 1 : 0);
            }
            return 0;
        }
        if (phi_eval->parsed()) {
            const auto entry = sbm::catalog(exponent);
            std::printf("phi(%.17g) = %.17g\nphi'(%.17g) = %.17g\n", lambda_value,
                        entry.exponent.eval(lambda_value), lambda_value,
                        entry.exponent.prime(lambda_value));
            return 0;
        }

        if (rv_cmd->parsed()) {
            const auto entry = sbm::catalog(exponent);
            const auto f = rv_use_phi
                               ? std::function<double(double)>(
                                     [entry](double l) { return entry.exponent.eval(l); })
                               : std::function<double(double)>([entry](double l) {
                                     return entry.exponent.prime(l);
                                 });
            json out;
            sbm::CsvTable csv({"x", "log_ratio"});
            if (rv_mode == "index") {
                const auto fit = sbm::estimate_rv_index(f, lambda_max);
                for (std::size_t i = 0; i < fit.x_points.size(); ++i)
                    csv.add_row({fit.x_points[i], fit.log_ratios[i]});
                out = {{"index", fit.index},
                       {"residual", fit.residual},
                       {"alpha_if_phi_prime", fit.alpha_from_phi_prime()}};
            } else if (rv_mode == "dehaan") {
                const auto ell = [entry](double l) { return l * entry.exponent.prime(l); };
                const auto rep = sbm::check_de_haan(ell, lambda_max);
                csv = sbm::CsvTable({"lambda", "L_over_ell"});
                for (std::size_t i = 0; i < rep.lambda_probes.size(); ++i)
                    csv.add_row({rep.lambda_probes[i], rep.L_over_ell[i]});
                out = {{"max_deviation", rep.max_deviation},
                       {"ratio_increasing", rep.ratio_increasing}};
            } else if (rv_mode == "potter") {
                const auto fit = sbm::fit_potter_bound(f, rv_delta, rv_lambda_min);
                out = {{"constant", fit.constant},
                       {"exponent", fit.exponent},
                       {"index", fit.index},
                       {"bounded", fit.bounded}};
            } else {
                throw sbm::DomainError("regvar mode must be index|dehaan|potter");
            }
            session.emit("regvar_" + rv_mode + ".csv", csv.to_string());
            session.emit("regvar_" + rv_mode + ".json", out.dump(2) + "\n");
            session.finish(effective);
            return 0;
        }

        if (den_cmd->parsed()) {
            const auto entry = sbm::catalog(exponent);
            const GridSpec g = parse_grid(grid_text);
            const auto grid = sbm::log_grid(g.lo, g.hi, g.n);
            sbm::DensityMethod method;
            if (den_method == "closed") method = sbm::DensityMethod::closed_form;
            else if (den_method == "inversion") method = sbm::DensityMethod::inversion;
            else if (den_method == "asymptotic") method = sbm::DensityMethod::asymptotic;
            else if (den_method == "hybrid") method = sbm::DensityMethod::hybrid;
            else throw sbm::DomainError("method must be closed|inversion|asymptotic|hybrid");
            const auto kind = den_kind == "mu" ? sbm::DensityKind::levy_mu
                                               : sbm::DensityKind::potential_u;
            const auto curve = sbm::density_curve(entry, kind, method, grid);
            sbm::CsvTable csv({"t", "value"});
            for (std::size_t i = 0; i < curve.t.size(); ++i)
                csv.add_row({curve.t[i], curve.value[i]});
            session.emit("density_" + den_kind + ".csv", csv.to_string());
            session.finish(effective);
            return 0;
        }

        if (ker_cmd->parsed()) {
            const auto entry = sbm::catalog(exponent);
            const GridSpec g = parse_grid(grid_text);
            const auto kind = ker_kind == "j" ? sbm::KernelKind::jump_j
                                              : sbm::KernelKind::green_g;
            const auto curve =
                sbm::kernel_curve(entry, kind, dim, sbm::log_grid(g.lo, g.hi, g.n));
            sbm::CsvTable csv({"r", "value", "tail_bound"});
            for (std::size_t i = 0; i < curve.r.size(); ++i)
                csv.add_row({curve.r[i], curve.value[i], curve.tail_bound[i]});
            session.emit("kernel_" + ker_kind + ".csv", csv.to_string());
            session.finish(effective);
            return 0;
        }

        if (sweep_cmd->parsed()) {
            const auto entry = sbm::catalog(exponent);
            const GridSpec g = parse_grid(grid_text);
            const auto grid = sbm::log_grid(g.lo, g.hi, g.n);
            if (sweep_kind == "thm41") {
                const auto sweep = sbm::jump_ratio_sweep(entry, dim, grid);
                session.emit("sweep_thm41.csv", sweep_csv(sweep));
                session.emit("sweep_thm41.json", verdict_json(sweep));
            } else if (sweep_kind == "thm42") {
                sbm::GreenComparison form = sbm::GreenComparison::automatic;
                if (green_form == "derivative") form = sbm::GreenComparison::derivative_form;
                if (green_form == "reciprocal") form = sbm::GreenComparison::reciprocal_form;
                const auto sweep = sbm::green_ratio_sweep(entry, dim, grid, form);
                session.emit("sweep_thm42.csv", sweep_csv(sweep));
                session.emit("sweep_thm42.json", verdict_json(sweep));
            } else if (sweep_kind == "greendiff") {
                const auto rep = sbm::green_difference_check(
                    entry, dim, {0.02, 0.05, 0.1, 0.2}, 100, seed);
                sbm::CsvTable csv({"r", "empirical_constant"});
                for (std::size_t i = 0; i < rep.r_values.size(); ++i)
                    csv.add_row({rep.r_values[i], rep.empirical_constants[i]});
                json out{{"max_constant", rep.max_constant},
                         {"spread", rep.spread},
                         {"stable", rep.stable}};
                session.emit("sweep_greendiff.csv", csv.to_string());
                session.emit("sweep_greendiff.json", out.dump(2) + "\n");
            } else {
                throw sbm::DomainError("sweep kind must be thm41|thm42|greendiff");
            }
            session.finish(effective);
            return 0;
        }

        if (lem_cmd->parsed()) {
            const GridSpec g = parse_grid(grid_text);
            const auto w = [lem_b](double t) { return std::pow(t, -lem_b); };
            const auto sweep = sbm::power_exp_integral_sweep(
                w, lem_p, lem_a, lem_b, sbm::log_grid(g.lo, g.hi, g.n));
            session.emit("lemmaA1.csv", sweep_csv(sweep));
            session.emit("lemmaA1.json", verdict_json(sweep));
            session.finish(effective);
            return 0;
        }

        if (mc_cmd->parsed()) {
            sbm::mc::SimConfig mc_cfg;
            mc_cfg.exponent_key = exponent;
            mc_cfg.dim = dim;
            mc_cfg.master_seed = seed;
            mc_cfg.n_paths = paths;
            mc_cfg.workers = workers;
            mc_cfg.ball_radius = ball_radius;
            mc_cfg.time_step = time_step;

            if (mc_mode == "subordinator") {
                const auto rows =
                    sbm::mc::laplace_identity_check(mc_cfg, {0.5, 1.0, 2.0}, {0.1, 1.0});
                sbm::CsvTable csv({"lambda", "t", "empirical", "std_error", "expected", "z"});
                double worst = 0.0;
                for (const auto& r : rows) {
                    csv.add_row({r.lambda, r.t, r.empirical, r.std_error, r.expected, r.z});
                    worst = std::max(worst, std::fabs(r.z));
                }
                session.emit("mc_subordinator.csv", csv.to_string());
                session.emit("mc_subordinator.json",
                             json{{"max_abs_z", worst}, {"pass", worst <= 3.0}}.dump(2) + "\n");
            } else if (mc_mode == "exit") {
                const auto stats = sbm::mc::simulate_exit(mc_cfg);
                sbm::CsvTable csv({"path_index", "exit_time", "x0", "x1", "x2",
                                   "censored", "killed"});
                for (const auto& rec : stats.records)
                    csv.add_row({static_cast<double>(rec.path_index), rec.exit_time,
                                 rec.exit_position[0], rec.exit_position[1],
                                 rec.exit_position[2], static_cast<double>(rec.censored),
                                 static_cast<double>(rec.killed)});
                session.emit("mc_exit.csv", csv.to_string());
                session.emit("mc_exit.json",
                             json{{"mean_exit_time", stats.mean_exit_time},
                                  {"censored_fraction", stats.censored_fraction},
                                  {"killed_fraction", stats.killed_fraction}}
                                     .dump(2) +
                                 "\n");
            } else if (mc_mode == "green") {
                const auto est = sbm::mc::estimate_green_ball(mc_cfg);
                sbm::CsvTable csv({"r_lo", "r_hi", "value", "std_error"});
                for (std::size_t i = 0; i < est.value.size(); ++i)
                    csv.add_row({est.edges[i], est.edges[i + 1], est.value[i],
                                 est.std_error[i]});
                session.emit("mc_green.csv", csv.to_string());
                session.emit("mc_green.json",
                             json{{"mean_exit_time", est.mean_exit_time},
                                  {"se_exit_time", est.se_exit_time},
                                  {"censored_fraction", est.censored_fraction}}
                                     .dump(2) +
                                 "\n");
            } else if (mc_mode == "poisson") {
                const double zm = z_max > 0.0 ? z_max : 3.0 * ball_radius;
                const auto est = sbm::mc::estimate_poisson_kernel(mc_cfg, zm);
                sbm::CsvTable csv({"z_lo", "z_hi", "value", "std_error"});
                for (std::size_t i = 0; i < est.value.size(); ++i)
                    csv.add_row({est.edges[i], est.edges[i + 1], est.value[i],
                                 est.std_error[i]});
                session.emit("mc_poisson.csv", csv.to_string());
                session.emit("mc_poisson.json",
                             json{{"total_mass", est.total_mass},
                                  {"overflow_fraction", est.overflow_fraction}}
                                     .dump(2) +
                                 "\n");
            } else if (mc_mode == "ks") {
                std::vector<double> r_list;
                std::istringstream rl(r_list_text);
                std::string cell;
                while (std::getline(rl, cell, ',')) r_list.push_back(std::stod(cell));
                const auto sweep = sbm::mc::shell_exit_sweep(mc_cfg, r_list);
                sbm::CsvTable csv({"r", "p_half", "se_half", "p_quarter", "se_quarter",
                                   "rho", "censored_fraction"});
                for (const auto& p : sweep.points)
                    csv.add_row({p.r, p.p_half, p.se_half, p.p_quarter, p.se_quarter,
                                 p.rho, p.censored_fraction});
                session.emit("mc_ks.csv", csv.to_string());
            } else if (mc_mode == "harmonic") {
                const auto rep = sbm::mc::harmonic_modulus_check(mc_cfg);
                sbm::CsvTable csv({"x0", "x1", "f_hat", "std_error"});
                for (std::size_t i = 0; i < rep.grid.size(); ++i)
                    csv.add_row({rep.grid[i][0], rep.grid[i][1], rep.f_hat[i], rep.se[i]});
                session.emit("mc_harmonic.csv", csv.to_string());
                session.emit("mc_harmonic.json",
                             json{{"modulus", rep.modulus},
                                  {"mean_value_diff", rep.mean_value_diff},
                                  {"mean_value_se", rep.mean_value_se},
                                  {"mean_value_pass", rep.mean_value_pass}}
                                     .dump(2) +
                                 "\n");
            } else {
                throw sbm::DomainError(
                    "mc mode must be subordinator|exit|green|poisson|ks|harmonic");
            }
            session.finish(effective);
            return 0;
        }

        if (ver_cmd->parsed()) {
            sbm::verify::SuiteOptions opt;
            opt.out_dir = session.out_dir;
            opt.seed = seed;
            opt.workers = workers;
            opt.paths_scale = paths_scale;
            std::filesystem::create_directories(opt.out_dir);
            std::vector<sbm::verify::CheckResult> results;
            if (suite == "analytic") results = sbm::verify::run_analytic_suite(opt);
            else if (suite == "asymptotic") results = sbm::verify::run_asymptotic_suite(opt);
            else if (suite == "montecarlo") results = sbm::verify::run_montecarlo_suite(opt);
            else if (suite == "full") results = sbm::verify::run_full_suite(opt);
            else throw sbm::DomainError("suite must be analytic|asymptotic|montecarlo|full");
            return sbm::verify::report_suite(results, opt.out_dir);
        }

        if (plot_cmd->parsed()) {
            const auto csv = sbm::read_csv_file(plot_csv);
            sbm::PlotSpec spec;
            spec.x_column = plot_x;
            std::istringstream ys(plot_y);
            std::string cell;
            while (std::getline(ys, cell, ',')) spec.y_columns.push_back(cell);
            spec.log_x = log_x;
            spec.log_y = log_y;
            session.emit(plot_out, sbm::render_svg_plot(csv, spec));
            session.finish(effective);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
