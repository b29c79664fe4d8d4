// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the installed command-line tool: exit codes, file
// outputs, manifests and the determinism contract.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(SBM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("phi subcommands") {
    CHECK(run("phi list") == 0);
    CHECK(run("phi eval --exponent 'stable(1)' --lambda 4") == 0);
    CHECK(run("phi eval --exponent nope --lambda 1") != 0);
}

TEST_CASE("density curve to CSV with manifest") {
    const auto dir = fresh_dir("sbm_cli_density");
    CHECK(run("density mu --exponent vg --method closed --grid 0.5:2:3 --out " +
              dir.string()) == 0);
    const auto csv = slurp(dir / "density_mu.csv");
    CHECK(csv.find("t,value") == 0);
    CHECK(csv.find("0.5") != std::string::npos);
    CHECK(fs::exists(dir / "manifest.json"));
    const auto manifest = slurp(dir / "manifest.json");
    CHECK(manifest.find("density_mu.csv") != std::string::npos);
}

TEST_CASE("sweep verdict json") {
    const auto dir = fresh_dir("sbm_cli_sweep");
    CHECK(run("sweep thm41 --exponent 'stable(1)' --grid 1e-3:1e-1:6 --out " +
              dir.string()) == 0);
    const auto verdict = slurp(dir / "sweep_thm41.json");
    CHECK(verdict.find("\"verdict\"") != std::string::npos);
    CHECK(verdict.find("failed") == std::string::npos);
}

TEST_CASE("lemmaA1 sweep emits csv") {
    const auto dir = fresh_dir("sbm_cli_lem");
    CHECK(run("lemmaA1 --p 2 --a 1 --b 0.5 --grid 1e-5:1e-1:6 --out " + dir.string()) ==
          0);
    CHECK(slurp(dir / "lemmaA1.csv").find("r,ratio") == 0);
}

TEST_CASE("mc exit: identical bytes for different worker counts") {
    const auto d1 = fresh_dir("sbm_cli_mc1");
    const auto d2 = fresh_dir("sbm_cli_mc2");
    const std::string common =
        "mc exit --exponent vg --paths 300 --seed 5 --radius 0.1 ";
    CHECK(run(common + "--workers 1 --out " + d1.string()) == 0);
    CHECK(run(common + "--workers 3 --out " + d2.string()) == 0);
    CHECK(slurp(d1 / "mc_exit.csv") == slurp(d2 / "mc_exit.csv"));
}

TEST_CASE("plot from produced csv; missing column is a named error") {
    const auto dir = fresh_dir("sbm_cli_plot");
    REQUIRE(run("lemmaA1 --p 2 --a 1 --b 0 --grid 1e-4:1e-1:5 --out " + dir.string()) ==
            0);
    CHECK(run("plot --csv " + (dir / "lemmaA1.csv").string() +
              " --x r --y ratio --log-x --out " + dir.string()) == 0);
    CHECK(slurp(dir / "plot.svg").find("<svg") == 0);
    CHECK(run("plot --csv " + (dir / "lemmaA1.csv").string() +
              " --x r --y missing_column --out " + dir.string()) != 0);
}

TEST_CASE("config file provides defaults, flags override") {
    const auto dir = fresh_dir("sbm_cli_cfg");
    const fs::path cfg = dir / "cfg.json";
    {
        std::ofstream out(cfg);
        out << "{\"exponent\":\"stable(1)\",\"grid\":\"1e-3:1e-1:4\",\"out_dir\":\""
            << dir.string() << "\"}";
    }
    CHECK(run("density u --method asymptotic --config " + cfg.string()) == 0);
    CHECK(fs::exists(dir / "density_u.csv"));
}

TEST_CASE("unwritable output directory fails with nonzero status") {
    CHECK(run("lemmaA1 --p 2 --a 1 --b 0 --grid 1e-3:1e-1:4 --out "
              "/proc/no_such_dir/x") != 0);
}

TEST_CASE("quick verify suite at reduced scale") {
    const auto dir = fresh_dir("sbm_cli_verify");
    CHECK(run("verify --suite analytic --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "verify_results.json"));
    CHECK(slurp(dir / "verify_summary.txt").find("PASS") != std::string::npos);
}
