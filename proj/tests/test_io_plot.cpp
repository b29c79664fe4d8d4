// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sbm/io.hpp"
#include "sbm/plot.hpp"

using namespace sbm;
namespace fs = std::filesystem;

TEST_CASE("csv round trip is bit exact") {
    CsvTable t({"t", "value"});
    const double v = 0.12345678901234567;
    t.add_row({1e-300, v});
    t.add_row({3.0, -1.0 / 3.0});
    const auto parsed = parse_csv(t.to_string());
    REQUIRE(parsed.rows.size() == 2);
    CHECK(parsed.rows[0][0] == 1e-300);
    CHECK(parsed.rows[0][1] == v);
    CHECK(parsed.rows[1][1] == -1.0 / 3.0);
    CHECK(parsed.column("value") == 1);
    CHECK(parsed.column("nope") == -1);
    CHECK_THROWS_AS(t.add_row({1.0}), DomainError);
    CHECK_THROWS_AS(parse_csv(""), DomainError);
}

TEST_CASE("atomic write and manifest verification") {
    const fs::path dir = fs::temp_directory_path() / "sbm_io_test";
    fs::remove_all(dir);
    const fs::path file = dir / "a.csv";
    atomic_write_file(file, "x\n1\n");
    CHECK(fs::exists(file));
    CHECK_FALSE(fs::exists(dir / "a.csv.tmp"));

    RunManifest m;
    m.command_line = "test";
    m.record_output("a.csv", "x\n1\n");
    CHECK(m.verify_outputs(dir));
    atomic_write_file(file, "x\n2\n");  // content changed: hash mismatch
    CHECK_FALSE(m.verify_outputs(dir));
    fs::remove_all(dir);
}

TEST_CASE("fnv1a test vectors") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("manifest json carries outputs and seed") {
    RunManifest m;
    m.command_line = "sbm kernel j";
    m.master_seed = 7;
    m.config_json = "{\"dim\":3}";
    m.record_output("kernel_j.csv", "r,value\n1,2\n");
    const std::string j = m.to_json();
    CHECK(j.find("kernel_j.csv") != std::string::npos);
    CHECK(j.find("hash_fnv1a64") != std::string::npos);
    CHECK(j.find("\"master_seed\": 7") != std::string::npos);
}

TEST_CASE("svg plot: determinism, legend, log axes, errors") {
    CsvTable t({"r", "ratio", "other"});
    for (double r : {1e-3, 1e-2, 1e-1}) t.add_row({r, 2.0 * r, 1.0});
    const auto csv = parse_csv(t.to_string());

    PlotSpec spec;
    spec.x_column = "r";
    spec.y_columns = {"ratio", "other"};
    spec.log_x = true;
    const std::string svg1 = render_svg_plot(csv, spec);
    const std::string svg2 = render_svg_plot(csv, spec);
    CHECK(svg1 == svg2);  // pure function of the inputs
    CHECK(fnv1a_hex(svg1) == "2a7e847568b51e08");  // golden
    CHECK(svg1.find("<polyline") != std::string::npos);
    CHECK(svg1.find(">ratio<") != std::string::npos);
    CHECK(svg1.find(">other<") != std::string::npos);

    PlotSpec missing;
    missing.x_column = "r";
    missing.y_columns = {"absent"};
    try {
        render_svg_plot(csv, missing);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("absent") != std::string::npos);
    }

    const ParsedCsv empty = parse_csv("a,b\n");
    PlotSpec s2;
    s2.x_column = "a";
    s2.y_columns = {"b"};
    CHECK_THROWS_AS(render_svg_plot(empty, s2), DomainError);
}

TEST_CASE("log grid and slope helpers") {
    const auto g = log_grid(1e-3, 1e3, 7);
    CHECK(g.front() == 1e-3);
    CHECK(g.back() == 1e3);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK(ls_slope({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0}) == doctest::Approx(2.0));
}
