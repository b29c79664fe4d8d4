// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suites. Each criterion is a self-contained check returning a
// pass/fail verdict with measured numbers; suites run them in dependency
// order (analytic -> asymptotic -> Monte Carlo) and write JSON/CSV evidence.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sbm::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    bool inconclusive = false;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteOptions {
    std::filesystem::path out_dir;  // empty = no evidence files
    std::uint64_t seed = 20240817;
    int workers = 0;
    double paths_scale = 1.0;  // development knob; acceptance runs at 1.0
};

/// Individual acceptance criteria, 1-based.
CheckResult run_criterion(int index, const SuiteOptions& opt);

std::vector<CheckResult> run_analytic_suite(const SuiteOptions& opt);     // 1-2
std::vector<CheckResult> run_asymptotic_suite(const SuiteOptions& opt);   // 3-5
std::vector<CheckResult> run_montecarlo_suite(const SuiteOptions& opt);   // 6-10
std::vector<CheckResult> run_full_suite(const SuiteOptions& opt);

/// Writes per-check JSON verdicts and a summary table; returns process exit
/// status (0 iff all non-inconclusive checks pass).
int report_suite(const std::vector<CheckResult>& results,
                 const std::filesystem::path& out_dir);

}  // namespace sbm::verify
