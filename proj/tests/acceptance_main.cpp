// SPDX-License-Identifier: Apache-2.0
//
// Acceptance harness: `acceptance c4` runs criterion 4, `acceptance all`
// runs everything. Prints one PASS/FAIL line per criterion; exit status is
// the number of failures.
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "sbm/verify.hpp"

int main(int argc, char** argv) {
    sbm::verify::SuiteOptions opt;
    opt.out_dir = "acceptance_out";
    if (const char* scale = std::getenv("SBM_PATHS_SCALE"))
        opt.paths_scale = std::atof(scale);

    std::vector<int> indices;
    if (argc < 2 || std::strcmp(argv[1], "all") == 0) {
        for (int i = 1; i <= 10; ++i) indices.push_back(i);
    } else {
        for (int i = 1; i < argc; ++i) {
            const char* a = argv[i];
            if (a[0] == 'c') ++a;
            indices.push_back(std::atoi(a));
        }
    }

    std::vector<sbm::verify::CheckResult> results;
    for (int i : indices) results.push_back(sbm::verify::run_criterion(i, opt));
    return sbm::verify::report_suite(results, opt.out_dir);
}
