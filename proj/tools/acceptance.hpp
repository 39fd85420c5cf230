#pragma once

#include <string>
#include <vector>

namespace hbm::acceptance {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

struct SuiteOptions {
    bool reduced = false;  ///< smaller grids / shorter sweeps for quick self-tests
};

/// Run the ten-point verification suite.  Each criterion is independent;
/// failures are reported, never thrown.
std::vector<CriterionResult> run_suite(const SuiteOptions& opt = {});

/// Pretty one-line-per-criterion report; returns true when everything passed.
bool print_report(const std::vector<CriterionResult>& results);

}  // namespace hbm::acceptance
