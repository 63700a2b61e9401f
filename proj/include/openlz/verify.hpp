#pragma once

// Built-in verification suites: every invariant and property contract of the
// library, each evaluated as "measured defect <= tolerance" with a seeded
// deterministic sampler, grouped by module.

#include <string>
#include <vector>

namespace openlz {

struct CheckResult {
    std::string name;     // "suite/check-id"
    bool passed = false;
    double measured = 0.0;   // observed defect / quantity
    double tolerance = 0.0;  // acceptance threshold for `measured`
    std::string detail;      // what was sampled / compared
};

// Known suites: "algebra", "model", "lindblad", "adiabatic", "propagate",
// "transition", and "all" (concatenation in that order).
// Unknown names throw std::invalid_argument.
std::vector<CheckResult> run_suite(const std::string& suite);

const std::vector<std::string>& suite_names();

}  // namespace openlz
