#pragma once

// Registry of named numerical invariants. Each check reduces to a nonnegative deviation that must
// stay at or below its threshold.

#include <cstdint>
#include <string>
#include <vector>

namespace boson {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      // deviation; passed iff value <= threshold
    double threshold = 0.0;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    bool quick = false;      // smaller samples and grids
    std::uint64_t seed = 2024;
    std::vector<std::string> only;  // run these checks (prefix match); empty runs all
    // Test hook: a check with this exact name gets its deviation pushed past the threshold.
    std::string inject_fault;
};

std::vector<std::string> verify_check_names();

// Checks run in registry order; an exception inside a check is reported as a failure.
std::vector<CheckResult> run_verify(const VerifyOptions& opts);

}  // namespace boson
