#pragma once

#include "ehnet/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ehnet {

struct VerifyOptions {
    Capacities caps{10, 10};
    EHProbabilities probs = presets::independent();
    double delta_prime = 1.0;
    std::uint64_t horizon = 100'000;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    double max_abs_re_percent = 5.0;
};

struct CheckResult {
    std::string name;
    bool passed = true;
    bool informational = false; // reported, never fails the suite
    std::string detail;
};

/// Runs the invariant suite over the threshold grid [1, cap1] x [1, cap2]:
/// chain structure, steady-state balance (and uniformity when p01, p10 > 0),
/// dispatched model versus per-state accounting, simulation %RE along
/// gamma2 = cap2, and closed-form thresholds versus exhaustive search.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

} // namespace ehnet
