#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace carlock {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // one-line summary of what was measured
    double seconds = 0.0;
};

struct VerificationReport {
    int max_modes = 0;
    std::uint64_t seed = 0;
    std::vector<CriterionResult> criteria;
    bool all_pass = false;
    double total_seconds = 0.0;
};

// Runs the full property suite: the worked signalling example, the
// anticommutation relations, disjoint-support grading, no-signalling under
// even operations, witness soundness, symbolic/numeric agreement and the
// parity machinery.  Deterministic for a fixed (max_modes, seed).
VerificationReport run_verification(int max_modes, std::uint64_t seed);

} // namespace carlock
