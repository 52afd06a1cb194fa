#pragma once

// The acceptance suite: seven end-to-end criteria, each reported as one
// pass/fail line with its wall time and budget.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hamcap/hamiltonians.hpp"

namespace hamcap {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::size_t checks = 0;
    std::size_t failures = 0;
    double seconds = 0.0;
    double budgetSeconds = 0.0; // 0: no time budget
    std::string detail;         // first failure, or a short summary
};

struct AcceptanceOptions {
    int seedCount = 1000;            // seeds per numeric sweep
    int threads = 0;                 // sweep workers, 0: hardware concurrency
    std::uint64_t rngSeed = 20240611;
    std::vector<int> only;           // criterion ids to run; empty runs all
    std::function<void(const CriterionResult &)> onResult; // called as each criterion finishes
};

/// Hamiltonian used by the numeric-analytic matrix: c = max(u ell, 0) + 1,
/// a bump for ell = 0, an outer plateau for s > 0, an inner plateau for s < 0.
ProductHamiltonian matrixHamiltonian(const PhaseSpaceConfig &geometry, double s, int ell);

std::vector<CriterionResult> runAcceptance(const AcceptanceOptions &options = {});

/// "[PASS] 1 capacity formula ... (12.3 s / 60 s) detail"
std::string formatCriterion(const CriterionResult &result);

} // namespace hamcap
