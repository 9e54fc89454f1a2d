/*
 * Acceptance suite: the twelve release criteria, run as a batch with a
 * dimension budget.  Items whose dense oracle exceeds the budget are marked
 * skipped, never silently passed.  The tolerance_scale hook exists so the
 * failure path itself can be exercised; production runs leave it at 1.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace walshbaker::acceptance {

struct AcceptanceOptions {
    std::size_t max_dim = std::size_t{1} << 20;
    std::uint64_t seed = 0;
    double tolerance_scale = 1.0;
    std::vector<int> only;  // criterion ids to run; empty means all
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool skipped = false;  // budget cut some sub-items; pass reflects the rest
    std::string detail;    // measured values and the tolerances they met
};

struct AcceptanceReport {
    std::vector<CriterionResult> rows;
    bool all_pass() const;  // no failing row; skipped rows do not fail
};

// Prints one line per criterion to log as it completes.
AcceptanceReport run_acceptance_suite(const AcceptanceOptions& opts,
                                      std::ostream& log);

}  // namespace walshbaker::acceptance
