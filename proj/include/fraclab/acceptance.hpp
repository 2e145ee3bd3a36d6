#pragma once

#include <string>
#include <vector>

namespace fraclab {

/// One verdict per criterion of the shipped acceptance suite.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // worst observed numbers vs their thresholds
    double seconds = 0.0;
};

struct AcceptanceOptions {
    /// 1 = strict tier; 10 = relaxed tier for extreme orders.  Scales the
    /// numeric tolerances, never the structural factor-of-two/four checks.
    double tolerance_scale = 1.0;
    unsigned long long seed = 2026;
};

inline constexpr int kCriteria = 10;

/// Runs one criterion (1-based id).
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});

/// Runs the full suite in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

}  // namespace fraclab
