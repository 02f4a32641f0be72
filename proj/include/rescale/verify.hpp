#pragma once

// Closed form vs oracle over seeded random datasets.

#include "rescale/oracle.hpp"

#include <limits>
#include <string>
#include <vector>

namespace rescale {

/// A seeded dataset with a fixed mean to use for the FixedMean* families.
struct SyntheticCase {
    PointSet points;
    Vector fixed_mean;
};

/// Random Gaussian data: mean entries ~ 2·Nor(0,1), covariance AAᵀ/N + ¼I with
/// A standard normal, fixed mean = mean + 1.5·Nor(0, I).
SyntheticCase synthetic_case(Eigen::Index dim, Eigen::Index n, std::uint64_t seed);

struct VerifyOptions {
    Eigen::Index min_dim = 1;
    Eigen::Index max_dim = 4;
    int trials = 50;
    std::uint64_t seed = 1;
    Eigen::Index min_points = 20;
    Eigen::Index max_points = 200;
    OracleConfig oracle{};
    double match_tolerance = 1e-4;    // |closed form − oracle|
    double lower_bound_slack = 1e-6;  // oracle may not beat the closed form by more
    double nesting_tolerance = 1e-9;
};

/// Trial `i` of a run: dimension cycles through [min_dim, max_dim], the point
/// count is drawn from [min_points, max_points].
SyntheticCase verification_case(const VerifyOptions& opts, int trial);

struct FamilyVerification {
    FamilyKind family;
    int trials = 0;
    int failures = 0;
    double max_abs_diff = 0.0;
    double max_oracle_advantage = -std::numeric_limits<double>::infinity();  // max(closed − oracle)
};

struct VerifyReport {
    std::vector<FamilyVerification> families;
    int nesting_checks = 0;
    int nesting_violations = 0;
    std::vector<std::string> errors;  // one per failed trial/family, in trial order

    [[nodiscard]] bool passed() const;
};

/// Runs every trial (in parallel, aggregated in trial order).
VerifyReport run_verification(const VerifyOptions& opts);

/// Violations of M(G) ≤ M(G_m) ≤ M(G_{m,diag}) ≤ M(G_{m,sI}) and
/// M(G) ≤ M(G_diag) ≤ M(G_sI) for one dataset and fixed mean.
int nesting_violations(const Moments& mom, const Vector& fixed_mean, double tolerance);

}  // namespace rescale
