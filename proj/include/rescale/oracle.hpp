#pragma once

// Numerical cross-check of the closed forms: direct minimization of the
// pointwise cross-entropy over each family, without using any of them.

#include "rescale/families.hpp"

#include <cstdint>

namespace rescale {

struct OracleConfig {
    int max_iterations = 5000;
    double rel_tolerance = 1e-10;
    int restarts = 3;
    std::uint64_t seed = 0;
};

struct OracleFit {
    FitResult fit;
    int best_restart = 0;
    int converged_restarts = 0;
    long iterations = 0;   // summed over all restarts
    long evaluations = 0;  // summed over all restarts
};

/// (1/n)·Σᵢ −ln Nor(yᵢ; m, Σ), evaluated sample by sample.
double empirical_cross_entropy(const PointSet& y, const GaussianModel& g);

/// Unconstrained coordinates for a family; every parameter vector maps to a
/// member of the family.
///   free mean      → the first N entries are the mean
///   Full/FixedMean → Σ = LLᵀ, L lower triangular stored row by row with
///                    L_ii = exp(u_ii)
///   isotropic      → s = exp(u)
///   diagonal       → s_i = exp(u_i)
class FamilyParameterization {
public:
    FamilyParameterization(FamilySpec family, Eigen::Index dim);

    [[nodiscard]] Eigen::Index size() const noexcept { return size_; }
    [[nodiscard]] const FamilySpec& family() const noexcept { return family_; }

    [[nodiscard]] Vector mean(const Vector& params) const;
    /// Lower-triangular Cholesky factor of the covariance.
    [[nodiscard]] Matrix factor(const Vector& params) const;
    [[nodiscard]] GaussianModel model(const Vector& params) const;

    /// Inverse of `model`; the model must belong to the family.
    [[nodiscard]] Vector params(const GaussianModel& g) const;

    /// The whitened identity: mean 0 (when free) and covariance I.
    [[nodiscard]] Vector identity() const;

private:
    FamilySpec family_;
    Eigen::Index dim_;
    Eigen::Index mean_size_;
    Eigen::Index size_;
};

/// Minimizes the empirical cross-entropy over `family` with seeded, restarted
/// Nelder–Mead in data coordinates that are centered and uniformly rescaled.
/// Deterministic for a given (y, family, cfg). Throws OracleDidNotConverge when
/// no restart converges.
OracleFit oracle_minimize(const PointSet& y, const FamilySpec& family, const OracleConfig& cfg = {});

}  // namespace rescale
