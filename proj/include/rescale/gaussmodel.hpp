#pragma once

#include "rescale/linalg.hpp"

namespace rescale {

/// Dataset Y: n ≥ 2 finite samples of dimension N ≥ 1, one per row.
class PointSet {
public:
    explicit PointSet(PointMatrix points);

    [[nodiscard]] Eigen::Index size() const noexcept { return points_.rows(); }
    [[nodiscard]] Eigen::Index dim() const noexcept { return points_.cols(); }
    [[nodiscard]] const PointMatrix& points() const noexcept { return points_; }
    [[nodiscard]] auto row(Eigen::Index i) const { return points_.row(i); }

private:
    PointMatrix points_;
};

/// Sample mean m_Y and MLE covariance Σ_Y (divisor n).
struct Moments {
    Vector mean;
    SymMatrix cov;

    [[nodiscard]] Eigen::Index dim() const noexcept { return mean.size(); }
};

/// Gaussian Nor(m, Σ) with Σ SPD above the eigenvalue floor.
class GaussianModel {
public:
    GaussianModel(Vector mean, SymMatrix cov);

    [[nodiscard]] const Vector& mean() const noexcept { return mean_; }
    [[nodiscard]] const SymMatrix& cov() const noexcept { return cov_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return mean_.size(); }

private:
    Vector mean_;
    SymMatrix cov_;
};

Moments estimate_moments(const PointSet& y);

/// vᵀ S⁻¹ v.
double mahalanobis_sq(const Vector& v, const SymMatrix& s);

/// H×(Y‖Nor(m,Σ)) = N/2·ln(2π) + ½‖m−m_Y‖²_Σ + ½tr(Σ⁻¹Σ_Y) + ½ln det Σ.
double cross_entropy(const Moments& mom, const GaussianModel& g);

/// H×(Y‖Nor_Y) = N/2·ln(2πe) + ½ln det Σ_Y.
double self_cross_entropy(const Moments& mom);

/// M(Y‖Nor(m,Σ)) = ½(‖m−m_Y‖²_Σ + tr(Σ⁻¹Σ_Y) − ln det(Σ⁻¹Σ_Y) − N) ≥ 0.
double match_score(const Moments& mom, const GaussianModel& g);

}  // namespace rescale
