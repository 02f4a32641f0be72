#pragma once

#include "rescale/gaussmodel.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rescale {

enum class FamilyKind {
    Full,                 // all Gaussians
    FixedMean,            // mean fixed at m
    Isotropic,            // covariance s·I
    FixedMeanIsotropic,   // mean m, covariance s·I
    Diagonal,             // diagonal covariance
    FixedMeanDiagonal,    // mean m, diagonal covariance
};

/// Report and dispatch order.
inline constexpr std::array<FamilyKind, 6> kAllFamilies = {
    FamilyKind::Full,     FamilyKind::FixedMean, FamilyKind::Isotropic, FamilyKind::FixedMeanIsotropic,
    FamilyKind::Diagonal, FamilyKind::FixedMeanDiagonal,
};

[[nodiscard]] bool has_fixed_mean(FamilyKind kind) noexcept;

/// CLI spelling: full, fixed-mean, isotropic, fixed-mean-isotropic, diagonal, fixed-mean-diagonal.
[[nodiscard]] std::string_view family_name(FamilyKind kind) noexcept;
[[nodiscard]] std::optional<FamilyKind> parse_family(std::string_view name) noexcept;

/// A constrained family. `fixed_mean` is present exactly for the FixedMean* kinds.
class FamilySpec {
public:
    /// Throws InvalidInput when the presence of `fixed_mean` does not match `kind`.
    explicit FamilySpec(FamilyKind kind, std::optional<Vector> fixed_mean = std::nullopt);

    [[nodiscard]] FamilyKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::optional<Vector>& fixed_mean() const noexcept { return fixed_mean_; }

private:
    FamilyKind kind_;
    std::optional<Vector> fixed_mean_;
};

struct FitResult {
    GaussianModel model;
    double match;          // M(Y‖F)
    double cross_entropy;  // H×(Y‖F)
    FamilySpec family;
};

/// y ↦ Σ^{-1/2}(y − m).
struct RescalingTransform {
    Vector shift;
    SymMatrix root_inv_cov;

    [[nodiscard]] Vector apply(const Vector& y) const;
    [[nodiscard]] PointSet apply(const PointSet& y) const;
};

FitResult fit_full(const Moments& mom);

/// Σ = Σ_Y + (m − m_Y)(m − m_Y)ᵀ and M = ½ln(1 + ‖m − m_Y‖²_{Σ_Y}).
FitResult fit_fixed_mean(const Moments& mom, const Vector& m);

/// The same optimum written as Σ_Y (Σ_Y − ddᵀ/(1 + ‖d‖²_{Σ_Y}))⁻¹ Σ_Y with d = m − m_Y.
/// Kept as a second route for checking `fit_fixed_mean`.
SymMatrix fixed_mean_covariance_via_inverse(const Moments& mom, const Vector& m);

FitResult fit_isotropic(const Moments& mom);
FitResult fit_fixed_mean_isotropic(const Moments& mom, const Vector& m);
FitResult fit_diagonal(const Moments& mom);
FitResult fit_fixed_mean_diagonal(const Moments& mom, const Vector& m);

FitResult fit(const Moments& mom, const FamilySpec& spec);

RescalingTransform whitening_transform(const GaussianModel& g);

struct ReportRow {
    FamilyKind family;
    std::optional<std::size_t> mean_index;  // index into the `means` list, fixed-mean rows only
    double match;
    double cross_entropy;
};

/// One row per free family and one per (fixed-mean family, mean) pair, in
/// kAllFamilies order and then mean order.
std::vector<ReportRow> family_report(const Moments& mom, const std::vector<Vector>& means);

}  // namespace rescale
