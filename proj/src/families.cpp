#include "rescale/families.hpp"

#include "rescale/errors.hpp"
#include "rescale/kernels.hpp"

#include <cassert>
#include <cmath>
#include <exception>
#include <numbers>
#include <utility>

namespace rescale {

namespace {

// Quantities of Σ_Y shared by every closed form.
struct DataSpectrum {
    double log_det;
    double self_cross_entropy;
    Matrix inverse;
};

DataSpectrum analyze(const Moments& mom) {
    const SymMatrix& cov = mom.cov;
    if (!(cov.trace() > 0.0))
        throw SingularMatrix("data covariance trace is not positive", cov.matrix().diagonal().minCoeff());
    const auto eig = sym_eigen(cov);
    const double floor = eigenvalue_floor(cov);
    const double log_det = spd_log_det(eig, floor);
    const auto n = static_cast<double>(mom.dim());
    const double self_ce = 0.5 * n * (std::log(2.0 * std::numbers::pi) + 1.0) + 0.5 * log_det;
    return {log_det, self_ce, spd_power(eig, -1.0, floor).matrix()};
}

Vector checked_offset(const Moments& mom, const Vector& m) {
    if (m.size() != mom.dim()) throw InvalidInput("fixed mean has the wrong dimension");
    if (!m.allFinite()) throw InvalidInput("fixed mean has non-finite entries");
    return m - mom.mean;
}

FitResult make_result(Vector mean, SymMatrix cov, double match, const DataSpectrum& ds, FamilySpec family) {
    return {GaussianModel(std::move(mean), std::move(cov)), match, ds.self_cross_entropy + match, std::move(family)};
}

FitResult full_impl(const Moments& mom, const DataSpectrum& ds) {
    return make_result(mom.mean, mom.cov, 0.0, ds, FamilySpec(FamilyKind::Full));
}

FitResult fixed_mean_impl(const Moments& mom, const Vector& m, const DataSpectrum& ds) {
    const Vector d = checked_offset(mom, m);
    const double maha = d.dot(ds.inverse * d);
    SymMatrix cov(mom.cov.matrix() + d * d.transpose());
    assert(((cov.matrix() - fixed_mean_covariance_via_inverse(mom, m).matrix()).norm() <=
            1e-8 * cov.matrix().norm()));
    return make_result(m, std::move(cov), 0.5 * std::log1p(maha), ds, FamilySpec(FamilyKind::FixedMean, m));
}

FitResult isotropic_impl(const Moments& mom, const Vector& mean, double extra, const DataSpectrum& ds,
                         FamilySpec family) {
    const auto n = static_cast<double>(mom.dim());
    const double s = (mom.cov.trace() + extra) / n;
    const double match = 0.5 * n * std::log(s) - 0.5 * ds.log_det;
    return make_result(mean, SymMatrix::diagonal(Vector::Constant(mom.dim(), s)), match, ds, std::move(family));
}

FitResult diagonal_impl(const Moments& mom, const Vector& mean, const Vector& offset, const DataSpectrum& ds,
                        FamilySpec family) {
    const Vector s = mom.cov.matrix().diagonal() + offset.cwiseAbs2();
    const double match = 0.5 * s.array().log().sum() - 0.5 * ds.log_det;
    return make_result(mean, SymMatrix::diagonal(s), match, ds, std::move(family));
}

FitResult fit_impl(const Moments& mom, const FamilySpec& spec, const DataSpectrum& ds) {
    switch (spec.kind()) {
    case FamilyKind::Full:
        return full_impl(mom, ds);
    case FamilyKind::FixedMean:
        return fixed_mean_impl(mom, *spec.fixed_mean(), ds);
    case FamilyKind::Isotropic:
        return isotropic_impl(mom, mom.mean, 0.0, ds, spec);
    case FamilyKind::FixedMeanIsotropic: {
        const Vector d = checked_offset(mom, *spec.fixed_mean());
        return isotropic_impl(mom, *spec.fixed_mean(), d.squaredNorm(), ds, spec);
    }
    case FamilyKind::Diagonal:
        return diagonal_impl(mom, mom.mean, Vector::Zero(mom.dim()), ds, spec);
    case FamilyKind::FixedMeanDiagonal: {
        const Vector d = checked_offset(mom, *spec.fixed_mean());
        return diagonal_impl(mom, *spec.fixed_mean(), d, ds, spec);
    }
    }
    throw InvalidInput("unknown family");
}

}  // namespace

bool has_fixed_mean(FamilyKind kind) noexcept {
    return kind == FamilyKind::FixedMean || kind == FamilyKind::FixedMeanIsotropic ||
           kind == FamilyKind::FixedMeanDiagonal;
}

std::string_view family_name(FamilyKind kind) noexcept {
    switch (kind) {
    case FamilyKind::Full: return "full";
    case FamilyKind::FixedMean: return "fixed-mean";
    case FamilyKind::Isotropic: return "isotropic";
    case FamilyKind::FixedMeanIsotropic: return "fixed-mean-isotropic";
    case FamilyKind::Diagonal: return "diagonal";
    case FamilyKind::FixedMeanDiagonal: return "fixed-mean-diagonal";
    }
    return "unknown";
}

std::optional<FamilyKind> parse_family(std::string_view name) noexcept {
    for (auto kind : kAllFamilies)
        if (family_name(kind) == name) return kind;
    return std::nullopt;
}

FamilySpec::FamilySpec(FamilyKind kind, std::optional<Vector> fixed_mean)
    : kind_(kind), fixed_mean_(std::move(fixed_mean)) {
    if (has_fixed_mean(kind_) != fixed_mean_.has_value()) {
        throw InvalidInput(std::string("family '") + std::string(family_name(kind_)) +
                           (has_fixed_mean(kind_) ? "' requires a fixed mean" : "' does not take a fixed mean"));
    }
}

Vector RescalingTransform::apply(const Vector& y) const { return root_inv_cov.matrix() * (y - shift); }

PointSet RescalingTransform::apply(const PointSet& y) const {
    if (y.dim() != shift.size()) throw InvalidInput("transform: dimension mismatch");
    return PointSet(kernels::omp::affine(y.points(), shift, root_inv_cov.matrix()));
}

FitResult fit_full(const Moments& mom) { return full_impl(mom, analyze(mom)); }

FitResult fit_fixed_mean(const Moments& mom, const Vector& m) { return fixed_mean_impl(mom, m, analyze(mom)); }

SymMatrix fixed_mean_covariance_via_inverse(const Moments& mom, const Vector& m) {
    const Vector d = checked_offset(mom, m);
    const double maha = mahalanobis_sq(d, mom.cov);
    const SymMatrix inner(mom.cov.matrix() - d * d.transpose() / (1.0 + maha));
    const Matrix& s = mom.cov.matrix();
    return SymMatrix(s * spd_power(inner, -1.0).matrix() * s);
}

FitResult fit_isotropic(const Moments& mom) { return fit(mom, FamilySpec(FamilyKind::Isotropic)); }

FitResult fit_fixed_mean_isotropic(const Moments& mom, const Vector& m) {
    return fit(mom, FamilySpec(FamilyKind::FixedMeanIsotropic, m));
}

FitResult fit_diagonal(const Moments& mom) { return fit(mom, FamilySpec(FamilyKind::Diagonal)); }

FitResult fit_fixed_mean_diagonal(const Moments& mom, const Vector& m) {
    return fit(mom, FamilySpec(FamilyKind::FixedMeanDiagonal, m));
}

FitResult fit(const Moments& mom, const FamilySpec& spec) { return fit_impl(mom, spec, analyze(mom)); }

RescalingTransform whitening_transform(const GaussianModel& g) { return {g.mean(), spd_power(g.cov(), -0.5)}; }

std::vector<ReportRow> family_report(const Moments& mom, const std::vector<Vector>& means) {
    struct Job {
        FamilyKind kind;
        std::optional<std::size_t> mean_index;
    };
    std::vector<Job> jobs;
    for (auto kind : kAllFamilies) {
        if (!has_fixed_mean(kind)) {
            jobs.push_back({kind, std::nullopt});
            continue;
        }
        for (std::size_t i = 0; i < means.size(); ++i) jobs.push_back({kind, i});
    }
    for (const auto& m : means) checked_offset(mom, m);

    const DataSpectrum ds = analyze(mom);
    std::vector<ReportRow> rows(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j < count; ++j) {
        const auto k = static_cast<std::size_t>(j);
        try {
            const Job& job = jobs[k];
            const FamilySpec spec =
                job.mean_index ? FamilySpec(job.kind, means[*job.mean_index]) : FamilySpec(job.kind);
            const FitResult r = fit_impl(mom, spec, ds);
            rows[k] = {job.kind, job.mean_index, r.match, r.cross_entropy};
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

}  // namespace rescale
