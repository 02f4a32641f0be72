#include "rescale/gaussmodel.hpp"

#include "rescale/errors.hpp"
#include "rescale/kernels.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace rescale {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

void require_same_dim(const Moments& mom, const GaussianModel& g, const char* where) {
    if (mom.dim() != g.dim() || mom.cov.dim() != g.dim())
        throw InvalidInput(std::string(where) + ": dimension mismatch between data and model");
}

// Σ⁻¹ and ln det Σ from a single decomposition.
struct InverseAndLogDet {
    Matrix inverse;
    double log_det;
};

InverseAndLogDet invert(const SymMatrix& s) {
    if (!(s.trace() > 0.0)) throw SingularMatrix("covariance trace is not positive", s.matrix().diagonal().minCoeff());
    const auto eig = sym_eigen(s);
    const double floor = eigenvalue_floor(s);
    return {spd_power(eig, -1.0, floor).matrix(), spd_log_det(eig, floor)};
}

// The data's own Gaussian: M is zero by definition, not up to roundoff.
bool is_data_gaussian(const Moments& mom, const GaussianModel& g) {
    return g.mean() == mom.mean && g.cov().matrix() == mom.cov.matrix();
}

}  // namespace

PointSet::PointSet(PointMatrix points) : points_(std::move(points)) {
    if (points_.cols() < 1) throw InvalidInput("PointSet: dimension must be at least 1");
    if (points_.rows() < 2) throw InsufficientData("PointSet: at least 2 samples are required");
    if (!points_.allFinite()) throw InvalidInput("PointSet: non-finite entries");
}

GaussianModel::GaussianModel(Vector mean, SymMatrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    if (mean_.size() != cov_.dim()) throw InvalidInput("GaussianModel: mean and covariance dimensions differ");
    if (!mean_.allFinite()) throw InvalidInput("GaussianModel: non-finite mean");
    if (!(cov_.trace() > 0.0))
        throw SingularMatrix("GaussianModel: covariance trace is not positive", cov_.matrix().diagonal().minCoeff());
    const auto eig = sym_eigen(cov_);
    const double smallest = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (!(smallest > eigenvalue_floor(cov_)))
        throw SingularMatrix("GaussianModel: covariance is not positive definite", smallest);
}

Moments estimate_moments(const PointSet& y) {
    auto m = kernels::omp::moments(y.points());
    return {std::move(m.mean), SymMatrix(m.cov)};
}

double mahalanobis_sq(const Vector& v, const SymMatrix& s) {
    if (v.size() != s.dim()) throw InvalidInput("mahalanobis_sq: dimension mismatch");
    const Matrix inv = spd_power(s, -1.0).matrix();
    return v.dot(inv * v);
}

double cross_entropy(const Moments& mom, const GaussianModel& g) {
    require_same_dim(mom, g, "cross_entropy");
    if (is_data_gaussian(mom, g)) return self_cross_entropy(mom);
    const auto n = static_cast<double>(g.dim());
    const auto [inv, log_det] = invert(g.cov());
    const Vector d = g.mean() - mom.mean;
    const double quad = d.dot(inv * d);
    const double tr = (inv * mom.cov.matrix()).trace();
    return 0.5 * n * kLog2Pi + 0.5 * quad + 0.5 * tr + 0.5 * log_det;
}

double self_cross_entropy(const Moments& mom) {
    const auto n = static_cast<double>(mom.dim());
    return 0.5 * n * (kLog2Pi + 1.0) + 0.5 * spd_log_det(mom.cov);
}

double match_score(const Moments& mom, const GaussianModel& g) {
    require_same_dim(mom, g, "match_score");
    if (is_data_gaussian(mom, g)) {
        (void)spd_log_det(mom.cov);  // still rejects a singular Σ_Y
        return 0.0;
    }
    const auto n = static_cast<double>(g.dim());
    const auto [inv, log_det] = invert(g.cov());
    const double data_log_det = spd_log_det(mom.cov);
    const Vector d = g.mean() - mom.mean;
    const double quad = d.dot(inv * d);
    const double tr = (inv * mom.cov.matrix()).trace();
    // ln det(Σ⁻¹Σ_Y) = ln det Σ_Y − ln det Σ
    return 0.5 * (quad + tr - (data_log_det - log_det) - n);
}

}  // namespace rescale
