#include "rescale/oracle.hpp"

#include "rescale/errors.hpp"
#include "rescale/ingest.hpp"
#include "rescale/kernels.hpp"
#include "rescale/nelder_mead.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace rescale {

namespace {

constexpr Eigen::Index kMaxOracleDim = 8;
constexpr int kMaxPolishRounds = 50;
constexpr double kStartJitter = 0.3;
constexpr double kInitialStep = 0.5;
constexpr double kPolishStep = 0.1;

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

bool free_mean(FamilyKind kind) { return !has_fixed_mean(kind); }

bool triangular(FamilyKind kind) { return kind == FamilyKind::Full || kind == FamilyKind::FixedMean; }

bool isotropic(FamilyKind kind) { return kind == FamilyKind::Isotropic || kind == FamilyKind::FixedMeanIsotropic; }

Eigen::Index covariance_size(FamilyKind kind, Eigen::Index n) {
    if (triangular(kind)) return n * (n + 1) / 2;
    if (isotropic(kind)) return 1;
    return n;
}

// H× of the samples in `z` under Nor(mean, LLᵀ), by forward substitution per sample.
class PointwiseObjective {
public:
    PointwiseObjective(const PointMatrix& z, const FamilyParameterization& param)
        : z_(z), param_(param), residual_(z.cols()) {}

    double operator()(const Vector& p) {
        const Vector mean = param_.mean(p);
        const Matrix l = param_.factor(p);
        const Eigen::Index n = z_.cols();

        double half_log_det = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) half_log_det += std::log(l(i, i));

        double quad = 0.0;
        for (Eigen::Index r = 0; r < z_.rows(); ++r) {
            for (Eigen::Index i = 0; i < n; ++i) {
                double acc = z_(r, i) - mean(i);
                for (Eigen::Index j = 0; j < i; ++j) acc -= l(i, j) * residual_(j);
                residual_(i) = acc / l(i, i);
            }
            quad += residual_.squaredNorm();
        }
        return 0.5 * static_cast<double>(n) * kLog2Pi + half_log_det +
               0.5 * quad / static_cast<double>(z_.rows());
    }

private:
    const PointMatrix& z_;
    const FamilyParameterization& param_;
    Vector residual_;
};

struct RestartOutcome {
    NelderMeadResult best;
    bool converged = false;
    long iterations = 0;
    long evaluations = 0;
};

RestartOutcome run_restart(PointwiseObjective& objective, const Vector& start, const OracleConfig& cfg) {
    auto f = [&](const Vector& p) { return objective(p); };
    NelderMeadOptions opts;
    opts.max_iterations = cfg.max_iterations;
    opts.f_tolerance = cfg.rel_tolerance;
    opts.x_tolerance = std::sqrt(cfg.rel_tolerance);
    opts.initial_step = kInitialStep;

    RestartOutcome out;
    out.best = nelder_mead(f, start, opts);
    out.iterations = out.best.iterations;
    out.evaluations = out.best.evaluations;

    opts.initial_step = kPolishStep;
    for (int round = 0; round < kMaxPolishRounds; ++round) {
        const NelderMeadResult next = nelder_mead(f, out.best.x, opts);
        out.iterations += next.iterations;
        out.evaluations += next.evaluations;
        const double improvement = out.best.value - next.value;
        if (next.value < out.best.value) out.best = next;
        if (next.converged && improvement <= cfg.rel_tolerance * std::max(std::abs(out.best.value), 1.0)) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace

double empirical_cross_entropy(const PointSet& y, const GaussianModel& g) {
    if (y.dim() != g.dim()) throw InvalidInput("empirical_cross_entropy: dimension mismatch");
    const auto eig = sym_eigen(g.cov());
    const double floor = eigenvalue_floor(g.cov());
    const Matrix root_inv = spd_power(eig, -0.5, floor).matrix();
    const double log_det = spd_log_det(eig, floor);
    const Vector quad = kernels::omp::squared_norms(y.points(), g.mean(), root_inv);
    const auto n = static_cast<double>(y.size());
    const auto dim = static_cast<double>(y.dim());
    return 0.5 * dim * kLog2Pi + 0.5 * log_det + 0.5 * kernels::ordered_sum(quad) / n;
}

FamilyParameterization::FamilyParameterization(FamilySpec family, Eigen::Index dim)
    : family_(std::move(family)), dim_(dim) {
    if (dim_ < 1) throw InvalidInput("FamilyParameterization: dimension must be positive");
    if (family_.fixed_mean() && family_.fixed_mean()->size() != dim_)
        throw InvalidInput("FamilyParameterization: fixed mean has the wrong dimension");
    mean_size_ = free_mean(family_.kind()) ? dim_ : 0;
    size_ = mean_size_ + covariance_size(family_.kind(), dim_);
}

Vector FamilyParameterization::mean(const Vector& params) const {
    if (mean_size_ > 0) return params.head(dim_);
    return *family_.fixed_mean();
}

Matrix FamilyParameterization::factor(const Vector& params) const {
    const auto u = params.tail(size_ - mean_size_);
    Matrix l = Matrix::Zero(dim_, dim_);
    const FamilyKind kind = family_.kind();
    if (triangular(kind)) {
        Eigen::Index k = 0;
        for (Eigen::Index i = 0; i < dim_; ++i)
            for (Eigen::Index j = 0; j <= i; ++j, ++k) l(i, j) = (i == j) ? std::exp(u(k)) : u(k);
    } else if (isotropic(kind)) {
        l.diagonal().setConstant(std::exp(0.5 * u(0)));
    } else {
        l.diagonal() = (0.5 * u.array()).exp().matrix();
    }
    return l;
}

GaussianModel FamilyParameterization::model(const Vector& params) const {
    if (params.size() != size_) throw InvalidInput("FamilyParameterization: wrong parameter count");
    const Matrix l = factor(params);
    return GaussianModel(mean(params), SymMatrix(l * l.transpose()));
}

Vector FamilyParameterization::params(const GaussianModel& g) const {
    if (g.dim() != dim_) throw InvalidInput("FamilyParameterization: dimension mismatch");
    Vector p(size_);
    if (mean_size_ > 0) p.head(dim_) = g.mean();
    const FamilyKind kind = family_.kind();
    const Matrix& cov = g.cov().matrix();
    if (triangular(kind)) {
        const Matrix l = cov.llt().matrixL();
        Eigen::Index k = mean_size_;
        for (Eigen::Index i = 0; i < dim_; ++i)
            for (Eigen::Index j = 0; j <= i; ++j, ++k) p(k) = (i == j) ? std::log(l(i, i)) : l(i, j);
    } else if (isotropic(kind)) {
        p(mean_size_) = std::log(cov(0, 0));
    } else {
        p.tail(dim_) = cov.diagonal().array().log().matrix();
    }
    return p;
}

Vector FamilyParameterization::identity() const { return Vector::Zero(size_); }

OracleFit oracle_minimize(const PointSet& y, const FamilySpec& family, const OracleConfig& cfg) {
    if (!(cfg.rel_tolerance > 0.0)) throw InvalidInput("oracle: rel_tolerance must be positive");
    if (cfg.restarts < 1) throw InvalidInput("oracle: restarts must be at least 1");
    if (cfg.max_iterations < 1) throw InvalidInput("oracle: max_iterations must be positive");
    if (y.dim() > kMaxOracleDim) throw InvalidInput("oracle: dimensions above 8 are not supported");
    if (family.fixed_mean() && family.fixed_mean()->size() != y.dim())
        throw InvalidInput("oracle: fixed mean has the wrong dimension");

    const Eigen::Index dim = y.dim();
    const Moments mom = estimate_moments(y);

    // z = (y − center) / scale keeps every family closed.
    const Vector center = mom.mean;
    const double scale = std::sqrt(mom.cov.trace() / static_cast<double>(dim));
    if (!(scale > 0.0)) throw SingularMatrix("oracle: data has no spread", 0.0);
    PointMatrix z = y.points();
    z.rowwise() -= center.transpose();
    z /= scale;

    std::optional<Vector> z_mean;
    if (family.fixed_mean()) z_mean = Vector((*family.fixed_mean() - center) / scale);
    const FamilyParameterization param(FamilySpec(family.kind(), z_mean), dim);
    PointwiseObjective objective(z, param);

    const CounterRng rng(cfg.seed);
    const Eigen::Index p = param.size();

    int best_restart = 0;
    int converged_restarts = 0;
    long iterations = 0;
    long evaluations = 0;
    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.restarts; ++r) {
        Vector start = param.identity();
        for (Eigen::Index i = 0; i < p; ++i)
            start(i) += kStartJitter * rng.normal(static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(p) +
                                                  static_cast<std::uint64_t>(i));
        const RestartOutcome outcome = run_restart(objective, start, cfg);
        iterations += outcome.iterations;
        evaluations += outcome.evaluations;
        if (outcome.converged) ++converged_restarts;
        if (outcome.best.value < best.value) {
            best = outcome.best;
            best_restart = r;
        }
    }

    const GaussianModel z_model = param.model(best.x);
    const GaussianModel y_model(center + scale * z_model.mean(), SymMatrix(scale * scale * z_model.cov().matrix()));
    const double h = empirical_cross_entropy(y, y_model);
    const double h_self = empirical_cross_entropy(y, GaussianModel(mom.mean, mom.cov));
    if (converged_restarts == 0)
        throw OracleDidNotConverge("oracle: no restart converged for family '" +
                                       std::string(family_name(family.kind())) + "'",
                                   h - h_self);
    return {FitResult{y_model, h - h_self, h, family}, best_restart, converged_restarts, iterations, evaluations};
}

}  // namespace rescale
