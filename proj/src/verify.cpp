#include "rescale/verify.hpp"

#include "rescale/errors.hpp"
#include "rescale/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace rescale {

namespace {

struct TrialOutcome {
    std::array<double, kAllFamilies.size()> diff{};
    std::array<double, kAllFamilies.size()> advantage{};
    std::array<bool, kAllFamilies.size()> failed{};
    int nesting_violations = 0;
    std::vector<std::string> errors;
};

TrialOutcome run_trial(const VerifyOptions& opts, int trial) {
    TrialOutcome out;
    const SyntheticCase c = verification_case(opts, trial);
    const Moments mom = estimate_moments(c.points);
    out.nesting_violations = nesting_violations(mom, c.fixed_mean, opts.nesting_tolerance);
    if (out.nesting_violations > 0)
        out.errors.push_back("trial " + std::to_string(trial) + ": family nesting violated");

    for (std::size_t k = 0; k < kAllFamilies.size(); ++k) {
        const FamilyKind kind = kAllFamilies[k];
        const FamilySpec spec = has_fixed_mean(kind) ? FamilySpec(kind, c.fixed_mean) : FamilySpec(kind);
        const std::string label = "trial " + std::to_string(trial) + " (dim " + std::to_string(c.points.dim()) +
                                  ", n " + std::to_string(c.points.size()) + ") " +
                                  std::string(family_name(kind)) + ": ";
        try {
            const double closed = fit(mom, spec).match;
            OracleConfig cfg = opts.oracle;
            cfg.seed = opts.seed ^ (static_cast<std::uint64_t>(trial) << 8) ^ k;
            const double numeric = oracle_minimize(c.points, spec, cfg).fit.match;
            out.diff[k] = std::abs(closed - numeric);
            out.advantage[k] = closed - numeric;
            if (!(out.diff[k] <= opts.match_tolerance) || !(out.advantage[k] <= opts.lower_bound_slack)) {
                out.failed[k] = true;
                out.errors.push_back(label + "closed form " + format_double(closed) + " vs oracle " +
                                     format_double(numeric));
            }
        } catch (const std::exception& e) {
            out.failed[k] = true;
            out.errors.push_back(label + e.what());
        }
    }
    return out;
}

}  // namespace

SyntheticCase synthetic_case(Eigen::Index dim, Eigen::Index n, std::uint64_t seed) {
    const CounterRng rng(seed);
    std::uint64_t k = 0;
    Vector mean(dim);
    for (Eigen::Index i = 0; i < dim; ++i) mean(i) = 2.0 * rng.normal(k++);
    Matrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = rng.normal(k++);
    const SymMatrix cov(a * a.transpose() / static_cast<double>(dim) + 0.25 * Matrix::Identity(dim, dim));
    Vector fixed(dim);
    for (Eigen::Index i = 0; i < dim; ++i) fixed(i) = mean(i) + 1.5 * rng.normal(k++);
    return {sample_gaussian(mean, cov, n, rng.bits(k++)), fixed};
}

SyntheticCase verification_case(const VerifyOptions& opts, int trial) {
    if (opts.min_dim < 1 || opts.max_dim < opts.min_dim) throw InvalidInput("verify: invalid dimension range");
    if (opts.min_points < 2 || opts.max_points < opts.min_points)
        throw InvalidInput("verify: invalid point-count range");
    const CounterRng rng(opts.seed);
    const auto t = static_cast<std::uint64_t>(trial);
    const Eigen::Index dim = opts.min_dim + static_cast<Eigen::Index>(t % static_cast<std::uint64_t>(
                                                                             opts.max_dim - opts.min_dim + 1));
    const auto span = static_cast<std::uint64_t>(opts.max_points - opts.min_points + 1);
    const Eigen::Index n = opts.min_points + static_cast<Eigen::Index>(rng.bits(2 * t) % span);
    return synthetic_case(dim, n, rng.bits(2 * t + 1));
}

int nesting_violations(const Moments& mom, const Vector& fixed_mean, double tolerance) {
    const double full = fit_full(mom).match;
    const double fixed = fit_fixed_mean(mom, fixed_mean).match;
    const double fixed_diag = fit_fixed_mean_diagonal(mom, fixed_mean).match;
    const double fixed_iso = fit_fixed_mean_isotropic(mom, fixed_mean).match;
    const double diag = fit_diagonal(mom).match;
    const double iso = fit_isotropic(mom).match;

    int violations = 0;
    auto check = [&](double smaller, double larger) {
        if (!(smaller <= larger + tolerance)) ++violations;
    };
    check(full, fixed);
    check(fixed, fixed_diag);
    check(fixed_diag, fixed_iso);
    check(full, diag);
    check(diag, iso);
    return violations;
}

bool VerifyReport::passed() const {
    if (nesting_violations > 0) return false;
    return std::all_of(families.begin(), families.end(), [](const auto& f) { return f.failures == 0; });
}

VerifyReport run_verification(const VerifyOptions& opts) {
    if (opts.trials < 1) throw InvalidInput("verify: trials must be positive");
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(opts.trials));
    std::vector<std::exception_ptr> errors(outcomes.size());

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < opts.trials; ++t) {
        try {
            outcomes[static_cast<std::size_t>(t)] = run_trial(opts, t);
        } catch (...) {
            errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    VerifyReport report;
    for (auto kind : kAllFamilies) report.families.push_back({kind});
    for (const auto& o : outcomes) {
        ++report.nesting_checks;
        report.nesting_violations += o.nesting_violations;
        for (std::size_t k = 0; k < kAllFamilies.size(); ++k) {
            auto& f = report.families[k];
            ++f.trials;
            if (o.failed[k]) ++f.failures;
            f.max_abs_diff = std::max(f.max_abs_diff, o.diff[k]);
            f.max_oracle_advantage = std::max(f.max_oracle_advantage, o.advantage[k]);
        }
        report.errors.insert(report.errors.end(), o.errors.begin(), o.errors.end());
    }
    return report;
}

}  // namespace rescale
