#include "doctest.h"
#include "support.hpp"

#include "rescale/errors.hpp"
#include "rescale/families.hpp"
#include "rescale/verify.hpp"

#include <cmath>

using namespace rescale;
using testing::Draw;
using testing::sym;
using testing::vec;

namespace {

const double kHalfLn2 = 0.5 * std::log(2.0);

void check_fit_invariants(const Moments& mom, const FitResult& r) {
    CHECK(r.match >= -1e-12);
    CHECK(r.match == doctest::Approx(match_score(mom, r.model)).epsilon(1e-9));
    CHECK(r.cross_entropy == doctest::Approx(cross_entropy(mom, r.model)).epsilon(1e-12));
}

// Random perturbation that stays inside the family of `spec`.
GaussianModel perturb(const GaussianModel& g, FamilyKind kind, Draw& draw, double eps) {
    const Eigen::Index n = g.dim();
    Vector mean = g.mean();
    if (!has_fixed_mean(kind)) mean += eps * draw.vector(n);
    Matrix cov = g.cov().matrix();
    switch (kind) {
        case FamilyKind::Full:
        case FamilyKind::FixedMean: {
            const Matrix e = draw.matrix(n, n);
            cov += eps * (e + e.transpose()) / 2.0;
            break;
        }
        case FamilyKind::Isotropic:
        case FamilyKind::FixedMeanIsotropic:
            cov *= 1.0 + eps * draw.normal();
            break;
        case FamilyKind::Diagonal:
        case FamilyKind::FixedMeanDiagonal:
            for (Eigen::Index i = 0; i < n; ++i) cov(i, i) *= 1.0 + eps * draw.normal();
            break;
    }
    return GaussianModel(mean, SymMatrix(cov));
}

}  // namespace

TEST_CASE("FamilySpec requires a fixed mean exactly for fixed-mean kinds") {
    CHECK_THROWS_AS(FamilySpec(FamilyKind::FixedMean), InvalidInput);
    CHECK_THROWS_AS(FamilySpec(FamilyKind::Full, vec({0})), InvalidInput);
    CHECK_NOTHROW(FamilySpec(FamilyKind::FixedMeanDiagonal, vec({0})));
    for (auto k : kAllFamilies) CHECK(parse_family(family_name(k)) == k);
    CHECK_FALSE(parse_family("nope").has_value());
}

TEST_CASE("fit_full") {
    const Moments unit{vec({1, 1}), SymMatrix::identity(2)};
    const auto r = fit_full(unit);
    CHECK(r.model.mean() == vec({1, 1}));
    CHECK(r.match == 0.0);

    const auto mom = testing::example1_moments();
    const auto e = fit_full(mom);
    CHECK(e.match == 0.0);
    CHECK(e.cross_entropy == self_cross_entropy(mom));
    CHECK(e.model.mean() == vec({3, 4}));
    CHECK((e.model.cov().matrix() - mom.cov.matrix()).norm() == 0.0);
}

TEST_CASE("fit_fixed_mean") {
    const auto mom = testing::example1_moments();
    const auto same = fit_fixed_mean(mom, mom.mean);
    CHECK(same.match == 0.0);
    CHECK((same.model.cov().matrix() - mom.cov.matrix()).norm() == 0.0);

    const Moments unit{vec({0, 0}), SymMatrix::identity(2)};
    const auto r = fit_fixed_mean(unit, vec({1, 0}));
    CHECK((r.model.cov().matrix() - sym(2, {2, 0, 0, 1}).matrix()).norm() < 1e-15);
    CHECK(r.match == doctest::Approx(kHalfLn2).epsilon(1e-15));

    // ½ln(1 + 14.2/0.51), frozen from numpy.
    const auto origin = fit_fixed_mean(mom, vec({0, 0}));
    CHECK(origin.match == doctest::Approx(1.680936043938556).epsilon(1e-13));
    check_fit_invariants(mom, origin);
}

TEST_CASE("fit_isotropic") {
    const Moments scaled{vec({0, 0, 0}), SymMatrix(2.5 * Matrix::Identity(3, 3))};
    const auto r = fit_isotropic(scaled);
    CHECK(r.model.cov()(0, 0) == doctest::Approx(2.5));
    CHECK(std::abs(r.match) < 1e-15);

    const auto mom = testing::example1_moments();
    const auto e = fit_isotropic(mom);
    CHECK(e.model.cov()(1, 1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(e.match == doctest::Approx(0.11352872531767311).epsilon(1e-13));
    check_fit_invariants(mom, e);

    const Moments d41{vec({0, 0}), sym(2, {4, 0, 0, 1})};
    const auto d = fit_isotropic(d41);
    CHECK(d.model.cov()(0, 0) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(d.match == doctest::Approx(0.22314355131420982).epsilon(1e-13));
}

TEST_CASE("fit_fixed_mean_isotropic") {
    const Moments one{vec({0}), SymMatrix::identity(1)};
    const auto a = fit_fixed_mean_isotropic(one, vec({0}));
    CHECK(a.model.cov()(0, 0) == 1.0);
    CHECK(std::abs(a.match) < 1e-15);

    const auto b = fit_fixed_mean_isotropic(one, vec({1}));
    CHECK(b.model.cov()(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(b.match == doctest::Approx(kHalfLn2).epsilon(1e-15));

    const auto mom = testing::example1_moments();
    const auto e = fit_fixed_mean_isotropic(mom, vec({0, 0}));
    CHECK(e.model.cov()(0, 0) == doctest::Approx(13.3).epsilon(1e-14));
    CHECK(e.match == doctest::Approx(2.924436311859591).epsilon(1e-13));
    check_fit_invariants(mom, e);
}

TEST_CASE("fit_diagonal") {
    const Moments diag{vec({1, 2}), sym(2, {3, 0, 0, 0.5})};
    CHECK(std::abs(fit_diagonal(diag).match) < 1e-15);

    const auto mom = testing::example1_moments();
    const auto e = fit_diagonal(mom);
    CHECK(e.model.cov()(0, 0) == 1.0);
    CHECK(e.model.cov()(1, 1) == 0.6);
    CHECK(e.model.cov()(0, 1) == 0.0);
    CHECK(e.match == doctest::Approx(0.08125946474888746).epsilon(1e-13));
    check_fit_invariants(mom, e);

    Draw draw(31);
    for (int t = 0; t < 100; ++t) {
        const Moments m{draw.vector(4), draw.spd(4)};
        CHECK(fit_diagonal(m).match >= -1e-12);  // Hadamard
    }
}

TEST_CASE("fit_fixed_mean_diagonal") {
    const Moments diag{vec({1, 2}), sym(2, {3, 0, 0, 0.5})};
    CHECK(std::abs(fit_fixed_mean_diagonal(diag, diag.mean).match) < 1e-15);

    const auto mom = testing::example1_moments();
    const auto e = fit_fixed_mean_diagonal(mom, vec({0, 0}));
    CHECK(e.model.cov()(0, 0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(e.model.cov()(1, 1) == doctest::Approx(16.6).epsilon(1e-15));
    CHECK(e.match == doctest::Approx(2.8926661708101546).epsilon(1e-13));
    check_fit_invariants(mom, e);

    Draw draw(32);
    for (int t = 0; t < 20; ++t) {
        const Moments m1{draw.vector(1), draw.spd(1)};
        const Vector fixed = draw.vector(1, 3.0);
        const auto d = fit_fixed_mean_diagonal(m1, fixed);
        const auto i = fit_fixed_mean_isotropic(m1, fixed);
        CHECK(d.match == i.match);
        CHECK(d.model.cov()(0, 0) == i.model.cov()(0, 0));
    }
}

TEST_CASE("fit dispatches by family") {
    const auto mom = testing::example1_moments();
    CHECK(fit(mom, FamilySpec(FamilyKind::Full)).match == 0.0);
    CHECK(fit(mom, FamilySpec(FamilyKind::FixedMeanIsotropic, vec({0, 0}))).match ==
          doctest::Approx(2.924436311859591).epsilon(1e-13));
    CHECK(fit(mom, FamilySpec(FamilyKind::FixedMean, vec({0, 0}))).match ==
          doctest::Approx(1.680936043938556).epsilon(1e-13));
    CHECK_THROWS_AS(fit(mom, FamilySpec(FamilyKind::FixedMean, vec({0, 0, 0}))), InvalidInput);
}

TEST_CASE("Sherman-Morrison: the inverse-form covariance equals the second moment about m") {
    Draw draw(33);
    for (int t = 0; t < 100; ++t) {
        const Eigen::Index n = 1 + t % 6;
        const Moments mom{draw.vector(n), draw.spd(n)};
        const Vector m = mom.mean + draw.vector(n, 1.0 + t % 5);
        const Vector d = m - mom.mean;
        const Matrix expected = mom.cov.matrix() + d * d.transpose();
        CHECK(testing::rel_frobenius(fixed_mean_covariance_via_inverse(mom, m).matrix(), expected) < 1e-8);
        const auto r = fit_fixed_mean(mom, m);
        CHECK(testing::rel_frobenius(r.model.cov().matrix(), expected) < 1e-15);
        CHECK(r.match == doctest::Approx(0.5 * std::log1p(mahalanobis_sq(d, mom.cov))).epsilon(1e-10));
    }
}

TEST_CASE("closed-form optima survive admissible perturbations") {
    Draw draw(34);
    for (int t = 0; t < 30; ++t) {
        const Eigen::Index n = 1 + t % 4;
        const Moments mom{draw.vector(n), draw.spd(n)};
        const Vector fixed = mom.mean + draw.vector(n);
        for (auto kind : kAllFamilies) {
            const auto opt = fit(mom, FamilySpec(kind, has_fixed_mean(kind) ? std::optional(fixed) : std::nullopt));
            for (int p = 0; p < 10; ++p) {
                const GaussianModel g = perturb(opt.model, kind, draw, 1e-3);
                CHECK(match_score(mom, g) >= opt.match - 1e-9);
            }
        }
    }
}

TEST_CASE("family nesting") {
    Draw draw(35);
    for (int t = 0; t < 200; ++t) {
        const Eigen::Index n = 1 + t % 6;
        const Moments mom{draw.vector(n), draw.spd(n)};
        const Vector fixed = mom.mean + draw.vector(n, 2.0);
        CHECK(nesting_violations(mom, fixed, 1e-9) == 0);

        const double full = fit_full(mom).match;
        const double fm = fit_fixed_mean(mom, fixed).match;
        const double fmd = fit_fixed_mean_diagonal(mom, fixed).match;
        const double fmi = fit_fixed_mean_isotropic(mom, fixed).match;
        const double dg = fit_diagonal(mom).match;
        const double iso = fit_isotropic(mom).match;
        CHECK(full <= fm + 1e-9);
        CHECK(fm <= fmd + 1e-9);
        CHECK(fmd <= fmi + 1e-9);
        CHECK(full <= dg + 1e-9);
        CHECK(dg <= iso + 1e-9);
    }
}

TEST_CASE("fixed-mean match increases along rays from the data mean") {
    Draw draw(36);
    for (int t = 0; t < 20; ++t) {
        const Eigen::Index n = 1 + t % 4;
        const Moments mom{draw.vector(n), draw.spd(n)};
        const Vector dir = draw.vector(n);
        double prev = fit_fixed_mean(mom, mom.mean).match;
        for (int s = 1; s <= 30; ++s) {
            const double cur = fit_fixed_mean(mom, mom.mean + 0.2 * s * dir).match;
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("diagonal families are equivariant under permutation and coordinate scaling") {
    Draw draw(37);
    for (int t = 0; t < 20; ++t) {
        const Eigen::Index n = 2 + t % 4;
        const Moments mom{draw.vector(n), draw.spd(n)};
        const Vector fixed = mom.mean + draw.vector(n);

        Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
        perm.setIdentity();
        for (Eigen::Index i = n - 1; i > 0; --i)
            std::swap(perm.indices()(i), perm.indices()(static_cast<Eigen::Index>(draw.uniform() * (i + 1))));
        Vector c(n);
        for (Eigen::Index i = 0; i < n; ++i) c(i) = 0.2 + 3.0 * draw.uniform();
        const Matrix a = c.asDiagonal() * Matrix(perm);

        const Moments mapped{a * mom.mean, SymMatrix(a * mom.cov.matrix() * a.transpose())};
        const Vector fixed_mapped = a * fixed;

        const auto d0 = fit_diagonal(mom);
        const auto d1 = fit_diagonal(mapped);
        CHECK(d1.match == doctest::Approx(d0.match).epsilon(1e-9));
        CHECK(testing::rel_frobenius(d1.model.cov().matrix(), a * d0.model.cov().matrix() * a.transpose()) < 1e-12);

        const auto f0 = fit_fixed_mean_diagonal(mom, fixed);
        const auto f1 = fit_fixed_mean_diagonal(mapped, fixed_mapped);
        CHECK(f1.match == doctest::Approx(f0.match).epsilon(1e-9));
        CHECK(testing::rel_frobenius(f1.model.cov().matrix(), a * f0.model.cov().matrix() * a.transpose()) < 1e-12);
        CHECK((f1.model.mean() - fixed_mapped).norm() == 0.0);
    }
}

TEST_CASE("whitening_transform") {
    const auto id = whitening_transform(GaussianModel(vec({0, 0}), SymMatrix::identity(2)));
    CHECK(id.apply(vec({0.25, -3})) == vec({0.25, -3}));

    const auto t = whitening_transform(GaussianModel(vec({1, 1}), sym(2, {4, 0, 0, 1})));
    const Vector y = t.apply(vec({3, 2}));
    CHECK(y(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(y(1) == doctest::Approx(1.0).epsilon(1e-15));

    Draw draw(38);
    for (int k = 0; k < 20; ++k) {
        const PointSet pts = draw.points(50 + 10 * k, 1 + k % 5);
        const Moments mom = estimate_moments(pts);
        const PointSet w = whitening_transform(fit_full(mom).model).apply(pts);
        const Moments wm = estimate_moments(w);
        CHECK(wm.mean.cwiseAbs().maxCoeff() < 1e-9);
        CHECK((wm.cov.matrix() - Matrix::Identity(pts.dim(), pts.dim())).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("family_report layout and values") {
    const auto mom = testing::example1_moments();
    const std::vector<Vector> means = {mom.mean, vec({0.5, 0.5}), vec({0, 0})};
    const auto rows = family_report(mom, means);
    REQUIRE(rows.size() == 3 + 3 * 3);

    std::size_t i = 0;
    for (auto kind : kAllFamilies) {
        const std::size_t copies = has_fixed_mean(kind) ? means.size() : 1;
        for (std::size_t j = 0; j < copies; ++j, ++i) {
            CHECK(rows[i].family == kind);
            CHECK(rows[i].mean_index.has_value() == has_fixed_mean(kind));
            if (rows[i].mean_index) CHECK(*rows[i].mean_index == j);
            const auto direct = fit(mom, FamilySpec(kind, has_fixed_mean(kind) ? std::optional(means[j]) : std::nullopt));
            CHECK(rows[i].match == direct.match);
            CHECK(rows[i].cross_entropy == direct.cross_entropy);
        }
    }
    CHECK(rows[1].match == 0.0);  // fixed mean at m_Y
    CHECK(rows[3].match == doctest::Approx(1.680936043938556).epsilon(1e-13));

    // Nesting along each mean.
    for (std::size_t j = 0; j < means.size(); ++j) {
        const double fm = rows[1 + j].match;
        const double fmi = rows[5 + j].match;
        const double fmd = rows[9 + j].match;
        CHECK(fm <= fmd + 1e-9);
        CHECK(fmd <= fmi + 1e-9);
    }
}
