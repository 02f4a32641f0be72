#pragma once

#include "rescale/gaussmodel.hpp"
#include "rescale/ingest.hpp"

#include <cmath>

namespace testing {

using namespace rescale;

// Deterministic random inputs drawn from the library's counter generator.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    double normal() { return rng_.normal(k_++); }
    double uniform() { return rng_.uniform(k_++); }

    Vector vector(Eigen::Index n, double scale = 1.0) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * normal();
        return v;
    }

    Matrix matrix(Eigen::Index r, Eigen::Index c) {
        Matrix m(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j) m(i, j) = normal();
        return m;
    }

    // Well-conditioned SPD matrix.
    SymMatrix spd(Eigen::Index n) {
        const Matrix a = matrix(n, n);
        return SymMatrix(a * a.transpose() / static_cast<double>(n) + 0.3 * Matrix::Identity(n, n));
    }

    Matrix rotation(Eigen::Index n) {
        Eigen::HouseholderQR<Matrix> qr(matrix(n, n));
        Matrix q = qr.householderQ();
        const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index j = 0; j < n; ++j)
            if (r(j, j) < 0) q.col(j) = -q.col(j);
        return q;
    }

    PointSet points(Eigen::Index n, Eigen::Index dim) {
        const Matrix a = matrix(dim, dim);
        const Vector shift = vector(dim, 2.0);
        PointMatrix p(n, dim);
        for (Eigen::Index i = 0; i < n; ++i) p.row(i) = (a * vector(dim) + shift).transpose();
        return PointSet(p);
    }

private:
    CounterRng rng_;
    std::uint64_t k_ = 0;
};

inline double rel_frobenius(const Matrix& a, const Matrix& b) {
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

inline Moments example1_moments() {
    Matrix s(2, 2);
    s << 1.0, 0.3, 0.3, 0.6;
    Vector m(2);
    m << 3.0, 4.0;
    return Moments{m, SymMatrix(s)};
}

inline PointSet points_from(std::initializer_list<std::initializer_list<double>> rows) {
    PointMatrix p(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double v : r) p(i, j++) = v;
        ++i;
    }
    return PointSet(p);
}

inline Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

inline SymMatrix sym(Eigen::Index n, std::initializer_list<double> rowmajor) {
    Matrix m(n, n);
    auto it = rowmajor.begin();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = *it++;
    return SymMatrix(m);
}

}  // namespace testing
