#include "rescale/linalg.hpp"

#include "rescale/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace rescale {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kRelOffDiagTol = 1e-12;
constexpr double kSignThreshold = 1e-12;

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// One Jacobi rotation zeroing a(p, q); accumulates the rotation into v.
void rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
    const double apq = a(p, q);
    if (apq == 0.0) return;
    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        const double apk = a(p, k);
        const double aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double vkp = v(k, p);
        const double vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
    }
}

void check_spectrum(const EigenDecomposition& eig, double floor, const char* what) {
    const double smallest = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (!(smallest > floor)) {
        throw SingularMatrix(std::string(what) + ": smallest eigenvalue " + std::to_string(smallest) +
                                 " is at or below the floor " + std::to_string(floor),
                             smallest);
    }
}

std::vector<double> checked_ascending(std::span<const double> lambdas, Eigen::Index n) {
    if (static_cast<Eigen::Index>(lambdas.size()) != n)
        throw InvalidInput("min_trace_assignment: spectrum length does not match matrix dimension");
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        if (lambdas[i] < lambdas[i - 1])
            throw InvalidInput("min_trace_assignment: spectrum must be ascending");
    return {lambdas.begin(), lambdas.end()};
}

EigenDecomposition nonnegative_spectrum(const SymMatrix& b) {
    auto eig = sym_eigen(b);
    if (eig.eigenvalues.size() > 0 && eig.eigenvalues(eig.eigenvalues.size() - 1) < -1e-10)
        throw InvalidInput("min_trace_assignment: B has a negative eigenvalue");
    return eig;
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m) {
    if (m.rows() != m.cols()) throw InvalidInput("SymMatrix: matrix is not square");
    m_ = 0.5 * (m + m.transpose());
}

EigenDecomposition sym_eigen(const SymMatrix& m) {
    const Eigen::Index n = m.dim();
    if (!m.matrix().allFinite()) throw InvalidInput("sym_eigen: non-finite entries");

    Matrix a = m.matrix();
    Matrix v = Matrix::Identity(n, n);

    bool converged = false;
    for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
        const double off = off_diagonal_norm(a);
        const double diag = a.diagonal().norm();
        if (off <= kRelOffDiagTol * diag || off == 0.0) {
            converged = true;
            break;
        }
        if (sweep == kMaxSweeps) break;
        for (Eigen::Index p = 0; p + 1 < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
    if (!converged) throw ConvergenceError("sym_eigen: Jacobi sweeps did not converge");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

    EigenDecomposition out{Vector(n), Matrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.eigenvalues(k) = a(src, src);
        Vector col = v.col(src);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(col(i)) > kSignThreshold) {
                if (col(i) < 0.0) col = -col;
                break;
            }
        }
        out.eigenvectors.col(k) = col;
    }
    return out;
}

double eigenvalue_floor(const SymMatrix& m) {
    if (m.dim() == 0) return 0.0;
    return 1e-10 * (m.trace() / static_cast<double>(m.dim()));
}

SymMatrix spd_power(const EigenDecomposition& eig, double t, double floor) {
    const Eigen::Index n = eig.eigenvalues.size();
    Vector powered(n);
    if (t < 0.0) {
        check_spectrum(eig, floor, "spd_power");
        for (Eigen::Index i = 0; i < n; ++i) powered(i) = std::pow(eig.eigenvalues(i), t);
    } else {
        if (n > 0 && eig.eigenvalues(n - 1) < -std::abs(floor)) {
            const double smallest = eig.eigenvalues(n - 1);
            throw SingularMatrix("spd_power: matrix has a negative eigenvalue " + std::to_string(smallest),
                                 smallest);
        }
        for (Eigen::Index i = 0; i < n; ++i) powered(i) = std::pow(std::max(eig.eigenvalues(i), 0.0), t);
    }
    const Matrix& u = eig.eigenvectors;
    return SymMatrix(u * powered.asDiagonal() * u.transpose());
}

SymMatrix spd_power(const SymMatrix& m, double t) {
    if (t < 0.0 && !(m.trace() > 0.0))
        throw SingularMatrix("spd_power: trace is not positive", m.dim() > 0 ? m.matrix().diagonal().minCoeff() : 0.0);
    return spd_power(sym_eigen(m), t, eigenvalue_floor(m));
}

double spd_log_det(const EigenDecomposition& eig, double floor) {
    check_spectrum(eig, floor, "spd_log_det");
    return eig.eigenvalues.array().log().sum();
}

double spd_log_det(const SymMatrix& m) {
    if (!(m.trace() > 0.0))
        throw SingularMatrix("spd_log_det: trace is not positive", m.dim() > 0 ? m.matrix().diagonal().minCoeff() : 0.0);
    return spd_log_det(sym_eigen(m), eigenvalue_floor(m));
}

double min_trace_assignment(std::span<const double> lambdas, const SymMatrix& b) {
    const auto lam = checked_ascending(lambdas, b.dim());
    const auto eig = nonnegative_spectrum(b);
    double sum = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i) sum += lam[i] * eig.eigenvalues(static_cast<Eigen::Index>(i));
    return sum;
}

SymMatrix aligned_assignment(std::span<const double> lambdas, const SymMatrix& b) {
    const auto lam = checked_ascending(lambdas, b.dim());
    const auto eig = nonnegative_spectrum(b);
    const Vector d = Eigen::Map<const Vector>(lam.data(), static_cast<Eigen::Index>(lam.size()));
    return SymMatrix(eig.eigenvectors * d.asDiagonal() * eig.eigenvectors.transpose());
}

}  // namespace rescale
