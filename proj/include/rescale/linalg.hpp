#pragma once

#include <Eigen/Dense>

#include <span>

namespace rescale {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// One sample per row.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Real symmetric matrix. Entries are symmetrized as (M + Mᵀ)/2 on construction,
/// so `(i, j) == (j, i)` holds exactly.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(const Matrix& m);

    static SymMatrix identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }
    static SymMatrix diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

    [[nodiscard]] Eigen::Index dim() const noexcept { return m_.rows(); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
    [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
    [[nodiscard]] double trace() const { return m_.trace(); }

private:
    Matrix m_;
};

/// Eigenvalues sorted descending; column i of `eigenvectors` belongs to eigenvalue i.
/// The first component of each eigenvector with |x| > 1e-12 is positive.
struct EigenDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors;
};

/// Cyclic Jacobi eigensolver. Throws InvalidInput on non-finite entries and
/// ConvergenceError if 100 sweeps do not reduce the off-diagonal norm below
/// 1e-12 of the diagonal norm.
EigenDecomposition sym_eigen(const SymMatrix& m);

/// Eigenvalue floor used for the SPD test: 1e-10 · tr(M)/N.
double eigenvalue_floor(const SymMatrix& m);

/// U·diag(λᵗ)·Uᵀ. Negative t requires every eigenvalue above the floor,
/// otherwise SingularMatrix (carrying the smallest eigenvalue) is thrown.
SymMatrix spd_power(const SymMatrix& m, double t);
SymMatrix spd_power(const EigenDecomposition& eig, double t, double floor);

/// ln det of an SPD matrix from its spectrum; throws SingularMatrix below the floor.
double spd_log_det(const SymMatrix& m);
double spd_log_det(const EigenDecomposition& eig, double floor);

/// Minimum of tr(A·B) over symmetric A with spectrum `lambdas` (ascending),
/// attained by pairing the smallest λ with the largest eigenvalue of B.
double min_trace_assignment(std::span<const double> lambdas, const SymMatrix& b);

/// The minimizer of `min_trace_assignment`: A = U·diag(λ)·Uᵀ in B's eigenbasis.
SymMatrix aligned_assignment(std::span<const double> lambdas, const SymMatrix& b);

}  // namespace rescale
