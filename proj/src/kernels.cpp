#include "rescale/kernels.hpp"

namespace rescale::kernels {

namespace {

// Column-major copy so each coordinate is contiguous.
Matrix by_columns(const PointMatrix& points) { return Matrix(points); }

double column_mean(const Matrix& cols, Eigen::Index j) {
    return cols.col(j).sum() / static_cast<double>(cols.rows());
}

double cov_entry(const Matrix& centered, Eigen::Index i, Eigen::Index j) {
    return centered.col(i).dot(centered.col(j)) / static_cast<double>(centered.rows());
}

double row_squared_norm(const PointMatrix& points, Eigen::Index r, const Vector& shift, const Matrix& w) {
    const Vector d = points.row(r).transpose() - shift;
    return (w * d).squaredNorm();
}

}  // namespace

double ordered_sum(const Vector& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += v(i);
    return s;
}

namespace serial {

SampleMoments moments(const PointMatrix& points) {
    Matrix cols = by_columns(points);
    const Eigen::Index dim = cols.cols();
    SampleMoments out{Vector(dim), Matrix(dim, dim)};
    for (Eigen::Index j = 0; j < dim; ++j) out.mean(j) = column_mean(cols, j);
    cols.rowwise() -= out.mean.transpose();
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = i; j < dim; ++j) {
            const double c = cov_entry(cols, i, j);
            out.cov(i, j) = c;
            out.cov(j, i) = c;
        }
    }
    return out;
}

Vector squared_norms(const PointMatrix& points, const Vector& shift, const Matrix& w) {
    Vector out(points.rows());
    for (Eigen::Index r = 0; r < points.rows(); ++r) out(r) = row_squared_norm(points, r, shift, w);
    return out;
}

PointMatrix affine(const PointMatrix& points, const Vector& shift, const Matrix& w) {
    PointMatrix out(points.rows(), w.rows());
    for (Eigen::Index r = 0; r < points.rows(); ++r)
        out.row(r) = (w * (points.row(r).transpose() - shift)).transpose();
    return out;
}

}  // namespace serial

namespace omp {

SampleMoments moments(const PointMatrix& points) {
    Matrix cols = by_columns(points);
    const Eigen::Index dim = cols.cols();
    SampleMoments out{Vector(dim), Matrix(dim, dim)};

#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < dim; ++j) out.mean(j) = column_mean(cols, j);

#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < dim; ++j) cols.col(j).array() -= out.mean(j);

#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = i; j < dim; ++j) {
            const double c = cov_entry(cols, i, j);
            out.cov(i, j) = c;
            out.cov(j, i) = c;
        }
    }
    return out;
}

Vector squared_norms(const PointMatrix& points, const Vector& shift, const Matrix& w) {
    Vector out(points.rows());
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < points.rows(); ++r) out(r) = row_squared_norm(points, r, shift, w);
    return out;
}

PointMatrix affine(const PointMatrix& points, const Vector& shift, const Matrix& w) {
    PointMatrix out(points.rows(), w.rows());
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < points.rows(); ++r)
        out.row(r) = (w * (points.row(r).transpose() - shift)).transpose();
    return out;
}

}  // namespace omp

}  // namespace rescale::kernels
