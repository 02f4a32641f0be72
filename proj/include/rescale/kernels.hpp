#pragma once

// Data-parallel inner loops over the samples of a dataset.
//
// Every kernel has a serial reference and an OpenMP variant. Each output
// element is produced by exactly one thread with the same summation order as
// the serial loop, so both variants return bitwise-identical results for any
// thread count. The library calls the OpenMP variants; the serial ones are
// kept for tests and the benchmark.

#include "rescale/linalg.hpp"

namespace rescale::kernels {

struct SampleMoments {
    Vector mean;
    Matrix cov;  // divisor n
};

namespace serial {

SampleMoments moments(const PointMatrix& points);

/// ‖W·(yᵢ − shift)‖² for every row yᵢ.
Vector squared_norms(const PointMatrix& points, const Vector& shift, const Matrix& w);

/// Rows W·(yᵢ − shift).
PointMatrix affine(const PointMatrix& points, const Vector& shift, const Matrix& w);

}  // namespace serial

namespace omp {

SampleMoments moments(const PointMatrix& points);
Vector squared_norms(const PointMatrix& points, const Vector& shift, const Matrix& w);
PointMatrix affine(const PointMatrix& points, const Vector& shift, const Matrix& w);

}  // namespace omp

/// Left-to-right sum, so reductions over per-sample values do not depend on threading.
double ordered_sum(const Vector& v);

}  // namespace rescale::kernels
