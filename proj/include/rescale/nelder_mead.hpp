#pragma once

#include "rescale/linalg.hpp"

#include <functional>

namespace rescale {

struct NelderMeadOptions {
    int max_iterations = 5000;
    double f_tolerance = 1e-10;  // simplex value spread, relative to max(|f_best|, 1)
    double x_tolerance = 1e-5;   // simplex diameter (∞-norm), scaled by 1 + ‖x_best‖∞
    double initial_step = 0.5;
};

struct NelderMeadResult {
    Vector x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;  // false when the iteration cap stopped the search
};

/// Downhill simplex with dimension-adaptive coefficients (reflection 1,
/// expansion 1 + 2/n, contraction 3/4 − 1/(2n), shrink 1 − 1/n; the classic
/// 1, 2, ½, ½ for n ≤ 2). NaN objective values rank as +∞.
NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                             const NelderMeadOptions& options = {});

}  // namespace rescale
