#include "rescale/nelder_mead.hpp"

#include "rescale/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace rescale {

namespace {

struct Vertex {
    Vector x;
    double f;
};

double sanitize(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                             const NelderMeadOptions& options) {
    const Eigen::Index n = x0.size();
    if (n == 0) throw InvalidInput("nelder_mead: empty parameter vector");

    const double dn = static_cast<double>(std::max<Eigen::Index>(n, 2));
    const double reflect = 1.0;
    const double expand = 1.0 + 2.0 / dn;
    const double contract = 0.75 - 1.0 / (2.0 * dn);
    const double shrink = 1.0 - 1.0 / dn;

    NelderMeadResult result;
    auto eval = [&](const Vector& x) {
        ++result.evaluations;
        return sanitize(f(x));
    };

    std::vector<Vertex> simplex;
    simplex.reserve(static_cast<std::size_t>(n + 1));
    simplex.push_back({x0, eval(x0)});
    for (Eigen::Index i = 0; i < n; ++i) {
        Vector x = x0;
        x(i) += options.initial_step;
        simplex.push_back({x, eval(x)});
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    Vector centroid(n);

    while (true) {
        std::stable_sort(simplex.begin(), simplex.end(), by_value);
        const Vertex& best = simplex.front();
        const Vertex& worst = simplex.back();

        double x_spread = 0.0;
        for (const auto& v : simplex) x_spread = std::max(x_spread, (v.x - best.x).cwiseAbs().maxCoeff());
        const double f_spread = worst.f - best.f;
        const bool flat = f_spread <= options.f_tolerance * std::max(std::abs(best.f), 1.0);
        const bool tight = x_spread <= options.x_tolerance * (1.0 + best.x.cwiseAbs().maxCoeff());
        if (flat && tight) {
            result.converged = true;
            break;
        }
        if (result.iterations >= options.max_iterations) break;
        ++result.iterations;

        centroid.setZero();
        for (Eigen::Index i = 0; i < n; ++i) centroid += simplex[static_cast<std::size_t>(i)].x;
        centroid /= static_cast<double>(n);

        const double f_second_worst = simplex[static_cast<std::size_t>(n - 1)].f;
        const Vector xr = centroid + reflect * (centroid - worst.x);
        const double fr = eval(xr);

        if (fr < best.f) {
            const Vector xe = centroid + expand * (xr - centroid);
            const double fe = eval(xe);
            simplex.back() = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
            continue;
        }
        if (fr < f_second_worst) {
            simplex.back() = {xr, fr};
            continue;
        }
        if (fr < worst.f) {
            const Vector xc = centroid + contract * (xr - centroid);
            const double fc = eval(xc);
            if (fc <= fr) {
                simplex.back() = {xc, fc};
                continue;
            }
        } else {
            const Vector xc = centroid + contract * (worst.x - centroid);
            const double fc = eval(xc);
            if (fc < worst.f) {
                simplex.back() = {xc, fc};
                continue;
            }
        }
        const Vector anchor = simplex.front().x;
        for (std::size_t i = 1; i < simplex.size(); ++i) {
            simplex[i].x = anchor + shrink * (simplex[i].x - anchor);
            simplex[i].f = eval(simplex[i].x);
        }
    }

    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    result.x = simplex.front().x;
    result.value = simplex.front().f;
    return result;
}

}  // namespace rescale
