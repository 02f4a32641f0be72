#include "rescale/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rescale {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string scatter_svg(const PointSet& points, int size_px) {
    const auto& p = points.points();
    const bool planar = p.cols() >= 2;

    // Symmetric extent around the origin, never smaller than the unit axes.
    double extent = 1.25;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        extent = std::max(extent, std::abs(p(i, 0)));
        if (planar) extent = std::max(extent, std::abs(p(i, 1)));
    }
    extent *= 1.05;

    const double half = size_px / 2.0;
    const double k = half / extent;
    auto sx = [&](double x) { return half + k * x; };
    auto sy = [&](double y) { return half - k * y; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(size_px) + "\" height=\"" +
           std::to_string(size_px) + "\" viewBox=\"0 0 " + std::to_string(size_px) + " " + std::to_string(size_px) +
           "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<g fill=\"#3366cc\" fill-opacity=\"0.5\">\n";
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        const double y = planar ? p(i, 1) : 0.0;
        svg += "<circle cx=\"" + num(sx(p(i, 0))) + "\" cy=\"" + num(sy(y)) + "\" r=\"1.5\"/>\n";
    }
    svg += "</g>\n";
    svg += "<g stroke=\"#cc2222\" stroke-width=\"2\">\n";
    svg += "<line x1=\"" + num(sx(0)) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" + num(sx(1)) + "\" y2=\"" + num(sy(0)) +
           "\"/>\n";
    svg += "<line x1=\"" + num(sx(0)) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" + num(sx(0)) + "\" y2=\"" + num(sy(1)) +
           "\"/>\n";
    svg += "</g>\n</svg>\n";
    return svg;
}

}  // namespace rescale
