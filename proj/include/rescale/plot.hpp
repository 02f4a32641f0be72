#pragma once

#include "rescale/gaussmodel.hpp"

#include <string>

namespace rescale {

/// Static SVG scatter of the first two coordinates (the second is taken as 0
/// for 1-D data), with the unit axes drawn at the origin.
std::string scatter_svg(const PointSet& points, int size_px = 480);

}  // namespace rescale
