#pragma once

#include "fncr/grid.hpp"

#include <array>

namespace fncr {

struct Ellipse {
    double intensity;
    double semi_x;
    double semi_y;
    double center_x;
    double center_y;
    double angle_deg;
};

/// The ten ellipses of the modified (high-contrast) Shepp-Logan phantom on [-1, 1]^2.
const std::array<Ellipse, 10>& shepp_logan_ellipses();

/// Additive ellipse rasterization on an n x n grid, clipped to [0, 1]. Row 0 is y = +1.
Image shepp_logan(std::size_t n);

/// Piecewise-constant test object: two nested rectangles and a disk, values in [0, 1].
Image blocks_phantom(std::size_t n);

} // namespace fncr
