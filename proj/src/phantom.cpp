#include "fncr/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fncr {

namespace {

void require_phantom_size(std::size_t n)
{
    if (n < 32) throw std::invalid_argument("phantom: n must be >= 32");
}

} // namespace

const std::array<Ellipse, 10>& shepp_logan_ellipses()
{
    static const std::array<Ellipse, 10> table{{
        {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
        {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
        {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
        {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
        {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
        {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
        {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
        {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
        {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
        {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
    }};
    return table;
}

Image shepp_logan(std::size_t n)
{
    require_phantom_size(n);
    Image out(n);
    const double half = 0.5 * static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = (half - static_cast<double>(i)) / half;
        for (std::size_t j = 0; j < n; ++j) {
            const double x = (static_cast<double>(j) - half) / half;
            double v = 0.0;
            for (const Ellipse& e : shepp_logan_ellipses()) {
                const double phi = e.angle_deg * std::numbers::pi / 180.0;
                const double c = std::cos(phi);
                const double s = std::sin(phi);
                const double dx = x - e.center_x;
                const double dy = y - e.center_y;
                const double p = dx * c + dy * s;
                const double q = dy * c - dx * s;
                if (p * p / (e.semi_x * e.semi_x) + q * q / (e.semi_y * e.semi_y) <= 1.0) {
                    v += e.intensity;
                }
            }
            // Sums like 1 - 0.8 leave round-off residue; snap to the 1e-12 lattice.
            v = std::round(v * 1e12) / 1e12;
            out(i, j) = std::clamp(v, 0.0, 1.0);
        }
    }
    return out;
}

Image blocks_phantom(std::size_t n)
{
    require_phantom_size(n);
    Image out(n);
    const std::size_t e = n / 8;
    const std::size_t q = n / 4;
    // Outer frame [n/8, 7n/8)^2 at 0.3
    for (std::size_t i = e; i < n - e; ++i) {
        for (std::size_t j = e; j < n - e; ++j) out(i, j) = 0.3;
    }
    // Inner block rows [n/4, n/2), cols [n/4, 5n/8) at 0.7
    for (std::size_t i = q; i < n / 2; ++i) {
        for (std::size_t j = q; j < 5 * n / 8; ++j) out(i, j) = 0.7;
    }
    // Disk of radius n/8 centred at (5n/8, 5n/8) at 1.0
    const auto ci = static_cast<long>(5 * n / 8);
    const auto r = static_cast<long>(n / 8);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const long di = static_cast<long>(i) - ci;
            const long dj = static_cast<long>(j) - ci;
            if (di * di + dj * dj <= r * r) out(i, j) = 1.0;
        }
    }
    return out;
}

} // namespace fncr
