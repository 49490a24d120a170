#include "fncr/grid.hpp"

#include <cmath>

namespace fncr {

double dot(const Image& a, const Image& b)
{
    require_same_n(a.n(), b.n(), "dot");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm2(const Image& a)
{
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

double norm2(const KSpace& a)
{
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    return std::sqrt(s);
}

double norm1(const Image& a)
{
    double s = 0.0;
    for (double v : a) s += std::abs(v);
    return s;
}

double distance2(const Image& a, const Image& b)
{
    require_same_n(a.n(), b.n(), "distance2");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

bool all_finite(const Image& a)
{
    for (double v : a) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

} // namespace fncr
