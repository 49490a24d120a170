#pragma once

// Seeded random fixtures shared by the test binaries.

#include "fncr/grid.hpp"

#include <cmath>
#include <random>

namespace fncr::test {

inline Image random_image(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> d(lo, hi);
    Image u(n);
    for (auto& v : u) v = d(rng);
    return u;
}

inline Weights random_weights(std::size_t n, std::mt19937_64& rng, double lo = 0.05, double hi = 2.0)
{
    return {random_image(n, rng, lo, hi), random_image(n, rng, lo, hi)};
}

inline GradientField random_field(std::size_t n, std::mt19937_64& rng)
{
    return {random_image(n, rng), random_image(n, rng)};
}

inline KSpace random_kspace(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> d;
    KSpace z(n);
    for (auto& v : z) v = {d(rng), d(rng)};
    return z;
}

inline Mask random_mask(std::size_t n, std::mt19937_64& rng, double rate)
{
    std::bernoulli_distribution b(rate);
    Mask m(n);
    for (std::size_t k = 0; k < m.size(); ++k) m.set(k, b(rng));
    return m;
}

inline double max_abs_diff(const Image& a, const Image& b)
{
    double e = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]));
    return e;
}

// Real inner product of complex grids, Re sum conj(a) b.
inline double real_dot(const KSpace& a, const KSpace& b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (std::conj(a[k]) * b[k]).real();
    return s;
}

} // namespace fncr::test
