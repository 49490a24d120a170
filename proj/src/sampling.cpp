#include "fncr/sampling.hpp"

#include "fncr/operators.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fncr {

MaskKind parse_mask_kind(const std::string& name)
{
    if (name == "radial") return MaskKind::radial;
    if (name == "parallel") return MaskKind::parallel;
    if (name == "random") return MaskKind::random;
    throw std::invalid_argument("unknown mask kind '" + name + "' (radial|parallel|random)");
}

std::string to_string(MaskKind kind)
{
    switch (kind) {
    case MaskKind::radial: return "radial";
    case MaskKind::parallel: return "parallel";
    case MaskKind::random: return "random";
    }
    return "unknown";
}

void MaskSpec::validate() const
{
    if (n < 2) throw std::invalid_argument("mask: n must be >= 2");
    switch (kind) {
    case MaskKind::radial:
        if (count < 1) throw std::invalid_argument("mask: rays must be >= 1");
        break;
    case MaskKind::parallel:
        if (count < 1 || count > n) throw std::invalid_argument("mask: lines must lie in [1, n]");
        break;
    case MaskKind::random:
        if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("mask: rate must lie in (0, 1]");
        break;
    }
}

namespace {

Mask radial_mask(std::size_t n, std::size_t rays)
{
    Mask m(n);
    const double c = static_cast<double>(dc_index(n));
    const double reach = static_cast<double>(n);
    const long steps = static_cast<long>(reach * 8.0);
    for (std::size_t r = 0; r < rays; ++r) {
        const double angle = std::numbers::pi * static_cast<double>(r) / static_cast<double>(rays);
        const double dx = std::cos(angle);
        const double dy = std::sin(angle);
        for (long s = -steps; s <= steps; ++s) {
            const double t = static_cast<double>(s) / 8.0;
            const double row = std::floor(c - t * dy + 0.5);
            const double col = std::floor(c + t * dx + 0.5);
            if (row < 0.0 || col < 0.0 || row >= reach || col >= reach) continue;
            m.set(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
        }
    }
    return m;
}

Mask parallel_mask(std::size_t n, std::size_t lines)
{
    Mask m(n);
    const long c = static_cast<long>(dc_index(n));
    const long ln = static_cast<long>(lines);
    const double spacing = static_cast<double>(n) / static_cast<double>(lines);
    const long nn = static_cast<long>(n);
    for (long k = -(ln / 2); k < ln - ln / 2; ++k) {
        const long offset = std::lround(static_cast<double>(k) * spacing);
        const long row = ((c + offset) % nn + nn) % nn;
        for (std::size_t j = 0; j < n; ++j) m.set(static_cast<std::size_t>(row), j);
    }
    return m;
}

Mask random_mask(std::size_t n, double rate, std::uint64_t seed)
{
    Mask m(n);
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < n * n; ++k) {
        // top 53 bits -> uniform [0, 1), identical on every platform
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < rate) m.set(k);
    }
    return m;
}

} // namespace

Mask make_mask(const MaskSpec& spec)
{
    spec.validate();
    Mask m;
    switch (spec.kind) {
    case MaskKind::radial: m = radial_mask(spec.n, spec.count); break;
    case MaskKind::parallel: m = parallel_mask(spec.n, spec.count); break;
    case MaskKind::random: m = random_mask(spec.n, spec.rate, spec.seed); break;
    }
    m.set(dc_index(spec.n), dc_index(spec.n));
    return m;
}

double sampling_ratio(const Mask& m)
{
    return 100.0 * static_cast<double>(m.count()) / static_cast<double>(m.size());
}

KSpace add_noise(const KSpace& z, const Mask& m, double delta, std::uint64_t seed)
{
    require_same_n(z.n(), m.n(), "add_noise");
    if (!(delta >= 0.0)) throw std::invalid_argument("add_noise: delta must be >= 0");
    if (delta == 0.0) return z;
    const double scale = norm2(z);
    if (scale == 0.0) throw std::invalid_argument("add_noise: zero data, noise scale undefined");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    KSpace v(z.n());
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!m[k]) continue;
        const double re = normal(rng);
        const double im = normal(rng);
        v[k] = {re, im};
    }
    const double vn = norm2(v);
    KSpace out = z;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += delta * scale / vn * v[k];
    return out;
}

} // namespace fncr
