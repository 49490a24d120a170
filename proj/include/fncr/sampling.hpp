#pragma once

#include "fncr/grid.hpp"

#include <cstdint>
#include <string>

namespace fncr {

enum class MaskKind { radial, parallel, random };

MaskKind parse_mask_kind(const std::string& name);
std::string to_string(MaskKind kind);

struct MaskSpec {
    MaskKind kind = MaskKind::radial;
    std::size_t n = 256;
    std::size_t count = 12; // rays (radial) or lines (parallel)
    double rate = 0.25;     // random kind only
    std::uint64_t seed = 0; // random kind only

    void validate() const;
};

/// Builds a centered under-sampling mask; the DC sample is always set.
///  radial   : `count` diameters at angles k pi / count through DC, each sampled
///             every 1/8 pixel along the ray and rounded to the nearest pixel
///  parallel : `count` full rows at offsets round(k n / count) from the DC row
///  random   : independent Bernoulli(rate) per pixel from a seeded mt19937_64
Mask make_mask(const MaskSpec& spec);

/// 100 * (number of sampled locations) / n^2.
double sampling_ratio(const Mask& m);

/// z + delta ||z|| v with v a unit-norm complex Gaussian vector supported on the mask.
KSpace add_noise(const KSpace& z, const Mask& m, double delta, std::uint64_t seed);

} // namespace fncr
