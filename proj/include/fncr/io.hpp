#pragma once

// On-disk formats:
//   images  binary PGM (P5), written 16-bit (maxval 65535, big-endian samples)
//           as round(clamp(v, 0, 1) * 65535); 8-bit files are accepted on read
//   masks   binary PBM (P4), 1 = sampled, rows padded to whole bytes
//   k-space "FNCR" | u32 n | n*n (re, im) f64 pairs, row-major, little-endian

#include "fncr/grid.hpp"

#include <filesystem>
#include <stdexcept>

namespace fncr {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_pgm(const std::filesystem::path& path, const Image& u);
Image read_pgm(const std::filesystem::path& path);

void write_pbm(const std::filesystem::path& path, const Mask& m);
Mask read_pbm(const std::filesystem::path& path);

void write_kspace(const std::filesystem::path& path, const KSpace& z);
KSpace read_kspace(const std::filesystem::path& path);

} // namespace fncr
