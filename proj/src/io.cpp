#include "fncr/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace fncr {

namespace {

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

// Next header token, skipping whitespace and '#' comments.
std::string header_token(std::istream& in)
{
    std::string tok;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c) && c != '#') {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (c == '#') in.unget();
    if (tok.empty()) throw FormatError("truncated PNM header");
    // c is the single whitespace byte that separates the header from the raster.
    return tok;
}

std::size_t header_number(std::istream& in)
{
    const std::string tok = header_token(in);
    if (!std::all_of(tok.begin(), tok.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        throw FormatError("malformed PNM header field '" + tok + "'");
    }
    return std::stoul(tok);
}

std::size_t square_side(std::size_t width, std::size_t height)
{
    if (width != height || width < 2) {
        throw FormatError("expected a square raster of side >= 2, got " + std::to_string(width) + "x" +
                          std::to_string(height));
    }
    return width;
}

void read_exact(std::istream& in, char* dst, std::size_t bytes)
{
    in.read(dst, static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes) throw FormatError("truncated payload");
}

constexpr std::array<char, 4> kspace_magic{'F', 'N', 'C', 'R'};

void put_le(std::ostream& out, std::uint64_t v, int bytes)
{
    for (int b = 0; b < bytes; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint64_t get_le(const unsigned char* p, int bytes)
{
    std::uint64_t v = 0;
    for (int b = 0; b < bytes; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return v;
}

} // namespace

void write_pgm(const std::filesystem::path& path, const Image& u)
{
    auto out = open_out(path);
    out << "P5\n" << u.n() << ' ' << u.n() << "\n65535\n";
    std::vector<char> raster(2 * u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double v = std::clamp(u[k], 0.0, 1.0);
        const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
        raster[2 * k] = static_cast<char>(q >> 8);
        raster[2 * k + 1] = static_cast<char>(q & 0xff);
    }
    out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

Image read_pgm(const std::filesystem::path& path)
{
    auto in = open_in(path);
    if (header_token(in) != "P5") throw FormatError("'" + path.string() + "' is not a binary PGM (P5)");
    const std::size_t width = header_number(in);
    const std::size_t height = header_number(in);
    const std::size_t maxval = header_number(in);
    if (maxval < 1 || maxval > 65535) throw FormatError("PGM maxval out of range");
    const std::size_t n = square_side(width, height);

    const std::size_t bps = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raster(n * n * bps);
    read_exact(in, reinterpret_cast<char*>(raster.data()), raster.size());

    Image u(n);
    const double scale = 1.0 / static_cast<double>(maxval);
    for (std::size_t k = 0; k < u.size(); ++k) {
        const std::size_t q = bps == 2 ? (std::size_t{raster[2 * k]} << 8) | raster[2 * k + 1] : raster[k];
        u[k] = static_cast<double>(q) * scale;
    }
    return u;
}

void write_pbm(const std::filesystem::path& path, const Mask& m)
{
    auto out = open_out(path);
    const std::size_t n = m.n();
    out << "P4\n" << n << ' ' << n << '\n';
    const std::size_t row_bytes = (n + 7) / 8;
    std::vector<char> row(row_bytes);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(row.begin(), row.end(), 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (m(i, j)) row[j / 8] = static_cast<char>(row[j / 8] | (0x80 >> (j % 8)));
        }
        out.write(row.data(), static_cast<std::streamsize>(row_bytes));
    }
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

Mask read_pbm(const std::filesystem::path& path)
{
    auto in = open_in(path);
    if (header_token(in) != "P4") throw FormatError("'" + path.string() + "' is not a binary PBM (P4)");
    const std::size_t width = header_number(in);
    const std::size_t height = header_number(in);
    const std::size_t n = square_side(width, height);

    const std::size_t row_bytes = (n + 7) / 8;
    std::vector<unsigned char> raster(row_bytes * n);
    read_exact(in, reinterpret_cast<char*>(raster.data()), raster.size());
    Mask m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (raster[i * row_bytes + j / 8] & (0x80 >> (j % 8))) m.set(i, j);
        }
    }
    return m;
}

void write_kspace(const std::filesystem::path& path, const KSpace& z)
{
    auto out = open_out(path);
    out.write(kspace_magic.data(), kspace_magic.size());
    put_le(out, static_cast<std::uint32_t>(z.n()), 4);
    for (const auto& v : z) {
        put_le(out, std::bit_cast<std::uint64_t>(v.real()), 8);
        put_le(out, std::bit_cast<std::uint64_t>(v.imag()), 8);
    }
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

KSpace read_kspace(const std::filesystem::path& path)
{
    auto in = open_in(path);
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (in.gcount() != 4 || magic != kspace_magic) throw FormatError("k-space magic mismatch");
    std::array<unsigned char, 4> nb{};
    read_exact(in, reinterpret_cast<char*>(nb.data()), nb.size());
    const auto n = static_cast<std::size_t>(get_le(nb.data(), 4));
    if (n < 2 || n > 65536) throw FormatError("k-space side out of range");

    std::vector<unsigned char> payload(n * n * 16);
    read_exact(in, reinterpret_cast<char*>(payload.data()), payload.size());
    KSpace z(n);
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double re = std::bit_cast<double>(get_le(&payload[16 * k], 8));
        const double im = std::bit_cast<double>(get_le(&payload[16 * k + 8], 8));
        z[k] = {re, im};
    }
    return z;
}

} // namespace fncr
