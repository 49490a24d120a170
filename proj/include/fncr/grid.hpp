#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fncr {

// Square n x n grid stored row-major: element (i, j) lives at i * n + j,
// i is the row (y direction), j the column (x direction).
template <class T>
class Grid {
public:
    using value_type = T;

    Grid() = default;
    explicit Grid(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}
    Grid(std::size_t n, std::vector<T> data) : n_(n), data_(std::move(data))
    {
        if (data_.size() != n_ * n_) {
            throw std::invalid_argument("grid: payload size does not match n*n");
        }
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
    T& operator[](std::size_t k) noexcept { return data_[k]; }
    const T& operator[](std::size_t k) const noexcept { return data_[k]; }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }
    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

/// Real-valued image, the reconstruction unknown.
using Image = Grid<double>;

/// Complex k-space samples in centered (DC at n/2, n/2) coordinates.
using KSpace = Grid<std::complex<double>>;

/// Boolean under-sampling pattern in centered coordinates.
class Mask {
public:
    Mask() = default;
    explicit Mask(std::size_t n, bool fill = false) : bits_(n, fill ? 1 : 0) {}

    std::size_t n() const noexcept { return bits_.n(); }
    std::size_t size() const noexcept { return bits_.size(); }

    bool operator()(std::size_t i, std::size_t j) const noexcept { return bits_(i, j) != 0; }
    bool operator[](std::size_t k) const noexcept { return bits_[k] != 0; }
    void set(std::size_t i, std::size_t j, bool v = true) noexcept { bits_(i, j) = v ? 1 : 0; }
    void set(std::size_t k, bool v = true) noexcept { bits_[k] = v ? 1 : 0; }

    std::size_t count() const noexcept
    {
        std::size_t c = 0;
        for (auto b : bits_) c += b;
        return c;
    }

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    Grid<std::uint8_t> bits_;
};

/// Backward-difference gradient (u_x, u_y).
struct GradientField {
    Image x;
    Image y;

    GradientField() = default;
    explicit GradientField(std::size_t n) : x(n), y(n) {}
    GradientField(Image gx, Image gy) : x(std::move(gx)), y(std::move(gy)) {}

    std::size_t n() const noexcept { return x.n(); }
};

/// Reweighting coefficients (w^x, w^y); strictly positive.
struct Weights {
    Image x;
    Image y;

    Weights() = default;
    Weights(Image wx, Image wy) : x(std::move(wx)), y(std::move(wy)) {}

    static Weights constant(std::size_t n, double v) { return {Image(n, v), Image(n, v)}; }

    std::size_t n() const noexcept { return x.n(); }
};

// Precondition helper shared by the operator modules.
inline void require_same_n(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                                    " vs " + std::to_string(b) + ")");
    }
}

// Small dense helpers on images.
double dot(const Image& a, const Image& b);
double norm2(const Image& a);
double norm2(const KSpace& a);
double norm1(const Image& a);
double distance2(const Image& a, const Image& b);
bool all_finite(const Image& a);

} // namespace fncr
