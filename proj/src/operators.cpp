#include "fncr/operators.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace fncr {

namespace {

// FFTW planning is not thread-safe, execution with the new-array interface is.
// Plans are created once per (n, direction) and shared.
class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, int sign)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<std::complex<double>> in(n * n), out(n * n);
        const int ni = static_cast<int>(n);
        fftw_plan plan = fftw_plan_dft_2d(ni, ni, reinterpret_cast<fftw_complex*>(in.data()),
                                          reinterpret_cast<fftw_complex*>(out.data()), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache()
{
    static PlanCache cache;
    return cache;
}

void execute(std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out,
             std::size_t n, int sign)
{
    fftw_execute_dft(plan_cache().get(n, sign), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

// native FFT index p <-> centered index (p + n/2) mod n
inline std::size_t to_centered(std::size_t p, std::size_t n) { return (p + n / 2) % n; }

} // namespace

KSpace forward(const Image& u, const Mask& m)
{
    require_same_n(u.n(), m.n(), "forward");
    const std::size_t n = u.n();
    std::vector<std::complex<double>> in(u.begin(), u.end());
    std::vector<std::complex<double>> out(n * n);
    execute(in, out, n, FFTW_FORWARD);

    const double scale = 1.0 / static_cast<double>(n);
    KSpace z(n);
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t qi = to_centered(p, n);
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t qj = to_centered(r, n);
            if (m(qi, qj)) z(qi, qj) = out[p * n + r] * scale;
        }
    }
    return z;
}

Image adjoint(const KSpace& z, const Mask& m)
{
    require_same_n(z.n(), m.n(), "adjoint");
    const std::size_t n = z.n();
    std::vector<std::complex<double>> in(n * n), out(n * n);
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t qi = to_centered(p, n);
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t qj = to_centered(r, n);
            if (m(qi, qj)) in[p * n + r] = z(qi, qj);
        }
    }
    execute(in, out, n, FFTW_BACKWARD);

    const double scale = 1.0 / static_cast<double>(n);
    Image u(n);
    for (std::size_t k = 0; k < n * n; ++k) u[k] = out[k].real() * scale;
    return u;
}

GradientField grad(const Image& u)
{
    const std::size_t n = u.n();
    GradientField g(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double c = u(i, j);
            g.x(i, j) = c - (j > 0 ? u(i, j - 1) : 0.0);
            g.y(i, j) = c - (i > 0 ? u(i - 1, j) : 0.0);
        }
    }
    return g;
}

Image grad_adjoint(const GradientField& g)
{
    require_same_n(g.x.n(), g.y.n(), "grad_adjoint");
    const std::size_t n = g.n();
    Image out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = g.x(i, j) + g.y(i, j);
            if (j + 1 < n) v -= g.x(i, j + 1);
            if (i + 1 < n) v -= g.y(i + 1, j);
            out(i, j) = v;
        }
    }
    return out;
}

void weighted_grad_into(const Image& u, const Weights& w, GradientField& out)
{
    require_same_n(u.n(), w.n(), "weighted_grad");
    const std::size_t n = u.n();
    if (out.x.n() != n) out = GradientField(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double c = u(i, j);
            out.x(i, j) = w.x(i, j) * (c - (j > 0 ? u(i, j - 1) : 0.0));
            out.y(i, j) = w.y(i, j) * (c - (i > 0 ? u(i - 1, j) : 0.0));
        }
    }
}

GradientField weighted_grad(const Image& u, const Weights& w)
{
    GradientField g;
    weighted_grad_into(u, w, g);
    return g;
}

void weighted_div_into(const GradientField& g, const Weights& w, Image& out)
{
    require_same_n(g.n(), w.n(), "weighted_div");
    const std::size_t n = g.n();
    if (out.n() != n) out = Image(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = w.x(i, j) * g.x(i, j) + w.y(i, j) * g.y(i, j);
            if (j + 1 < n) v -= w.x(i, j + 1) * g.x(i, j + 1);
            if (i + 1 < n) v -= w.y(i + 1, j) * g.y(i + 1, j);
            out(i, j) = v;
        }
    }
}

Image weighted_div(const GradientField& g, const Weights& w)
{
    Image out;
    weighted_div_into(g, w, out);
    return out;
}

Image weighted_laplacian_apply(const Image& u, const Weights& w)
{
    Image out = weighted_div(weighted_grad(u, w), w);
    for (double& v : out) v = -v;
    return out;
}

double laplacian_inf_norm(const Weights& w)
{
    const std::size_t n = w.n();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            // Diagonal collects every coupling term of pixel k; an off-diagonal
            // entry exists only when the neighbor is inside the grid.
            const double ax = w.x(i, j) * w.x(i, j);
            const double ey = w.y(i, j) * w.y(i, j);
            double diag = ax + ey;
            double off = (j > 0 ? ax : 0.0) + (i > 0 ? ey : 0.0);
            if (j + 1 < n) {
                const double a1 = w.x(i, j + 1) * w.x(i, j + 1);
                diag += a1;
                off += a1;
            }
            if (i + 1 < n) {
                const double e1 = w.y(i + 1, j) * w.y(i + 1, j);
                diag += e1;
                off += e1;
            }
            best = std::max(best, diag + off);
        }
    }
    return best;
}

} // namespace fncr
