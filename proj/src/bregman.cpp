#include "fncr/bregman.hpp"

#include "fncr/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fncr {

namespace {

void require_threshold(double threshold)
{
    if (!(threshold >= 0.0)) throw std::invalid_argument("shrinkage threshold must be >= 0");
}

// Relative-change test ||next - prev|| <= tau ||prev||. A zero previous iterate
// only counts as converged when the new one is zero as well.
bool relative_change_below(const Image& next, const Image& prev, double tau)
{
    const double denom = norm2(prev);
    const double diff = distance2(next, prev);
    if (denom == 0.0) return norm2(next) == 0.0;
    return diff <= tau * denom;
}

// Inner loop with the constant part c = 2e - z folded in:
//   X <- vhat - beta theta D^wT (D^w X + c)
SplitSolveResult iterate_splitting(const Image& vhat, const Weights& w, const GradientField& c,
                                   double step, double tau, std::size_t max_m, const Image& X0)
{
    const std::size_t n = vhat.n();
    Image X = X0;
    Image next(n);
    Image div(n);
    GradientField r(n);
    std::size_t m = 0;
    while (m < max_m) {
        weighted_grad_into(X, w, r);
        for (std::size_t k = 0; k < r.x.size(); ++k) {
            r.x[k] += c.x[k];
            r.y[k] += c.y[k];
        }
        weighted_div_into(r, w, div);
        for (std::size_t k = 0; k < next.size(); ++k) next[k] = vhat[k] - step * div[k];
        ++m;
        const bool done = relative_change_below(next, X, tau);
        std::swap(X, next);
        if (!all_finite(X)) throw std::runtime_error("splitting_solve: non-finite iterate");
        if (done) break;
    }
    return {std::move(X), m};
}

} // namespace

double soft(double v, double threshold)
{
    require_threshold(threshold);
    const double mag = std::max(std::abs(v) - threshold, 0.0);
    return v < 0.0 ? -mag : (v > 0.0 ? mag : 0.0);
}

double cut(double v, double threshold)
{
    require_threshold(threshold);
    return std::clamp(v, -threshold, threshold);
}

Image soft(const Image& v, double threshold)
{
    require_threshold(threshold);
    Image out(v.n());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = soft(v[k], threshold);
    return out;
}

Image cut(const Image& v, double threshold)
{
    require_threshold(threshold);
    Image out(v.n());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = cut(v[k], threshold);
    return out;
}

void SplitConfig::validate() const
{
    if (!(lambda >= 0.0)) throw std::invalid_argument("split config: lambda must be >= 0");
    if (!(beta > 0.0 && beta < 2.0)) throw std::invalid_argument("split config: beta must lie in (0, 2)");
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("split config: tau must lie in (0, 1)");
    if (max_outer_j < 1 || max_inner_m < 1) throw std::invalid_argument("split config: caps must be >= 1");
}

void require_theta_in_bound(double theta, double beta, const Weights& w)
{
    const double bound = 1.0 / (beta * laplacian_inf_norm(w));
    if (!(theta > 0.0 && theta < bound)) {
        throw std::domain_error("theta = " + std::to_string(theta) + " outside (0, " +
                                std::to_string(bound) + "): splitting iteration may diverge");
    }
}

SplitSolveResult splitting_solve(const Image& vhat, const Weights& w, const Image& e_x,
                                 const Image& e_y, const Image& zx, const Image& zy,
                                 const SplitConfig& cfg, const Image& X0)
{
    cfg.validate();
    require_same_n(vhat.n(), w.n(), "splitting_solve");
    require_same_n(vhat.n(), X0.n(), "splitting_solve");
    require_theta_in_bound(cfg.theta, cfg.beta, w);

    const std::size_t n = vhat.n();
    GradientField c(n);
    for (std::size_t k = 0; k < c.x.size(); ++k) {
        c.x[k] = 2.0 * e_x[k] - zx[k];
        c.y[k] = 2.0 * e_y[k] - zy[k];
    }
    return iterate_splitting(vhat, w, c, cfg.beta * cfg.theta, cfg.tau, cfg.max_inner_m, X0);
}

FastSplitResult fast_split(const Image& vhat, const Weights& w, const SplitConfig& cfg,
                           const SplitObserver& observe)
{
    cfg.validate();
    require_same_n(vhat.n(), w.n(), "fast_split");
    require_theta_in_bound(cfg.theta, cfg.beta, w);

    const std::size_t n = vhat.n();
    const double step = cfg.beta * cfg.theta;
    const double Lambda = cfg.lambda / cfg.theta;

    BregmanState state;
    state.U = vhat;
    GradientField e(n);
    GradientField g(n);
    GradientField c(n);
    Image& U = state.U;

    for (std::size_t j = 1; j <= cfg.max_outer_j; ++j) {
        weighted_grad_into(U, w, g);
        // The solve-first order starts from D = e = 0, i.e. c = 0 in the first sweep.
        if (cfg.order == BregmanOrder::update_then_solve || j > 1) {
            // z = D^w U + e;  e <- Cut(z);  D = Soft(z) = z - e;  c = e - D = 2e - z
            for (std::size_t k = 0; k < g.x.size(); ++k) {
                const double zx = g.x[k] + e.x[k];
                const double zy = g.y[k] + e.y[k];
                e.x[k] = std::clamp(zx, -Lambda, Lambda);
                e.y[k] = std::clamp(zy, -Lambda, Lambda);
                c.x[k] = 2.0 * e.x[k] - zx;
                c.y[k] = 2.0 * e.y[k] - zy;
            }
        }
        auto solved = iterate_splitting(vhat, w, c, step, cfg.tau, cfg.max_inner_m, U);
        state.total_m += solved.iterations;
        state.j = j;
        const bool done = relative_change_below(solved.X, U, cfg.tau);
        U = std::move(solved.X);
        if (observe) {
            // D = e - c
            GradientField d(n);
            for (std::size_t k = 0; k < d.x.size(); ++k) {
                d.x[k] = e.x[k] - c.x[k];
                d.y[k] = e.y[k] - c.y[k];
            }
            state.e_x = e.x;
            state.e_y = e.y;
            observe(state, d);
        }
        if (done) break;
    }
    return {std::move(state.U), state.total_m, state.j};
}

FastSplitResult fast_split(double lambda, double theta, double beta, const Image& vhat,
                           const Weights& w, double tau)
{
    SplitConfig cfg;
    cfg.lambda = lambda;
    cfg.theta = theta;
    cfg.beta = beta;
    cfg.tau = tau;
    return fast_split(vhat, w, cfg);
}

double split_functional(const Image& U, const Image& vhat, const Image& d_x, const Image& d_y,
                        const Weights& w, double lambda, double theta, double beta)
{
    const GradientField g = weighted_grad(U, w);
    double fit = 0.0, l1 = 0.0, coupling = 0.0;
    for (std::size_t k = 0; k < U.size(); ++k) {
        const double r = U[k] - vhat[k];
        fit += r * r;
        l1 += std::abs(d_x[k]) + std::abs(d_y[k]);
        const double cx = d_x[k] - g.x[k];
        const double cy = d_y[k] - g.y[k];
        coupling += cx * cx + cy * cy;
    }
    return fit / (2.0 * beta) + lambda * l1 + 0.5 * theta * coupling;
}

} // namespace fncr
