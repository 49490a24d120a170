#include "fncr/driver.hpp"

#include "fncr/metrics.hpp"
#include "fncr/operators.hpp"
#include "fncr/penalty.hpp"

#include <cmath>
#include <stdexcept>

namespace fncr {

namespace {

// Phi^T (z - Phi u)
Image data_gradient(const Image& u, const KSpace& z, const Mask& m)
{
    KSpace r = forward(u, m);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = m[k] ? z[k] - r[k] : 0.0;
    return adjoint(r, m);
}

double relative_change(const Image& next, const Image& prev)
{
    const double denom = norm2(prev);
    const double diff = distance2(next, prev);
    if (denom == 0.0) return diff == 0.0 ? 0.0 : INFINITY;
    return diff / denom;
}

KSpace masked_copy(const KSpace& z, const Mask& m)
{
    KSpace out = z;
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (!m[k]) out[k] = 0.0;
    }
    return out;
}

} // namespace

void FncrConfig::validate() const
{
    if (!(r0 > 0.0)) throw std::invalid_argument("fncr config: r0 must be > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("fncr config: gamma must be > 0");
    if (!(beta > 0.0 && beta < 2.0)) throw std::invalid_argument("fncr config: beta must lie in (0, 2)");
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("fncr config: tau must lie in (0, 1)");
    if (!(mu_factor > 0.0 && mu_factor < 1.0)) {
        throw std::invalid_argument("fncr config: mu_factor must lie in (0, 1)");
    }
    if (!(theta_safety > 0.0 && theta_safety < 1.0)) {
        throw std::invalid_argument("fncr config: theta_safety must lie in (0, 1)");
    }
    if (h_max < 1) throw std::invalid_argument("fncr config: h_max must be >= 1");
    if (!(outer_tol > 0.0)) throw std::invalid_argument("fncr config: outer_tol must be > 0");
    if (max_fb_total < 1 || max_fb_per_solve < 2 || max_outer_j < 1 || max_inner_m < 1) {
        throw std::invalid_argument("fncr config: iteration caps too small");
    }
}

InitialState init_state(const KSpace& z, const Mask& m, const FncrConfig& cfg)
{
    require_same_n(z.n(), m.n(), "init_state");
    cfg.validate();
    InitialState s;
    s.u0 = adjoint(z, m);
    s.lambda0 = cfg.r0 * norm1(s.u0);
    const GradientField g = grad(s.u0);
    s.mu0 = norm1(g.x) + norm1(g.y);
    if (!(s.lambda0 > 0.0) || !(s.mu0 > 0.0)) {
        throw std::invalid_argument("init_state: data vanish on the mask, lambda0 or mu0 would be 0");
    }
    s.weights = Weights::constant(z.n(), 1.0);
    return s;
}

double theta_from_weights(const Weights& w, double beta, double safety)
{
    const double norm = laplacian_inf_norm(w);
    if (!(norm > 0.0)) throw std::domain_error("theta_from_weights: ||Delta^w||_inf is zero");
    return safety / (beta * norm);
}

FistaStep fista_step(double t_prev)
{
    const double t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_prev * t_prev));
    return {t, (t_prev - 1.0) / t};
}

FbResult fb_solve(const KSpace& z, const Mask& m, const Weights& w, const FbSettings& s,
                  const Image& u_start, bool keep_iterates)
{
    require_same_n(z.n(), u_start.n(), "fb_solve");
    SplitConfig split;
    split.lambda = s.lambda;
    split.theta = s.theta;
    split.beta = s.beta;
    split.tau = s.tau;
    split.max_outer_j = s.max_outer_j;
    split.max_inner_m = s.max_inner_m;

    FbResult out;
    Image u_hat = u_start;
    Image u_tilde_prev = u_start;
    double t = 1.0;
    double delta_prev = weighted_l1(grad(u_hat), w);

    for (std::size_t n = 1; n <= s.max_iters; ++n) {
        Image v = data_gradient(u_hat, z, m);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = u_hat[k] + s.beta * v[k];

        FastSplitResult backward = fast_split(v, w, split);
        out.inner_iters += backward.total_m;
        ++out.split_calls;

        const FistaStep step = fista_step(t);
        t = step.t;
        for (std::size_t k = 0; k < u_hat.size(); ++k) {
            u_hat[k] = backward.U[k] + step.alpha * (backward.U[k] - u_tilde_prev[k]);
        }
        u_tilde_prev = std::move(backward.U);
        out.iterations = n;
        if (!all_finite(u_hat)) throw std::runtime_error("fb_solve: non-finite iterate (check beta, theta)");
        if (keep_iterates) out.iterates.push_back(u_hat);

        const double delta = weighted_l1(grad(u_hat), w);
        const double diff = s.absolute_stop ? std::abs(delta - delta_prev) : delta - delta_prev;
        if (n >= 2 && diff < s.gamma * s.lambda) break;
        delta_prev = delta;
    }
    out.u = std::move(u_hat);
    return out;
}

double lambda_update(double lambda_h, double P_h, double P_hm1)
{
    if (P_hm1 == 0.0) throw std::domain_error("lambda_update: previous objective is zero");
    return lambda_h * P_h / P_hm1;
}

FncrResult fncr_run(const KSpace& z_in, const Mask& m, const FncrConfig& cfg,
                    const std::optional<Image>& truth)
{
    const KSpace z = masked_copy(z_in, m);
    InitialState init = init_state(z, m, cfg);
    if (truth) require_same_n(truth->n(), z.n(), "fncr_run");

    FncrResult result;
    FncrTrace& trace = result.trace;
    trace.mu0 = init.mu0;
    trace.lambda0 = init.lambda0;

    Image u = std::move(init.u0);
    Weights w = std::move(init.weights);
    double lambda = init.lambda0;
    double mu = init.mu0;

    FbSettings fb;
    fb.beta = cfg.beta;
    fb.tau = cfg.tau;
    fb.gamma = cfg.gamma;
    fb.max_iters = cfg.max_fb_per_solve;
    fb.max_outer_j = cfg.max_outer_j;
    fb.max_inner_m = cfg.max_inner_m;
    fb.absolute_stop = cfg.absolute_fb_stop;

    for (std::size_t ell = 0;; ++ell) {
        if (ell > 0) {
            mu *= cfg.mu_factor;
            // Re-linearize the penalty at the current iterate for the new mu.
            w = compute_weights(grad(u), mu);
        }
        const Image u_ell_start = u;
        double P_prev = objective_nonconvex(u, z, m, {mu, lambda});
        ContinuationRecord rec;
        rec.ell = ell;
        rec.mu = mu;
        bool budget_exhausted = false;
        bool weights_vanished = false;

        for (std::size_t h = 0; h < cfg.h_max; ++h) {
            // Tiny mu underflows psi' everywhere; the surrogate then has no
            // regularizer left and theta is undefined.
            if (laplacian_inf_norm(w) == 0.0) {
                weights_vanished = true;
                break;
            }
            fb.lambda = lambda;
            fb.theta = theta_from_weights(w, cfg.beta, cfg.theta_safety);
            FbResult solved = fb_solve(z, m, w, fb, u);

            ReweightRecord step;
            step.ell = ell;
            step.h = h;
            step.mu = mu;
            step.lambda = lambda;
            step.theta = fb.theta;
            step.fb_iters = solved.iterations;
            step.inner_iters = solved.inner_iters;
            step.split_calls = solved.split_calls;
            step.objective = objective_nonconvex(solved.u, z, m, {mu, lambda});
            step.relative_change = relative_change(solved.u, u);
            trace.reweighting.push_back(step);

            rec.tot_it += solved.iterations;
            trace.n_bar += solved.iterations;
            trace.total_inner_iters += solved.inner_iters;
            trace.total_split_calls += solved.split_calls;

            lambda = lambda_update(lambda, step.objective, P_prev);
            P_prev = step.objective;
            u = std::move(solved.u);
            w = compute_weights(grad(u), mu);

            if (trace.n_bar > cfg.max_fb_total) {
                budget_exhausted = true;
                break;
            }
            if (step.relative_change < cfg.outer_tol) break;
        }

        rec.lambda = lambda;
        rec.n_bar = trace.n_bar;
        rec.objective = P_prev;
        if (truth) rec.psnr = psnr(u, *truth);
        trace.continuation.push_back(rec);

        if (cfg.psnr_target && rec.psnr && *rec.psnr >= *cfg.psnr_target) {
            trace.stop_reason = "psnr_target";
            break;
        }
        if (weights_vanished) {
            trace.stop_reason = "weights_underflow";
            break;
        }
        if (budget_exhausted) {
            trace.stop_reason = "max_fb_total";
            break;
        }
        if (relative_change(u, u_ell_start) < cfg.outer_tol) {
            trace.stop_reason = "converged";
            break;
        }
    }
    result.u = std::move(u);
    return result;
}

} // namespace fncr
