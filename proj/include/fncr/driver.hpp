#pragma once

// Fast NonConvex Reweighting driver. Loop nest, outermost first:
//
//   l : continuation, mu <- mu_factor * mu
//   h : iterative reweighted l1 steps with the adaptive lambda ratio
//   n : accelerated forward-backward iterations on the weighted-l1 surrogate
//   j, m : Split Bregman backward step and its splitting solver (bregman.hpp)

#include "fncr/bregman.hpp"
#include "fncr/grid.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fncr {

struct FncrConfig {
    double r0 = 1e-4;
    double gamma = 0.05;
    double beta = 1.0;
    double tau = 0.1;
    double mu_factor = 0.8;
    double theta_safety = 0.8;
    std::size_t h_max = 2;
    double outer_tol = 1e-5;
    std::optional<double> psnr_target;
    std::size_t max_fb_total = 5000;

    // Safety caps; the algorithm itself stops on its relative-change tests.
    std::size_t max_fb_per_solve = 1000;
    std::size_t max_outer_j = 50;
    std::size_t max_inner_m = 100;

    // Sensitivity switch: stop forward-backward on |Delta_n - Delta_{n-1}| < gamma lambda
    // instead of the signed difference.
    bool absolute_fb_stop = false;

    void validate() const;
};

/// One IRl1 step (one forward-backward solve).
struct ReweightRecord {
    std::size_t ell = 0;
    std::size_t h = 0;
    double mu = 0.0;
    double lambda = 0.0;        // lambda used by this solve
    double theta = 0.0;
    std::size_t fb_iters = 0;
    std::size_t inner_iters = 0; // splitting iterations over all backward steps
    std::size_t split_calls = 0;
    double objective = 0.0;     // lambda F_mu(Du) + 0.5 ||Phi u - z||^2 at the new iterate
    double relative_change = 0.0;
};

/// One continuation step.
struct ContinuationRecord {
    std::size_t ell = 0;
    double mu = 0.0;
    double lambda = 0.0;  // lambda after the last reweighting of this step
    std::size_t tot_it = 0;
    std::size_t n_bar = 0; // cumulative
    double objective = 0.0;
    std::optional<double> psnr;
};

struct FncrTrace {
    std::vector<ContinuationRecord> continuation;
    std::vector<ReweightRecord> reweighting;
    std::size_t n_bar = 0;
    std::size_t total_inner_iters = 0;
    std::size_t total_split_calls = 0;
    double mu0 = 0.0;
    double lambda0 = 0.0;
    std::string stop_reason;

    double mean_inner_per_split() const
    {
        return total_split_calls == 0 ? 0.0
                                      : static_cast<double>(total_inner_iters) /
                                            static_cast<double>(total_split_calls);
    }
};

struct InitialState {
    Image u0;
    double lambda0 = 0.0;
    double mu0 = 0.0;
    Weights weights;
};

/// u0 = Phi^T z, lambda0 = r0 ||u0||_1, mu0 = ||grad u0||_1, unit weights.
InitialState init_state(const KSpace& z, const Mask& m, const FncrConfig& cfg);

/// safety / (beta ||Delta^w||_inf).
double theta_from_weights(const Weights& w, double beta, double safety);

struct FistaStep {
    double t = 1.0;
    double alpha = 0.0;
};

/// t' = (1 + sqrt(1 + 4 t^2)) / 2, alpha = (t - 1) / t'.
FistaStep fista_step(double t_prev);

struct FbSettings {
    double lambda = 0.0;
    double beta = 1.0;
    double theta = 0.0;
    double tau = 0.1;
    double gamma = 0.05;
    std::size_t max_iters = 1000;
    std::size_t max_outer_j = 50;
    std::size_t max_inner_m = 100;
    bool absolute_stop = false;
};

struct FbResult {
    Image u;
    std::size_t iterations = 0;
    std::size_t inner_iters = 0;
    std::size_t split_calls = 0;
    std::vector<Image> iterates; // filled only when requested
};

/// Accelerated forward-backward solve of lambda sum(w |Du|) + 0.5 ||Phi u - z||^2
/// warm-started at u_start. Stops once Delta_n - Delta_{n-1} < gamma lambda
/// (n >= 2), Delta_n = sum(w |D u_hat^(n)|).
FbResult fb_solve(const KSpace& z, const Mask& m, const Weights& w, const FbSettings& s,
                  const Image& u_start, bool keep_iterates = false);

/// lambda_h P_h / P_{h-1}.
double lambda_update(double lambda_h, double P_h, double P_hm1);

struct FncrResult {
    Image u;
    FncrTrace trace;
};

FncrResult fncr_run(const KSpace& z, const Mask& m, const FncrConfig& cfg,
                    const std::optional<Image>& truth = std::nullopt);

} // namespace fncr
