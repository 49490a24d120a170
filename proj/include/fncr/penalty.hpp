#pragma once

// Nonconvex gradient-sparsity penalty
//
//   psi_mu(t) = log(2 / (1 + exp(-|t|/mu))) / log 2,
//
// which tends to the l0 indicator as mu -> 0, together with its derivative,
// the reweighting coefficients and the objective functionals built on it.

#include "fncr/grid.hpp"

namespace fncr {

struct PenaltyParams {
    double mu = 1.0;
    double lambda = 1.0;

    /// Throws std::invalid_argument unless mu > 0 and lambda > 0.
    void validate() const;
};

double psi(double t, double mu);

/// d psi / dt for t > 0, continued to t = 0 by its right limit 1/(2 mu log 2).
double psi_prime(double t, double mu);

/// F_mu(g) = sum of psi over all 2 n^2 gradient magnitudes.
double penalty_value(const GradientField& g, double mu);

/// w = psi_prime(|g|) component-wise.
Weights compute_weights(const GradientField& g, double mu);

/// sum w^x |g_x| + w^y |g_y|.
double weighted_l1(const GradientField& g, const Weights& w);

/// 0.5 ||Phi u - z||^2.
double data_misfit(const Image& u, const KSpace& z, const Mask& m);

/// lambda F_mu(Du) + 0.5 ||Phi u - z||^2.
double objective_nonconvex(const Image& u, const KSpace& z, const Mask& m, const PenaltyParams& p);

/// lambda sum(w |Du|) + 0.5 ||Phi u - z||^2, the convex weighted-l1 surrogate.
double objective_surrogate(const Image& u, const KSpace& z, const Mask& m, const Weights& w,
                           double lambda);

} // namespace fncr
