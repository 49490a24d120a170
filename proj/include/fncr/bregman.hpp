#pragma once

// Backward (proximal) step of the forward-backward scheme:
//
//   argmin_u  lambda (||w^x u_x||_1 + ||w^y u_y||_1) + 1/(2 beta) ||u - vhat||^2
//
// solved by weighted Split Bregman iterations. The linear system
// (I - beta theta Delta^w) U = b arising in every Bregman step is solved by the
// stationary splitting E = I, F = beta theta Delta^w, i.e. X <- F X + b, which
// converges for 0 < theta < 1 / (beta ||Delta^w||_inf).

#include "fncr/grid.hpp"

#include <cstddef>
#include <functional>

namespace fncr {

double soft(double v, double threshold);
double cut(double v, double threshold);
Image soft(const Image& v, double threshold);
Image cut(const Image& v, double threshold);

/// Order of the Bregman-variable update relative to the linear solve.
enum class BregmanOrder {
    /// e updated from U^(j-1) first, then U^(j) solved.
    update_then_solve,
    /// U^(j+1) solved with (D^(j), e^(j)) first, then D, e updated.
    solve_then_update,
};

struct SplitConfig {
    double lambda = 0.0;
    double theta = 0.0;
    double beta = 1.0;
    double tau = 0.1;
    std::size_t max_outer_j = 50;
    std::size_t max_inner_m = 100;
    BregmanOrder order = BregmanOrder::update_then_solve;

    /// Checks the scalar invariants; the theta bound is checked against the
    /// weights by the solvers.
    void validate() const;
};

struct BregmanState {
    Image U;
    Image e_x;
    Image e_y;
    std::size_t j = 0;
    std::size_t total_m = 0;
};

struct SplitSolveResult {
    Image X;
    std::size_t iterations = 0;
};

struct FastSplitResult {
    Image U;
    std::size_t total_m = 0;
    std::size_t outer_j = 0;
};

/// Throws std::domain_error unless 0 < theta < 1 / (beta ||Delta^w||_inf).
void require_theta_in_bound(double theta, double beta, const Weights& w);

/// Stationary iteration
///   X <- vhat - beta theta [ Dx^wT (Dx^w X + 2 e_x - zx) + Dy^wT (Dy^w X + 2 e_y - zy) ]
/// from X0 until ||X^(m+1) - X^(m)|| <= tau ||X^(m)|| or max_inner_m.
SplitSolveResult splitting_solve(const Image& vhat, const Weights& w, const Image& e_x,
                                 const Image& e_y, const Image& zx, const Image& zy,
                                 const SplitConfig& cfg, const Image& X0);

/// Called after every outer Bregman step with the state (U^(j), e^(j), j, m-bar)
/// and the split variables D^(j) paired with that solve.
using SplitObserver = std::function<void(const BregmanState&, const GradientField&)>;

/// Weighted Split Bregman solve of the backward step. Returns the final U and the
/// cumulative number of splitting iterations.
FastSplitResult fast_split(const Image& vhat, const Weights& w, const SplitConfig& cfg,
                           const SplitObserver& observe = {});

/// Convenience overload mirroring the scalar argument list.
FastSplitResult fast_split(double lambda, double theta, double beta, const Image& vhat,
                           const Weights& w, double tau);

/// Value of the quadratic-penalty split functional
///   1/(2 beta) ||U - vhat||^2 + lambda (||D_x||_1 + ||D_y||_1)
///   + theta/2 (||D_x - Dx^w U||^2 + ||D_y - Dy^w U||^2).
double split_functional(const Image& U, const Image& vhat, const Image& d_x, const Image& d_y,
                        const Weights& w, double lambda, double theta, double beta);

} // namespace fncr
