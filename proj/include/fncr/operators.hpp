#pragma once

// Linear operators of the reconstruction model:
//   forward / adjoint      masked unitary 2-D Fourier sampling and its adjoint
//   grad                   backward differences, missing neighbors read as zero
//   weighted_grad / _div   diag(w) D and its exact adjoint D^T diag(w)
//   weighted_laplacian     -(D^T diag(w^2) D), the 5-point weighted stencil
//
// All functions are pure; the FFT plan cache is internally synchronized.

#include "fncr/grid.hpp"

namespace fncr {

/// Index of the DC sample in centered k-space coordinates (both axes).
constexpr std::size_t dc_index(std::size_t n) noexcept { return n / 2; }

/// M o F(u): unitary 2-D DFT shifted to centered coordinates, zero off the mask.
KSpace forward(const Image& u, const Mask& m);

/// Re F^{-1}(M o z): real part of the unitary inverse DFT of the masked samples.
Image adjoint(const KSpace& z, const Mask& m);

/// Backward differences u_x(i,j) = u(i,j) - u(i,j-1), u_y(i,j) = u(i,j) - u(i-1,j).
GradientField grad(const Image& u);

/// D^T g, the exact adjoint of grad.
Image grad_adjoint(const GradientField& g);

GradientField weighted_grad(const Image& u, const Weights& w);

/// Exact adjoint of weighted_grad: D_x^T(w^x g_x) + D_y^T(w^y g_y).
Image weighted_div(const GradientField& g, const Weights& w);

/// Delta^w u = -(weighted_div(weighted_grad(u, w), w)).
Image weighted_laplacian_apply(const Image& u, const Weights& w);

/// Max absolute row sum of the Delta^w matrix.
double laplacian_inf_norm(const Weights& w);

// Allocation-free variants used by the inner solvers.
void weighted_grad_into(const Image& u, const Weights& w, GradientField& out);
void weighted_div_into(const GradientField& g, const Weights& w, Image& out);

} // namespace fncr
