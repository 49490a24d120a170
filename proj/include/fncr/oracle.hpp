#pragma once

// Dense reference matrices for verification on small grids. Every matrix acts
// on vec(u) with the row-major linear index k = i * n + j. Sizes are guarded:
// these paths are O(n^4) in memory.

#include "fncr/grid.hpp"

#include <Eigen/Dense>

namespace fncr::oracle {

using DenseMatrix = Eigen::MatrixXd;
using DenseComplexMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

constexpr std::size_t max_dense_side = 64;

Vector vec(const Image& u);
Image unvec(const Vector& v, std::size_t n);

/// 2 n^2 x n^2 backward-difference matrix [D_x; D_y], missing neighbors as zero.
DenseMatrix dense_gradient(std::size_t n);

/// [diag(w^x) D_x; diag(w^y) D_y].
DenseMatrix dense_weighted_gradient(const Weights& w);

/// -(G^T G) with G the weighted gradient.
DenseMatrix dense_weighted_laplacian(const Weights& w);

/// I - beta theta Delta^w.
DenseMatrix dense_system(const Weights& w, double beta, double theta);

/// Masked unitary DFT in centered coordinates, built entry by entry from
/// exp(-2 pi i (p k + q l) / n) / n; rows off the mask are zero.
DenseComplexMatrix dense_sampling(const Mask& m);

/// Gaussian elimination with partial pivoting; throws on a singular matrix.
Vector direct_solve(const DenseMatrix& A, const Vector& b);

/// Largest |eigenvalue|: symmetric input uses a self-adjoint eigensolver,
/// otherwise power iteration with a general eigensolver fallback.
double spectral_radius(const DenseMatrix& M);

bool is_diag_dominant(const DenseMatrix& M);

/// Max absolute row sum.
double inf_norm(const DenseMatrix& M);

} // namespace fncr::oracle
