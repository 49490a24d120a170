#include "fncr/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace fncr::oracle {

namespace {

void require_dense_size(std::size_t n)
{
    if (n > max_dense_side) throw std::length_error("oracle: dense matrices limited to n <= 64");
}

Eigen::Index idx(std::size_t i, std::size_t j, std::size_t n)
{
    return static_cast<Eigen::Index>(i * n + j);
}

} // namespace

Vector vec(const Image& u)
{
    Vector v(static_cast<Eigen::Index>(u.size()));
    for (std::size_t k = 0; k < u.size(); ++k) v(static_cast<Eigen::Index>(k)) = u[k];
    return v;
}

Image unvec(const Vector& v, std::size_t n)
{
    if (static_cast<std::size_t>(v.size()) != n * n) throw std::invalid_argument("unvec: size mismatch");
    Image u(n);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = v(static_cast<Eigen::Index>(k));
    return u;
}

DenseMatrix dense_gradient(std::size_t n)
{
    require_dense_size(n);
    const auto N = static_cast<Eigen::Index>(n * n);
    DenseMatrix D = DenseMatrix::Zero(2 * N, N);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto k = idx(i, j, n);
            D(k, k) = 1.0;
            if (j > 0) D(k, idx(i, j - 1, n)) = -1.0;
            D(N + k, k) = 1.0;
            if (i > 0) D(N + k, idx(i - 1, j, n)) = -1.0;
        }
    }
    return D;
}

DenseMatrix dense_weighted_gradient(const Weights& w)
{
    const std::size_t n = w.n();
    DenseMatrix G = dense_gradient(n);
    const auto N = static_cast<Eigen::Index>(n * n);
    for (Eigen::Index k = 0; k < N; ++k) {
        G.row(k) *= w.x[static_cast<std::size_t>(k)];
        G.row(N + k) *= w.y[static_cast<std::size_t>(k)];
    }
    return G;
}

DenseMatrix dense_weighted_laplacian(const Weights& w)
{
    const DenseMatrix G = dense_weighted_gradient(w);
    return -(G.transpose() * G);
}

DenseMatrix dense_system(const Weights& w, double beta, double theta)
{
    const DenseMatrix L = dense_weighted_laplacian(w);
    return DenseMatrix::Identity(L.rows(), L.cols()) - beta * theta * L;
}

DenseComplexMatrix dense_sampling(const Mask& m)
{
    const std::size_t n = m.n();
    require_dense_size(n);
    const auto N = static_cast<Eigen::Index>(n * n);
    DenseComplexMatrix Phi = DenseComplexMatrix::Zero(N, N);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t qi = 0; qi < n; ++qi) {
        const std::size_t pi = (qi + n - n / 2) % n;
        for (std::size_t qj = 0; qj < n; ++qj) {
            if (!m(qi, qj)) continue;
            const std::size_t pj = (qj + n - n / 2) % n;
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t l = 0; l < n; ++l) {
                    const auto phase = static_cast<double>((pi * k + pj * l) % n);
                    const double a = -2.0 * std::numbers::pi * phase / static_cast<double>(n);
                    Phi(idx(qi, qj, n), idx(k, l, n)) = std::polar(scale, a);
                }
            }
        }
    }
    return Phi;
}

Vector direct_solve(const DenseMatrix& A, const Vector& b)
{
    if (A.rows() != A.cols() || A.rows() != b.size()) throw std::invalid_argument("direct_solve: shape mismatch");
    Eigen::PartialPivLU<DenseMatrix> lu(A);
    const auto& LU = lu.matrixLU();
    const double scale = A.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < LU.rows(); ++k) {
        if (std::abs(LU(k, k)) <= 1e-14 * scale) throw std::domain_error("direct_solve: singular matrix");
    }
    return lu.solve(b);
}

double spectral_radius(const DenseMatrix& M)
{
    if (M.rows() != M.cols()) throw std::invalid_argument("spectral_radius: matrix not square");
    if (M.rows() == 0) return 0.0;
    if (M.isApprox(M.transpose(), 1e-13)) {
        Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(M, Eigen::EigenvaluesOnly);
        return eig.eigenvalues().cwiseAbs().maxCoeff();
    }
    // Power iteration; a dominant complex pair or a slow ratio falls back to the
    // general eigensolver.
    Vector x = Vector::Ones(M.rows()).normalized();
    double estimate = 0.0;
    for (int it = 0; it < 5000; ++it) {
        Vector y = M * x;
        const double norm = y.norm();
        if (norm == 0.0) return 0.0;
        y /= norm;
        if (std::abs(norm - estimate) <= 1e-14 * norm) return norm;
        estimate = norm;
        x = std::move(y);
    }
    Eigen::EigenSolver<DenseMatrix> eig(M, false);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_diag_dominant(const DenseMatrix& M)
{
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        const double diag = std::abs(M(r, r));
        const double off = M.row(r).cwiseAbs().sum() - diag;
        if (!(diag > off)) return false;
    }
    return true;
}

double inf_norm(const DenseMatrix& M)
{
    return M.rowwise().lpNorm<1>().maxCoeff();
}

} // namespace fncr::oracle
