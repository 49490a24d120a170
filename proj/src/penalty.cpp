#include "fncr/penalty.hpp"

#include "fncr/operators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fncr {

namespace {

void require_mu(double mu)
{
    if (!(mu > 0.0)) throw std::invalid_argument("penalty: mu must be > 0");
}

} // namespace

void PenaltyParams::validate() const
{
    require_mu(mu);
    if (!(lambda > 0.0)) throw std::invalid_argument("penalty: lambda must be > 0");
}

double psi(double t, double mu)
{
    require_mu(mu);
    // log(2/(1+e^-x)) = log 2 - log1p(e^-x); e^-x never overflows for x >= 0.
    const double x = std::abs(t) / mu;
    return (std::numbers::ln2 - std::log1p(std::exp(-x))) / std::numbers::ln2;
}

double psi_prime(double t, double mu)
{
    require_mu(mu);
    // 1/(mu ln2 (1 + e^x)) written as e^-x / (mu ln2 (1 + e^-x)).
    const double x = std::abs(t) / mu;
    const double e = std::exp(-x);
    return e / (mu * std::numbers::ln2 * (1.0 + e));
}

double penalty_value(const GradientField& g, double mu)
{
    require_mu(mu);
    require_same_n(g.x.n(), g.y.n(), "penalty_value");
    double s = 0.0;
    for (std::size_t k = 0; k < g.x.size(); ++k) s += psi(g.x[k], mu) + psi(g.y[k], mu);
    return s;
}

Weights compute_weights(const GradientField& g, double mu)
{
    require_mu(mu);
    require_same_n(g.x.n(), g.y.n(), "compute_weights");
    const std::size_t n = g.n();
    Weights w{Image(n), Image(n)};
    for (std::size_t k = 0; k < g.x.size(); ++k) {
        w.x[k] = psi_prime(g.x[k], mu);
        w.y[k] = psi_prime(g.y[k], mu);
    }
    return w;
}

double weighted_l1(const GradientField& g, const Weights& w)
{
    require_same_n(g.n(), w.n(), "weighted_l1");
    double s = 0.0;
    for (std::size_t k = 0; k < g.x.size(); ++k) {
        s += w.x[k] * std::abs(g.x[k]) + w.y[k] * std::abs(g.y[k]);
    }
    return s;
}

double data_misfit(const Image& u, const KSpace& z, const Mask& m)
{
    require_same_n(u.n(), z.n(), "data_misfit");
    const KSpace pu = forward(u, m);
    double s = 0.0;
    for (std::size_t k = 0; k < pu.size(); ++k) {
        if (m[k]) s += std::norm(pu[k] - z[k]);
    }
    return 0.5 * s;
}

double objective_nonconvex(const Image& u, const KSpace& z, const Mask& m, const PenaltyParams& p)
{
    require_mu(p.mu);
    return p.lambda * penalty_value(grad(u), p.mu) + data_misfit(u, z, m);
}

double objective_surrogate(const Image& u, const KSpace& z, const Mask& m, const Weights& w,
                           double lambda)
{
    return lambda * weighted_l1(grad(u), w) + data_misfit(u, z, m);
}

} // namespace fncr
