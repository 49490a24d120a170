#include "fncr/driver.hpp"
#include "fncr/metrics.hpp"
#include "fncr/operators.hpp"
#include "fncr/penalty.hpp"
#include "fncr/phantom.hpp"
#include "fncr/sampling.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace fncr;
using namespace fncr::test;

TEST_CASE("init_state")
{
    std::mt19937_64 rng(51);
    const std::size_t n = 16;
    const Mask m = random_mask(n, rng, 0.4);
    const KSpace z = forward(random_image(n, rng, 0.0, 1.0), m);
    FncrConfig cfg;
    cfg.r0 = 0.05;
    const InitialState s = init_state(z, m, cfg);
    CHECK(max_abs_diff(s.u0, adjoint(z, m)) == 0.0);
    CHECK(s.lambda0 == doctest::Approx(0.05 * norm1(s.u0)).epsilon(1e-15));
    for (std::size_t k = 0; k < s.weights.x.size(); ++k) {
        CHECK(s.weights.x[k] == 1.0);
        CHECK(s.weights.y[k] == 1.0);
    }

    // constant c over the full grid: lambda0 = r0 c n^2
    const Mask full(n, true);
    const InitialState c = init_state(forward(Image(n, 0.5), full), full, cfg);
    CHECK(c.lambda0 == doctest::Approx(0.05 * 0.5 * 256.0).epsilon(1e-12));
    // only the zero-padded first row and column see the constant
    CHECK(c.mu0 == doctest::Approx(0.5 * 2.0 * 16.0).epsilon(1e-12));

    // a hot pixel has four unit jumps
    Image hot(n);
    hot(5, 9) = 1.0;
    CHECK(init_state(forward(hot, full), full, cfg).mu0 == doctest::Approx(4.0).epsilon(1e-12));

    CHECK_THROWS_AS(init_state(KSpace(n), m, cfg), std::invalid_argument);
    cfg.beta = 2.0;
    CHECK_THROWS_AS(init_state(z, m, cfg), std::invalid_argument);
}

TEST_CASE("theta_from_weights")
{
    CHECK(theta_from_weights(Weights::constant(8, 1.0), 1.0, 0.8) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(theta_from_weights(Weights::constant(8, 1.0), 0.5, 0.8) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(theta_from_weights(Weights::constant(8, 2.0), 1.0, 0.8) == doctest::Approx(0.025).epsilon(1e-15));
    CHECK_THROWS_AS(theta_from_weights(Weights::constant(8, 0.0), 1.0, 0.8), std::domain_error);
}

TEST_CASE("fista_step")
{
    const FistaStep a = fista_step(1.0);
    CHECK(a.t == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-15));
    CHECK(a.alpha == 0.0);
    // 30-digit evaluation of the recursion
    const FistaStep b = fista_step(a.t);
    CHECK(b.t == doctest::Approx(2.193527085331054).epsilon(1e-14));
    CHECK(b.alpha == doctest::Approx(0.2817535251253208).epsilon(1e-14));
    double t = 1.0;
    for (int k = 0; k < 50; ++k) {
        const FistaStep s = fista_step(t);
        CHECK(s.alpha >= 0.0);
        CHECK(s.alpha < 1.0);
        CHECK(s.t > t);
        t = s.t;
    }
}

TEST_CASE("lambda_update")
{
    CHECK(lambda_update(2.0, 3.0, 4.0) == 1.5);
    CHECK(lambda_update(0.1, 1.0, 1.0) == 0.1);
    CHECK(lambda_update(0.1, 0.5, 1.0) < 0.1);
    CHECK_THROWS_AS(lambda_update(0.1, 1.0, 0.0), std::domain_error);
}

TEST_CASE("fb_solve: fixed points")
{
    std::mt19937_64 rng(52);
    const std::size_t n = 16;
    const Mask full(n, true);
    const Image truth = random_image(n, rng, 0.0, 1.0);
    const KSpace z = forward(truth, full);
    FbSettings s;
    s.lambda = 1e-12;
    s.theta = theta_from_weights(Weights::constant(n, 1.0), 1.0, 0.8);
    const FbResult r = fb_solve(z, full, Weights::constant(n, 1.0), s, Image(n));
    CHECK(max_abs_diff(r.u, adjoint(z, full)) <= 1e-6);
    CHECK(r.iterations >= 2);

    s.lambda = 0.3;
    const FbResult zero = fb_solve(KSpace(n), random_mask(n, rng, 0.3), Weights::constant(n, 1.0), s, Image(n));
    CHECK(norm2(zero.u) == 0.0);
}

TEST_CASE("fb_solve: surrogate running minimum decreases")
{
    std::mt19937_64 rng(53);
    const std::size_t n = 32;
    const Mask m = random_mask(n, rng, 0.35);
    const Image truth = blocks_phantom(n);
    const KSpace z = forward(truth, m);
    const Weights w = random_weights(n, rng);
    FbSettings s;
    s.lambda = 0.02;
    s.theta = theta_from_weights(w, 1.0, 0.8);
    s.tau = 1e-6;
    s.gamma = 1e-9;
    s.absolute_stop = true; // run the full budget
    s.max_iters = 40;
    const Image start = adjoint(z, m);
    const FbResult r = fb_solve(z, m, w, s, start, true);
    REQUIRE(r.iterates.size() == r.iterations);
    REQUIRE(r.iterations >= 10);
    CHECK(r.split_calls == r.iterations);

    std::vector<double> obj;
    for (const Image& u : r.iterates) obj.push_back(objective_surrogate(u, z, m, w, s.lambda));
    double running = obj[1];
    for (std::size_t k = 2; k < obj.size(); ++k) {
        const double next = std::min(running, obj[k]);
        CHECK(next <= running);
        running = next;
    }
    const double f0 = objective_surrogate(start, z, m, w, s.lambda);
    CHECK(running < f0);
    CHECK(obj.back() < 0.9 * f0);
}

TEST_CASE("fncr_run: full mask recovers the image")
{
    const std::size_t n = 32;
    const Image truth = shepp_logan(n);
    const Mask full(n, true);
    FncrConfig cfg;
    cfg.psnr_target = 100.0;
    const FncrResult r = fncr_run(forward(truth, full), full, cfg, truth);
    CHECK(r.trace.stop_reason == "psnr_target");
    CHECK(psnr(r.u, truth) >= 100.0);
    CHECK(r.trace.n_bar <= 500);
}

TEST_CASE("fncr_run: trace bookkeeping")
{
    const std::size_t n = 32;
    const Image truth = blocks_phantom(n);
    MaskSpec ms;
    ms.kind = MaskKind::random;
    ms.n = n;
    ms.rate = 0.4;
    ms.seed = 5;
    const Mask m = make_mask(ms);
    FncrConfig cfg;
    cfg.r0 = 0.05;
    cfg.gamma = 0.5;
    cfg.max_fb_total = 300;
    const FncrResult r = fncr_run(forward(truth, m), m, cfg, truth);
    const FncrTrace& t = r.trace;
    REQUIRE(!t.continuation.empty());
    CHECK(all_finite(r.u));
    CHECK(!t.stop_reason.empty());

    std::size_t sum = 0, inner = 0, calls = 0;
    for (std::size_t l = 0; l < t.continuation.size(); ++l) {
        const ContinuationRecord& c = t.continuation[l];
        CHECK(c.ell == l);
        CHECK(c.mu == doctest::Approx(t.mu0 * std::pow(0.8, double(l))).epsilon(1e-13));
        sum += c.tot_it;
        CHECK(c.n_bar == sum);
        REQUIRE(c.psnr.has_value());
        CHECK(std::isfinite(*c.psnr));
    }
    CHECK(t.n_bar == sum);

    double mu = t.mu0;
    std::size_t fb = 0;
    for (std::size_t k = 0; k < t.reweighting.size(); ++k) {
        const ReweightRecord& rw = t.reweighting[k];
        if (k > 0 && rw.ell != t.reweighting[k - 1].ell) mu *= 0.8;
        CHECK(rw.mu == mu);
        CHECK(rw.theta > 0.0);
        CHECK(std::isfinite(rw.objective));
        CHECK(rw.lambda > 0.0);
        fb += rw.fb_iters;
        inner += rw.inner_iters;
        calls += rw.split_calls;
    }
    CHECK(fb == t.n_bar);
    CHECK(inner == t.total_inner_iters);
    CHECK(calls == t.total_split_calls);
    CHECK(t.lambda0 == t.reweighting.front().lambda);
    // first solve runs on unit weights
    CHECK(t.reweighting.front().theta == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(t.continuation.size() == 1 + t.reweighting.back().ell);
}

TEST_CASE("fncr_run: lambda follows the objective ratio")
{
    const std::size_t n = 32;
    const Image truth = shepp_logan(n);
    MaskSpec ms;
    ms.kind = MaskKind::radial;
    ms.n = n;
    ms.count = 8;
    const Mask m = make_mask(ms);
    const KSpace z = forward(truth, m);
    FncrConfig cfg;
    cfg.h_max = 3;
    cfg.max_fb_total = 200;
    const FncrResult r = fncr_run(z, m, cfg);
    const auto& rw = r.trace.reweighting;
    REQUIRE(rw.size() >= 2);
    std::size_t checked = 0;
    for (std::size_t k = 2; k < rw.size(); ++k) {
        if (rw[k].ell != rw[k - 2].ell) continue;
        // within one mu, P at the start of step h is the objective left by step h-1
        CHECK(rw[k].lambda / rw[k - 1].lambda == doctest::Approx(rw[k - 1].objective / rw[k - 2].objective).epsilon(1e-12));
        ++checked;
    }
    CHECK(checked > 0);
    CHECK(!r.trace.continuation.front().psnr.has_value());
}

TEST_CASE("fncr_run: validation")
{
    const Mask full(8, true);
    FncrConfig cfg;
    cfg.tau = 1.0;
    CHECK_THROWS_AS(fncr_run(forward(Image(8, 1.0), full), full, cfg), std::invalid_argument);
    cfg = {};
    CHECK_THROWS_AS(fncr_run(KSpace(8), full, cfg), std::invalid_argument);
    CHECK_THROWS_AS(fncr_run(forward(Image(8, 1.0), full), full, cfg, Image(4)), std::invalid_argument);
}
