// fncr: phantoms, masks, sampling, reconstruction and batch experiments.
//
//   fncr phantom --kind shepp-logan --n 256 -o truth.pgm
//   fncr mask --kind radial --rays 12 --n 256 -o m.pbm
//   fncr sample --image truth.pgm --mask m.pbm -o z.fnk [--delta 0.01 --seed 3]
//   fncr reconstruct --kspace z.fnk --mask m.pbm -o u.pgm --trace trace.csv
//   fncr evaluate --image u.pgm --truth truth.pgm
//   fncr experiment table1.cfg -o table1.csv

#include "fncr/driver.hpp"
#include "fncr/experiment.hpp"
#include "fncr/io.hpp"
#include "fncr/metrics.hpp"
#include "fncr/operators.hpp"
#include "fncr/phantom.hpp"
#include "fncr/sampling.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace fncr;

void print_psnr(double p)
{
    if (std::isinf(p)) std::printf("inf\n");
    else std::printf("%.4f\n", p);
}

void write_trace(const std::string& path, const FncrTrace& trace)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    char buf[512];
    out << "ell,h,mu,lambda,theta,fb_iters,inner_iters,split_calls,objective,relative_change\n";
    for (const auto& r : trace.reweighting) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%.17g,%zu,%zu,%zu,%.17g,%.17g\n", r.ell, r.h, r.mu,
                      r.lambda, r.theta, r.fb_iters, r.inner_iters, r.split_calls, r.objective,
                      r.relative_change);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"FNCR compressed-sensing MRI reconstruction"};
    app.require_subcommand(1);

    // phantom
    auto* ph = app.add_subcommand("phantom", "write a test image");
    std::string ph_kind = "shepp-logan", ph_out;
    std::size_t ph_n = 256;
    ph->add_option("--kind", ph_kind, "shepp-logan | blocks")->check(CLI::IsMember({"shepp-logan", "blocks"}));
    ph->add_option("--n", ph_n, "grid side")->capture_default_str();
    ph->add_option("-o,--output", ph_out, "PGM file")->required();

    // mask
    auto* mk = app.add_subcommand("mask", "write a sampling mask and print S_r");
    MaskSpec ms;
    std::string mk_kind = "radial", mk_out;
    std::optional<std::size_t> mk_rays, mk_lines;
    std::optional<double> mk_rate;
    mk->add_option("--kind", mk_kind, "radial | parallel | random");
    mk->add_option("--n", ms.n, "grid side")->capture_default_str();
    auto* o_rays = mk->add_option("--rays", mk_rays, "radial rays");
    auto* o_lines = mk->add_option("--lines", mk_lines, "parallel lines");
    auto* o_rate = mk->add_option("--rate", mk_rate, "random sampling rate in (0, 1]");
    mk->add_option("--seed", ms.seed, "random mask seed");
    mk->add_option("-o,--output", mk_out, "PBM file (optional)");
    o_rays->excludes(o_lines)->excludes(o_rate);
    o_lines->excludes(o_rate);

    // sample
    auto* sp = app.add_subcommand("sample", "masked k-space of an image, optionally noisy");
    std::string sp_image, sp_mask, sp_out;
    double sp_delta = 0.0;
    std::uint64_t sp_seed = 0;
    sp->add_option("--image", sp_image)->required()->check(CLI::ExistingFile);
    sp->add_option("--mask", sp_mask)->required()->check(CLI::ExistingFile);
    sp->add_option("--delta", sp_delta, "relative noise level")->check(CLI::NonNegativeNumber);
    sp->add_option("--seed", sp_seed, "noise seed");
    sp->add_option("-o,--output", sp_out, "k-space file")->required();

    // reconstruct
    auto* rc = app.add_subcommand("reconstruct", "FNCR reconstruction from masked k-space");
    std::string rc_kspace, rc_mask, rc_out, rc_trace, rc_truth, rc_preset = "radial";
    bool rc_noisy = false;
    std::optional<double> rc_r0, rc_gamma, rc_beta, rc_tau, rc_mu_factor, rc_safety, rc_tol, rc_target;
    std::optional<std::size_t> rc_hmax, rc_max_fb;
    rc->add_option("--kspace", rc_kspace)->required()->check(CLI::ExistingFile);
    rc->add_option("--mask", rc_mask)->required()->check(CLI::ExistingFile);
    rc->add_option("-o,--output", rc_out, "PGM file")->required();
    rc->add_option("--trace", rc_trace, "per-reweighting trace CSV");
    rc->add_option("--truth", rc_truth, "reference image for PSNR tracking")->check(CLI::ExistingFile);
    rc->add_option("--preset", rc_preset, "parameter defaults: radial | parallel | random");
    rc->add_flag("--noisy", rc_noisy, "noisy-data defaults");
    rc->add_option("--r0", rc_r0);
    rc->add_option("--gamma", rc_gamma);
    rc->add_option("--beta", rc_beta);
    rc->add_option("--tau", rc_tau);
    rc->add_option("--mu-factor", rc_mu_factor);
    rc->add_option("--theta-safety", rc_safety);
    rc->add_option("--h-max", rc_hmax);
    rc->add_option("--outer-tol", rc_tol);
    rc->add_option("--psnr-target", rc_target, "needs --truth");
    rc->add_option("--max-fb", rc_max_fb, "cap on total forward-backward iterations");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "print PSNR of an image against a reference");
    std::string ev_image, ev_truth;
    ev->add_option("--image", ev_image)->required()->check(CLI::ExistingFile);
    ev->add_option("--truth", ev_truth)->required()->check(CLI::ExistingFile);

    // experiment
    auto* ex = app.add_subcommand("experiment", "run a configuration file, one CSV row per line");
    std::string ex_config, ex_out;
    std::optional<std::size_t> ex_threads;
    ex->add_option("config", ex_config)->required()->check(CLI::ExistingFile);
    ex->add_option("-o,--output", ex_out, "CSV file (default stdout)");
    ex->add_option("--threads", ex_threads, "worker count (default FNCR_THREADS or 1)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ph) {
            const Image u = ph_kind == "blocks" ? blocks_phantom(ph_n) : shepp_logan(ph_n);
            write_pgm(ph_out, u);
        } else if (*mk) {
            ms.kind = parse_mask_kind(mk_kind);
            if ((mk_rays && ms.kind != MaskKind::radial) || (mk_lines && ms.kind != MaskKind::parallel) ||
                (mk_rate && ms.kind != MaskKind::random)) {
                throw std::invalid_argument("option does not apply to --kind " + mk_kind);
            }
            if (mk_rays) ms.count = *mk_rays;
            if (mk_lines) ms.count = *mk_lines;
            if (mk_rate) ms.rate = *mk_rate;
            ms.validate();
            const Mask m = make_mask(ms);
            if (!mk_out.empty()) write_pbm(mk_out, m);
            std::printf("S_r %.4f%%\n", sampling_ratio(m));
        } else if (*sp) {
            const Image u = read_pgm(sp_image);
            const Mask m = read_pbm(sp_mask);
            require_same_n(u.n(), m.n(), "sample");
            KSpace z = forward(u, m);
            if (sp_delta > 0.0) z = add_noise(z, m, sp_delta, sp_seed);
            write_kspace(sp_out, z);
        } else if (*rc) {
            if (rc_target && rc_truth.empty()) throw std::invalid_argument("--psnr-target needs --truth");
            const KSpace z = read_kspace(rc_kspace);
            const Mask m = read_pbm(rc_mask);
            require_same_n(z.n(), m.n(), "reconstruct");
            FncrConfig cfg = default_solver_config(parse_mask_kind(rc_preset), rc_noisy ? 1.0 : 0.0);
            cfg.psnr_target.reset();
            if (rc_r0) cfg.r0 = *rc_r0;
            if (rc_gamma) cfg.gamma = *rc_gamma;
            if (rc_beta) cfg.beta = *rc_beta;
            if (rc_tau) cfg.tau = *rc_tau;
            if (rc_mu_factor) cfg.mu_factor = *rc_mu_factor;
            if (rc_safety) cfg.theta_safety = *rc_safety;
            if (rc_hmax) cfg.h_max = *rc_hmax;
            if (rc_tol) cfg.outer_tol = *rc_tol;
            if (rc_max_fb) cfg.max_fb_total = *rc_max_fb;
            if (rc_target) cfg.psnr_target = *rc_target;
            std::optional<Image> truth;
            if (!rc_truth.empty()) {
                truth = read_pgm(rc_truth);
                require_same_n(truth->n(), m.n(), "reconstruct --truth");
                if (!rc_target) cfg.psnr_target = 100.0;
            }
            const FncrResult r = fncr_run(z, m, cfg, truth);
            write_pgm(rc_out, r.u);
            if (!rc_trace.empty()) write_trace(rc_trace, r.trace);
            std::fprintf(stderr, "n_bar %zu, stop: %s\n", r.trace.n_bar, r.trace.stop_reason.c_str());
            if (truth) print_psnr(psnr(r.u, *truth));
        } else if (*ev) {
            const Image u = read_pgm(ev_image);
            const Image t = read_pgm(ev_truth);
            require_same_n(u.n(), t.n(), "evaluate");
            print_psnr(psnr(u, t));
        } else if (*ex) {
            const auto rows = parse_experiment_file(ex_config);
            const auto results = run_batch(rows, ex_threads ? *ex_threads : threads_from_env());
            std::ofstream file;
            if (!ex_out.empty()) {
                file.open(ex_out);
                if (!file) throw std::runtime_error("cannot open '" + ex_out + "' for writing");
            }
            std::ostream& out = ex_out.empty() ? std::cout : file;
            out << csv_header() << '\n';
            for (std::size_t k = 0; k < rows.size(); ++k) out << csv_row(k, rows[k], results[k]) << '\n';
            out.flush();
            if (!out) throw std::runtime_error("CSV write failed");
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fncr: %s\n", e.what());
        return 1;
    }
    return 0;
}
