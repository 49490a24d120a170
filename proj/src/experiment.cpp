#include "fncr/experiment.hpp"

#include "fncr/io.hpp"
#include "fncr/metrics.hpp"
#include "fncr/operators.hpp"
#include "fncr/phantom.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fncr {

namespace {

std::string fmt_double(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_fixed(double v, int digits)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("experiment: '" + key + "' expects a number, got '" + v + "'");
    }
}

std::uint64_t to_uint(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const auto u = std::stoull(v, &used);
        if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
        return u;
    } catch (const std::exception&) {
        throw std::invalid_argument("experiment: '" + key + "' expects a non-negative integer, got '" + v + "'");
    }
}

// CSV fields never contain commas from numbers; labels and paths are quoted.
std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

PhantomKind parse_phantom_kind(const std::string& name)
{
    if (name == "shepp-logan") return PhantomKind::shepp_logan;
    if (name == "blocks") return PhantomKind::blocks;
    if (name == "image-file") return PhantomKind::image_file;
    throw std::invalid_argument("unknown phantom '" + name + "' (shepp-logan|blocks|image-file)");
}

std::string to_string(PhantomKind kind)
{
    switch (kind) {
    case PhantomKind::shepp_logan: return "shepp-logan";
    case PhantomKind::blocks: return "blocks";
    case PhantomKind::image_file: return "image-file";
    }
    return "unknown";
}

void ExperimentConfig::validate() const
{
    mask.validate();
    solver.validate();
    if (!(delta >= 0.0)) throw std::invalid_argument("experiment: delta must be >= 0");
    if (phantom == PhantomKind::image_file && image_path.empty()) {
        throw std::invalid_argument("experiment: phantom=image-file needs image=<path>");
    }
}

std::string ExperimentConfig::to_line() const
{
    std::ostringstream os;
    os << "label=" << (label.empty() ? "-" : label) << " phantom=" << to_string(phantom);
    if (phantom == PhantomKind::image_file) os << " image=" << image_path.string();
    os << " n=" << mask.n << " mask=" << to_string(mask.kind);
    switch (mask.kind) {
    case MaskKind::radial: os << " rays=" << mask.count; break;
    case MaskKind::parallel: os << " lines=" << mask.count; break;
    case MaskKind::random: os << " rate=" << fmt_double(mask.rate) << " mask_seed=" << mask.seed; break;
    }
    os << " delta=" << fmt_double(delta) << " noise_seed=" << noise_seed << " r0=" << fmt_double(solver.r0)
       << " gamma=" << fmt_double(solver.gamma) << " beta=" << fmt_double(solver.beta)
       << " tau=" << fmt_double(solver.tau) << " mu_factor=" << fmt_double(solver.mu_factor)
       << " theta_safety=" << fmt_double(solver.theta_safety) << " h_max=" << solver.h_max
       << " outer_tol=" << fmt_double(solver.outer_tol) << " psnr_target="
       << (solver.psnr_target ? fmt_double(*solver.psnr_target) : std::string("none"))
       << " max_fb_total=" << solver.max_fb_total;
    return os.str();
}

FncrConfig default_solver_config(MaskKind kind, double delta)
{
    FncrConfig c;
    if (kind == MaskKind::radial) {
        c.r0 = delta > 0.0 ? 1e-2 : 1e-4;
        c.gamma = delta > 0.0 ? 0.2 : 0.05;
    } else {
        c.r0 = 0.05;
        c.gamma = 0.5;
    }
    c.beta = 1.0;
    c.tau = 0.1;
    c.psnr_target = 100.0;
    c.max_fb_total = 5000;
    return c;
}

ExperimentConfig parse_experiment_line(const std::string& line)
{
    std::map<std::string, std::string> kv;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::invalid_argument("experiment: expected key=value, got '" + tok + "'");
        }
        const std::string key = tok.substr(0, eq);
        if (!kv.emplace(key, tok.substr(eq + 1)).second) {
            throw std::invalid_argument("experiment: duplicate key '" + key + "'");
        }
    }
    auto take = [&kv](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    ExperimentConfig cfg;
    if (auto v = take("label")) cfg.label = *v == "-" ? "" : *v;
    if (auto v = take("phantom")) cfg.phantom = parse_phantom_kind(*v);
    if (auto v = take("image")) cfg.image_path = *v;
    if (auto v = take("n")) cfg.mask.n = to_uint("n", *v);
    if (auto v = take("mask")) cfg.mask.kind = parse_mask_kind(*v);
    if (auto v = take("rays")) cfg.mask.count = to_uint("rays", *v);
    if (auto v = take("lines")) cfg.mask.count = to_uint("lines", *v);
    if (auto v = take("rate")) cfg.mask.rate = to_double("rate", *v);
    if (auto v = take("mask_seed")) cfg.mask.seed = to_uint("mask_seed", *v);
    if (auto v = take("delta")) cfg.delta = to_double("delta", *v);
    if (auto v = take("noise_seed")) cfg.noise_seed = to_uint("noise_seed", *v);

    cfg.solver = default_solver_config(cfg.mask.kind, cfg.delta);
    if (auto v = take("r0")) cfg.solver.r0 = to_double("r0", *v);
    if (auto v = take("gamma")) cfg.solver.gamma = to_double("gamma", *v);
    if (auto v = take("beta")) cfg.solver.beta = to_double("beta", *v);
    if (auto v = take("tau")) cfg.solver.tau = to_double("tau", *v);
    if (auto v = take("mu_factor")) cfg.solver.mu_factor = to_double("mu_factor", *v);
    if (auto v = take("theta_safety")) cfg.solver.theta_safety = to_double("theta_safety", *v);
    if (auto v = take("h_max")) cfg.solver.h_max = to_uint("h_max", *v);
    if (auto v = take("outer_tol")) cfg.solver.outer_tol = to_double("outer_tol", *v);
    if (auto v = take("psnr_target")) {
        if (*v == "none") cfg.solver.psnr_target.reset();
        else cfg.solver.psnr_target = to_double("psnr_target", *v);
    }
    if (auto v = take("max_fb_total")) cfg.solver.max_fb_total = to_uint("max_fb_total", *v);

    if (!kv.empty()) throw std::invalid_argument("experiment: unknown key '" + kv.begin()->first + "'");
    if (cfg.phantom != PhantomKind::image_file && !cfg.image_path.empty()) {
        throw std::invalid_argument("experiment: image= only applies to phantom=image-file");
    }
    cfg.validate();
    return cfg;
}

std::vector<ExperimentConfig> parse_experiment_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open experiment file '" + path.string() + "'");
    std::vector<ExperimentConfig> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            rows.push_back(parse_experiment_line(line));
        } catch (const std::exception& e) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

Image make_phantom(const ExperimentConfig& cfg)
{
    switch (cfg.phantom) {
    case PhantomKind::shepp_logan: return shepp_logan(cfg.mask.n);
    case PhantomKind::blocks: return blocks_phantom(cfg.mask.n);
    case PhantomKind::image_file: {
        Image u = read_pgm(cfg.image_path);
        require_same_n(u.n(), cfg.mask.n, "image-file phantom");
        return u;
    }
    }
    throw std::logic_error("unreachable phantom kind");
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg)
{
    ExperimentOutcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        const Image truth = make_phantom(cfg);
        const Mask m = make_mask(cfg.mask);
        out.sampling_ratio = sampling_ratio(m);
        KSpace z = forward(truth, m);
        if (cfg.delta > 0.0) z = add_noise(z, m, cfg.delta, cfg.noise_seed);
        out.psnr0 = psnr(adjoint(z, m), truth);

        const FncrResult r = fncr_run(z, m, cfg.solver, truth);
        out.psnr = psnr(r.u, truth);
        out.n_bar = r.trace.n_bar;
        out.continuation_steps = r.trace.continuation.size();
        out.mean_inner = r.trace.mean_inner_per_split();
        out.stop_reason = r.trace.stop_reason;
        out.ok = true;
    } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::vector<ExperimentOutcome> run_batch(const std::vector<ExperimentConfig>& rows, std::size_t threads)
{
    std::vector<ExperimentOutcome> results(rows.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < rows.size(); k = next++) results[k] = run_experiment(rows[k]);
    };
    const std::size_t count = std::max<std::size_t>(1, std::min(threads, rows.size()));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
    return results;
}

std::string csv_header()
{
    return "row,label,phantom,image,n,mask,rays_or_lines,rate,mask_seed,delta,noise_seed,r0,gamma,beta,tau,"
           "mu_factor,theta_safety,h_max,outer_tol,psnr_target,max_fb_total,"
           "S_r,PSNR_0,n_bar,PSNR,ell_steps,mean_inner,stop,status,wall_time_s";
}

std::string csv_row(std::size_t index, const ExperimentConfig& cfg, const ExperimentOutcome& out)
{
    std::ostringstream os;
    const FncrConfig& s = cfg.solver;
    const bool counted = cfg.mask.kind != MaskKind::random;
    os << index << ',' << quoted(cfg.label) << ',' << to_string(cfg.phantom) << ','
       << quoted(cfg.image_path.string()) << ',' << cfg.mask.n << ',' << to_string(cfg.mask.kind) << ','
       << (counted ? std::to_string(cfg.mask.count) : "") << ','
       << (counted ? "" : fmt_double(cfg.mask.rate)) << ',' << (counted ? "" : std::to_string(cfg.mask.seed))
       << ',' << fmt_double(cfg.delta) << ',' << cfg.noise_seed << ',' << fmt_double(s.r0) << ','
       << fmt_double(s.gamma) << ',' << fmt_double(s.beta) << ',' << fmt_double(s.tau) << ','
       << fmt_double(s.mu_factor) << ',' << fmt_double(s.theta_safety) << ',' << s.h_max << ','
       << fmt_double(s.outer_tol) << ',' << (s.psnr_target ? fmt_double(*s.psnr_target) : "none") << ','
       << s.max_fb_total << ',';
    if (out.ok) {
        os << fmt_fixed(out.sampling_ratio, 4) << ',' << fmt_fixed(out.psnr0, 4) << ',' << out.n_bar << ','
           << fmt_fixed(out.psnr, 4) << ',' << out.continuation_steps << ',' << fmt_fixed(out.mean_inner, 4)
           << ',' << out.stop_reason << ",ok,";
    } else {
        os << ",,,,,,," << quoted("error: " + out.error) << ',';
    }
    os << fmt_fixed(out.wall_seconds, 3);
    return os.str();
}

std::size_t threads_from_env()
{
    const char* v = std::getenv("FNCR_THREADS");
    if (v == nullptr || *v == '\0') return 1;
    try {
        const auto t = std::stoul(v);
        return t == 0 ? 1 : t;
    } catch (const std::exception&) {
        return 1;
    }
}

} // namespace fncr
