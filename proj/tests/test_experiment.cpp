#include "fncr/experiment.hpp"
#include "fncr/io.hpp"
#include "fncr/phantom.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace fncr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("fncr_exp_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// exit status and combined output of the CLI
std::pair<int, std::string> cli(const std::string& args)
{
    const fs::path out = scratch("cli.out");
    const std::string cmd = std::string("\"") + FNCR_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return {status, slurp(out)};
}

std::string without_last_field(const std::string& row)
{
    return row.substr(0, row.rfind(','));
}

} // namespace

TEST_CASE("parse_experiment_line: defaults by mask kind")
{
    const ExperimentConfig a = parse_experiment_line("label=a n=64 mask=radial rays=12");
    CHECK(a.label == "a");
    CHECK(a.phantom == PhantomKind::shepp_logan);
    CHECK(a.mask.kind == MaskKind::radial);
    CHECK(a.mask.count == 12);
    CHECK(a.solver.r0 == 1e-4);
    CHECK(a.solver.gamma == 0.05);
    CHECK(a.solver.beta == 1.0);
    CHECK(a.solver.tau == 0.1);
    REQUIRE(a.solver.psnr_target.has_value());
    CHECK(*a.solver.psnr_target == 100.0);

    const ExperimentConfig b = parse_experiment_line("n=64 mask=radial rays=12 delta=0.01");
    CHECK(b.solver.r0 == 1e-2);
    CHECK(b.solver.gamma == 0.2);

    const ExperimentConfig c = parse_experiment_line("phantom=blocks n=64 mask=random rate=0.25 mask_seed=9");
    CHECK(c.phantom == PhantomKind::blocks);
    CHECK(c.mask.rate == 0.25);
    CHECK(c.mask.seed == 9);
    CHECK(c.solver.r0 == 0.05);
    CHECK(c.solver.gamma == 0.5);

    const ExperimentConfig d = parse_experiment_line("n=64 mask=parallel lines=16 r0=0.3 gamma=0.1 h_max=4 psnr_target=none");
    CHECK(d.mask.count == 16);
    CHECK(d.solver.r0 == 0.3);
    CHECK(d.solver.gamma == 0.1);
    CHECK(d.solver.h_max == 4);
    CHECK(!d.solver.psnr_target.has_value());
}

TEST_CASE("parse_experiment_line: errors")
{
    CHECK_THROWS(parse_experiment_line("n=64 mask=radial rays=12 colour=red"));
    CHECK_THROWS(parse_experiment_line("n=64 n=32 mask=radial rays=12"));
    CHECK_THROWS(parse_experiment_line("n=64 mask=radial rays"));
    CHECK_THROWS(parse_experiment_line("n=64 mask=spiral"));
    CHECK_THROWS(parse_experiment_line("n=abc mask=radial rays=12"));
    CHECK_THROWS(parse_experiment_line("n=64 mask=random rate=1.5"));
    CHECK_THROWS(parse_experiment_line("n=64 mask=radial rays=12 beta=2.5"));
    CHECK_THROWS(parse_experiment_line("n=64 mask=radial rays=12 delta=-1"));
    CHECK_THROWS(parse_experiment_line("phantom=image-file mask=radial rays=12"));
}

TEST_CASE("to_line round trips")
{
    for (const char* line : {"label=x n=48 mask=radial rays=7 delta=0.02 noise_seed=4",
                             "phantom=blocks n=32 mask=random rate=0.3 mask_seed=2 tau=0.2 psnr_target=none",
                             "n=40 mask=parallel lines=10 beta=0.5 mu_factor=0.7 theta_safety=0.5 outer_tol=1e-7"}) {
        const ExperimentConfig a = parse_experiment_line(line);
        const ExperimentConfig b = parse_experiment_line(a.to_line());
        CHECK(a.to_line() == b.to_line());
        CHECK(b.solver.beta == a.solver.beta);
        CHECK(b.solver.outer_tol == a.solver.outer_tol);
        CHECK(b.mask.rate == a.mask.rate);
        CHECK(b.delta == a.delta);
    }
}

TEST_CASE("parse_experiment_file: comments and line numbers")
{
    const fs::path p = scratch("cfg.txt");
    std::ofstream(p) << "# header\n\nlabel=one n=32 mask=radial rays=4 # trailing\n  \nlabel=two n=32 mask=random rate=0.5\n";
    const auto rows = parse_experiment_file(p);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].label == "one");
    CHECK(rows[1].mask.kind == MaskKind::random);

    std::ofstream(p) << "label=ok n=32 mask=radial rays=4\nlabel=bad n=32 mask=radial rays=4 oops=1\n";
    try {
        parse_experiment_file(p);
        FAIL("expected a parse error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("run_batch: deterministic rows, errors stay local")
{
    std::vector<ExperimentConfig> rows;
    rows.push_back(parse_experiment_line("label=a phantom=blocks n=32 mask=random rate=0.5 mask_seed=1 max_fb_total=60"));
    rows.push_back(parse_experiment_line("label=b phantom=image-file image=/nonexistent/x.pgm n=32 mask=radial rays=4"));
    rows.push_back(parse_experiment_line("label=c n=32 mask=radial rays=6 delta=0.01 noise_seed=2 max_fb_total=60"));

    const auto first = run_batch(rows, 1);
    const auto second = run_batch(rows, 2);
    REQUIRE(first.size() == 3);
    CHECK(first[0].ok);
    CHECK(!first[1].ok);
    CHECK(!first[1].error.empty());
    CHECK(first[2].ok);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(without_last_field(csv_row(k, rows[k], first[k])) == without_last_field(csv_row(k, rows[k], second[k])));
    }
    CHECK(first[0].psnr > first[0].psnr0);
    CHECK(first[0].sampling_ratio > 40.0);
    CHECK(first[0].n_bar > 0);

    const std::string header = csv_header();
    const auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
    for (std::size_t k = 0; k < rows.size(); ++k) CHECK(commas(csv_row(k, rows[k], first[k])) == commas(header));
    CHECK(csv_row(1, rows[1], first[1]).find("error") != std::string::npos);
}

TEST_CASE("command line tool")
{
    const fs::path img = scratch("p.pgm"), msk = scratch("m.pbm"), ks = scratch("z.fnk"), rec = scratch("r.pgm");
    const fs::path trace = scratch("t.csv");

    auto [s1, o1] = cli("phantom --kind shepp-logan --n 32 -o " + img.string());
    CHECK(s1 == 0);
    CHECK(read_pgm(img).n() == 32);

    auto [s2, o2] = cli("mask --kind parallel --n 32 --lines 32 -o " + msk.string());
    CHECK(s2 == 0);
    CHECK(o2.find("S_r 100.0000%") != std::string::npos);

    auto [s3, o3] = cli("mask --kind radial --n 256 --rays 12");
    CHECK(s3 == 0);
    CHECK(o3.find("S_r 5.") != std::string::npos);

    CHECK(cli("sample --image " + img.string() + " --mask " + msk.string() + " -o " + ks.string()).first == 0);
    auto [s4, o4] = cli("reconstruct --kspace " + ks.string() + " --mask " + msk.string() + " -o " + rec.string() +
                        " --truth " + img.string() + " --trace " + trace.string());
    CHECK(s4 == 0);
    CHECK(o4.find("psnr_target") != std::string::npos);
    CHECK(slurp(trace).rfind("ell,h,mu,lambda", 0) == 0);

    // the PGM round trip limits PSNR to the 16-bit quantization
    auto [s5, o5] = cli("evaluate --image " + rec.string() + " --truth " + img.string());
    CHECK(s5 == 0);
    CHECK(std::stod(o5) > 90.0);
    CHECK(cli("evaluate --image " + img.string() + " --truth " + img.string()).second.find("inf") != std::string::npos);

    CHECK(cli("mask --kind radial --n 32 --lines 4").first != 0);
    CHECK(cli("mask --kind random --n 32 --rays 4 --rate 0.2").first != 0);
    CHECK(cli("reconstruct --kspace " + img.string() + " --mask " + msk.string() + " -o " + rec.string()).first != 0);
    CHECK(cli("reconstruct --kspace " + ks.string() + " --mask " + msk.string() + " -o " + rec.string() +
              " --psnr-target 50")
              .first != 0);
    CHECK(cli("bogus").first != 0);
    fs::remove_all(img.parent_path());
}
