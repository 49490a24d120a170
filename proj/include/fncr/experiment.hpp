#pragma once

// Batch experiment harness: phantom -> mask -> (noisy) samples -> FNCR -> metrics,
// one CSV row per configuration.
//
// Configuration files are plain text, one experiment per line, each line a list of
// whitespace-separated key=value pairs. '#' starts a comment. Example:
//
//   label=T1-M1-12 phantom=shepp-logan n=256 mask=radial rays=12
//   label=T1-M3-25 phantom=shepp-logan n=256 mask=random rate=0.25 mask_seed=7
//   label=noisy    mask=random rate=0.12 delta=0.01 noise_seed=3

#include "fncr/driver.hpp"
#include "fncr/grid.hpp"
#include "fncr/sampling.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fncr {

enum class PhantomKind { shepp_logan, blocks, image_file };

PhantomKind parse_phantom_kind(const std::string& name);
std::string to_string(PhantomKind kind);

struct ExperimentConfig {
    std::string label;
    PhantomKind phantom = PhantomKind::shepp_logan;
    std::filesystem::path image_path; // image_file only
    MaskSpec mask;
    double delta = 0.0;
    std::uint64_t noise_seed = 0;
    FncrConfig solver;

    void validate() const;

    /// Canonical key=value line that reproduces this configuration.
    std::string to_line() const;
};

/// Table defaults for the given mask kind and noise level: radial r0=1e-4,
/// gamma=0.05 (noisy radial r0=1e-2, gamma=0.2); parallel/random r0=0.05,
/// gamma=0.5; beta=1, tau=0.1, PSNR target 100, 5000 FB iterations at most.
FncrConfig default_solver_config(MaskKind kind, double delta);

/// Parses one configuration line; keys not given take the table defaults.
ExperimentConfig parse_experiment_line(const std::string& line);

/// Parses a whole configuration file, skipping blank and comment lines.
std::vector<ExperimentConfig> parse_experiment_file(const std::filesystem::path& path);

Image make_phantom(const ExperimentConfig& cfg);

struct ExperimentOutcome {
    bool ok = false;
    std::string error;
    double sampling_ratio = 0.0;
    double psnr0 = 0.0;
    double psnr = 0.0;
    std::size_t n_bar = 0;
    std::size_t continuation_steps = 0;
    double mean_inner = 0.0;
    std::string stop_reason;
    double wall_seconds = 0.0;
};

/// Runs one configuration; solver failures are reported in the outcome.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

/// Runs all rows on up to `threads` workers; results keep the input order.
std::vector<ExperimentOutcome> run_batch(const std::vector<ExperimentConfig>& rows, std::size_t threads);

std::string csv_header();
std::string csv_row(std::size_t index, const ExperimentConfig& cfg, const ExperimentOutcome& out);

/// Worker count from FNCR_THREADS, defaulting to 1.
std::size_t threads_from_env();

} // namespace fncr
