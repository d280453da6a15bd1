// SPDX-License-Identifier: Apache-2.0
//
// The four batch workflows behind the CLI subcommands. Each command throws
// (ValidationError/IoError/NumericalError/GuardError) on failure; the CLI
// entry point maps error categories onto exit codes.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "riscav/config.hpp"

namespace riscav::cli {

struct RunOptions {
    std::optional<std::filesystem::path> out_dir; // --out override
    bool force = false;                           // overwrite existing artifacts
    bool svg = false;                             // render plots
    int threads = 0;                              // 0 = all hardware threads
    std::optional<std::uint64_t> mask_count;      // --masks override
};

// Generates sweeps for the configured mask list and exports a sweep archive.
void cmd_simulate(const ExperimentConfig& config, const RunOptions& options);

// Per-frequency deviation over masks plus automatic band selection; emits
// std_vs_freq.csv and band.json.
void cmd_characterize(const ExperimentConfig& config, const RunOptions& options);

// Runs the configured search strategy; emits fom_trace.csv, best.json and
// cir_<label>.csv for best/worst/all_on/all_off (plus SVG plots on request).
void cmd_optimize(const ExperimentConfig& config, const RunOptions& options);

// Prints the summary table for a directory produced by cmd_optimize. Pure
// function of the directory contents.
void cmd_report(const std::filesystem::path& directory);

} // namespace riscav::cli
