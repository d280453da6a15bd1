// SPDX-License-Identifier: Apache-2.0
//
// riscav command line: simulate | characterize | optimize | report.
// Exit codes: 0 ok, 1 I/O, 2 config, 3 numerical, 4 guard refusal.
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "riscav/commands.hpp"
#include "riscav/errors.hpp"

namespace {

using riscav::cli::ExperimentConfig;
using riscav::cli::RunOptions;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    bool force = false;
    bool svg = false;
    int threads = 0;
    std::uint64_t mask_count = 0;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args, bool with_svg, bool with_masks) {
    cmd->add_option("--config", args.config_path, "experiment config JSON file");
    cmd->add_option("--set", args.overrides, "override a config field, dotted.path=value")
        ->take_all();
    cmd->add_option("--out", args.out_dir, "output directory (overrides config out_dir)");
    cmd->add_flag("--force", args.force, "overwrite existing artifacts");
    cmd->add_option("--threads", args.threads, "worker threads, 0 = all hardware threads");
    if (with_svg)
        cmd->add_flag("--svg", args.svg, "render SVG plots");
    if (with_masks)
        cmd->add_option("--masks", args.mask_count, "number of masks to characterize");
}

RunOptions to_options(const CommonArgs& args) {
    RunOptions options;
    if (!args.out_dir.empty())
        options.out_dir = args.out_dir;
    options.force = args.force;
    options.svg = args.svg;
    options.threads = args.threads;
    if (args.mask_count > 0)
        options.mask_count = args.mask_count;
    return options;
}

ExperimentConfig resolve_config(const CommonArgs& args) {
    return riscav::cli::load_config(args.config_path, args.overrides);
}

int report_error(int code, const char* category, const std::string& message) {
    nlohmann::json line = {{"error", {{"exit", code}, {"category", category}, {"message", message}}}};
    std::cerr << line.dump() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-shaped channel impulse responses in a reverberant cavity"};
    app.require_subcommand(1);

    CommonArgs simulate_args, characterize_args, optimize_args;
    std::string report_dir;

    CLI::App* simulate = app.add_subcommand("simulate", "generate a mask sweep archive");
    add_common_flags(simulate, simulate_args, false, false);

    CLI::App* characterize =
        app.add_subcommand("characterize", "per-frequency mask variability and band selection");
    add_common_flags(characterize, characterize_args, false, true);

    CLI::App* optimize = app.add_subcommand("optimize", "search masks for the best FOM");
    add_common_flags(optimize, optimize_args, true, false);

    CLI::App* report = app.add_subcommand("report", "summarize an optimize output directory");
    report->add_option("dir", report_dir, "directory produced by optimize")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return report_error(2, "config", std::string("argument error: ") + e.what());
    }

    try {
        if (simulate->parsed())
            riscav::cli::cmd_simulate(resolve_config(simulate_args), to_options(simulate_args));
        else if (characterize->parsed())
            riscav::cli::cmd_characterize(resolve_config(characterize_args),
                                          to_options(characterize_args));
        else if (optimize->parsed())
            riscav::cli::cmd_optimize(resolve_config(optimize_args), to_options(optimize_args));
        else if (report->parsed())
            riscav::cli::cmd_report(report_dir);
        return 0;
    } catch (const riscav::GuardError& e) {
        return report_error(4, "guard", e.what());
    } catch (const riscav::NumericalError& e) {
        return report_error(3, "numerical", e.what());
    } catch (const riscav::ValidationError& e) {
        return report_error(2, "config", e.what());
    } catch (const riscav::IoError& e) {
        return report_error(1, "io", e.what());
    } catch (const std::exception& e) {
        return report_error(1, "internal", e.what());
    }
}
