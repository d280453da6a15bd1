// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: one JSON document selecting the channel source
// (simulated scene or recorded archive), the frequency grid, FOM settings,
// the mask list for campaign generation and the search strategy. Any field
// can be overridden from the command line with --set dotted.path=value.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "riscav/core.hpp"
#include "riscav/dsp.hpp"
#include "riscav/physics.hpp"

namespace riscav::cli {

// Mask list used by `simulate` and `characterize` on a simulated source.
struct MaskSelection {
    enum class Kind { first_k, random, list };
    Kind kind = Kind::first_k;
    std::uint64_t k = 100;
    std::uint64_t n = 100;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> indices;

    // Materializes the selection for an n_elements-element surface.
    std::vector<core::Mask> materialize(int n_elements) const;
};

struct StrategyConfig {
    enum class Kind { exhaustive, coordinate_descent, random };
    Kind kind = Kind::exhaustive;
    int starts = 8;           // coordinate descent: seeded restarts
    int max_sweeps = 64;      // coordinate descent: pass limit
    std::uint64_t seed = 1;   // coordinate descent / random
    std::uint64_t n = 1000;   // random: draw count

    std::string name() const;
};

struct ExperimentConfig {
    std::optional<physics::SceneConfig> scene;         // simulated source
    std::optional<std::filesystem::path> archive;      // measured source
    core::FrequencyGrid grid{5.7e9, 6.1e9, 401};
    dsp::FomConfig fom{};
    MaskSelection masks{};
    StrategyConfig strategy{};
    double band_fraction = 0.5; // select_band threshold for characterize
    std::filesystem::path out_dir = "out";

    bool simulated() const { return scene.has_value(); }

    static ExperimentConfig from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;

    // Built-in defaults: 16-element scene, 5.7-6.1 GHz, 401 points,
    // 0.286 ns window / 50 ns cutoff, exhaustive strategy.
    static ExperimentConfig defaults();
};

// Reads the config file (or the defaults when path is empty), applies
// --set overrides, validates, and returns the result.
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides);

// Applies one `dotted.path=value` override; value is parsed as JSON when
// possible and treated as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

} // namespace riscav::cli
