// SPDX-License-Identifier: Apache-2.0
//
// Mask-search strategies over any channel provider: exhaustive enumeration,
// greedy coordinate descent, seeded random search and the all-on/all-off
// baselines. Every strategy is deterministic for a fixed provider, seed and
// configuration; FOM ties always resolve toward the smallest mask index.
#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "riscav/core.hpp"
#include "riscav/dsp.hpp"
#include "riscav/physics.hpp"

namespace riscav::optim {

// Channel source abstraction: a pure mask -> sweep mapping on a fixed grid.
// Simulated providers expose the full 2^N mask space; measured providers
// expose only the recorded masks and reject queries for any other.
class ChannelProvider {
  public:
    virtual ~ChannelProvider() = default;

    virtual int element_count() const = 0;
    virtual std::uint64_t available_masks() const = 0;
    // Enumeration order: ascending mask index.
    virtual core::Mask mask_at(std::uint64_t ordinal) const = 0;
    virtual core::ChannelSweep sweep_for(const core::Mask& mask) const = 0;
    virtual const core::FrequencyGrid& grid() const = 0;
    // True when every mask index in [0, 2^N) is available.
    virtual bool full_space() const = 0;
};

// Physics-backed provider; sweeps come from a precomputed SweepEngine.
class SimulatedChannelProvider final : public ChannelProvider {
  public:
    SimulatedChannelProvider(physics::Scene scene, core::FrequencyGrid grid, int threads = 1);

    int element_count() const override;
    std::uint64_t available_masks() const override;
    core::Mask mask_at(std::uint64_t ordinal) const override;
    core::ChannelSweep sweep_for(const core::Mask& mask) const override;
    const core::FrequencyGrid& grid() const override;
    bool full_space() const override { return true; }

    const physics::SweepEngine& engine() const { return engine_; }

  private:
    physics::SweepEngine engine_;
};

// Recorded-campaign provider over a measured (or previously simulated)
// dataset. Enumeration follows ascending mask index regardless of the
// dataset's storage order.
class MeasuredChannelProvider final : public ChannelProvider {
  public:
    explicit MeasuredChannelProvider(core::MaskSweepDataset dataset);

    int element_count() const override;
    std::uint64_t available_masks() const override;
    core::Mask mask_at(std::uint64_t ordinal) const override;
    core::ChannelSweep sweep_for(const core::Mask& mask) const override;
    const core::FrequencyGrid& grid() const override;
    bool full_space() const override { return false; }

  private:
    core::MaskSweepDataset dataset_;
    std::vector<std::uint64_t> sorted_order_; // dataset positions by mask index
    std::unordered_map<std::uint64_t, std::size_t> position_by_index_;
};

struct TraceEntry {
    std::uint64_t mask_index = 0;
    double fom = 0.0;
};

struct SearchResult {
    core::Mask best_mask;
    double best_fom = 0.0;
    std::vector<TraceEntry> trace; // one entry per evaluation, strategy order
    std::uint64_t evaluations = 0;
};

// Exhaustive searches beyond this many masks are refused.
inline constexpr std::uint64_t kExhaustiveLimit = std::uint64_t{1} << 24;

// Full pipeline for one mask: provider sweep -> CIR -> FOM.
double evaluate_mask(const ChannelProvider& provider, const core::Mask& mask,
                     const dsp::FomConfig& cfg);

// Every available mask exactly once, ascending index order. Refuses more
// than kExhaustiveLimit masks and suggests coordinate descent instead.
SearchResult exhaustive_search(const ChannelProvider& provider, const dsp::FomConfig& cfg,
                               int threads = 1);

// Greedy single-flip passes over elements 0..N-1, keeping strictly improving
// flips; stops after a pass without improvement or after max_sweeps passes.
SearchResult coordinate_descent(const ChannelProvider& provider, const core::Mask& start,
                                int max_sweeps, const dsp::FomConfig& cfg);

// n masks drawn uniformly with replacement from the provider's mask set.
// Duplicates are recorded in the trace but evaluated once.
SearchResult random_search(const ChannelProvider& provider, std::uint64_t n, std::uint64_t seed,
                           const dsp::FomConfig& cfg, int threads = 1);

// The all-off and all-on reference masks, in that order.
std::vector<core::Mask> baseline_masks(int n);

} // namespace riscav::optim
