// SPDX-License-Identifier: Apache-2.0
#include "riscav/optim.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_map>

#include "riscav/errors.hpp"
#include "riscav/rng.hpp"
#include "riscav/threading.hpp"

namespace riscav::optim {

namespace {

// Smallest-mask-index tie rule shared by every strategy.
SearchResult result_from_trace(std::vector<TraceEntry> trace, int element_count) {
    SearchResult result{core::Mask::all_off(element_count), 0.0, {}, 0};
    result.evaluations = trace.size();
    bool have_best = false;
    for (const TraceEntry& e : trace) {
        bool better = !have_best || e.fom > result.best_fom ||
                      (e.fom == result.best_fom && e.mask_index < result.best_mask.to_index());
        if (better) {
            result.best_fom = e.fom;
            result.best_mask = core::Mask::from_index(e.mask_index, element_count);
            have_best = true;
        }
    }
    result.trace = std::move(trace);
    return result;
}

// Evaluates unique masks once (in parallel when asked) and expands the cached
// values back onto the requested trace order.
std::vector<TraceEntry> evaluate_batch(const ChannelProvider& provider,
                                       const std::vector<std::uint64_t>& mask_indices,
                                       const dsp::FomConfig& cfg, int threads) {
    std::vector<std::uint64_t> unique = mask_indices;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

    std::vector<double> values(unique.size());
    parallel_for(unique.size(), threads, [&](std::size_t i) {
        values[i] = evaluate_mask(provider, core::Mask::from_index(unique[i], provider.element_count()),
                                  cfg);
    });

    std::unordered_map<std::uint64_t, double> memo;
    memo.reserve(unique.size());
    for (std::size_t i = 0; i < unique.size(); ++i)
        memo.emplace(unique[i], values[i]);

    std::vector<TraceEntry> trace;
    trace.reserve(mask_indices.size());
    for (std::uint64_t idx : mask_indices)
        trace.push_back({idx, memo.at(idx)});
    return trace;
}

} // namespace

SimulatedChannelProvider::SimulatedChannelProvider(physics::Scene scene, core::FrequencyGrid grid,
                                                   int threads)
    : engine_(std::move(scene), grid, threads) {}

int SimulatedChannelProvider::element_count() const {
    return std::max(engine_.scene().ris_count(), 1);
}

std::uint64_t SimulatedChannelProvider::available_masks() const {
    return std::uint64_t{1} << element_count();
}

core::Mask SimulatedChannelProvider::mask_at(std::uint64_t ordinal) const {
    return core::Mask::from_index(ordinal, element_count());
}

core::ChannelSweep SimulatedChannelProvider::sweep_for(const core::Mask& mask) const {
    return engine_.sweep(mask);
}

const core::FrequencyGrid& SimulatedChannelProvider::grid() const {
    return engine_.grid();
}

MeasuredChannelProvider::MeasuredChannelProvider(core::MaskSweepDataset dataset)
    : dataset_(std::move(dataset)) {
    sorted_order_.resize(static_cast<std::size_t>(dataset_.size()));
    for (std::size_t i = 0; i < sorted_order_.size(); ++i)
        sorted_order_[i] = i;
    std::sort(sorted_order_.begin(), sorted_order_.end(), [&](std::uint64_t a, std::uint64_t b) {
        return dataset_.masks()[a].to_index() < dataset_.masks()[b].to_index();
    });
    position_by_index_.reserve(sorted_order_.size());
    for (std::size_t i = 0; i < dataset_.masks().size(); ++i)
        position_by_index_.emplace(dataset_.masks()[i].to_index(), i);
}

int MeasuredChannelProvider::element_count() const {
    return dataset_.element_count();
}

std::uint64_t MeasuredChannelProvider::available_masks() const {
    return static_cast<std::uint64_t>(dataset_.size());
}

core::Mask MeasuredChannelProvider::mask_at(std::uint64_t ordinal) const {
    if (ordinal >= available_masks())
        throw ValidationError("mask ordinal out of range for the recorded campaign");
    return dataset_.masks()[sorted_order_[ordinal]];
}

core::ChannelSweep MeasuredChannelProvider::sweep_for(const core::Mask& mask) const {
    auto it = position_by_index_.find(mask.to_index());
    if (it == position_by_index_.end() || dataset_.masks()[it->second].size() != mask.size())
        throw ValidationError("mask index " + std::to_string(mask.to_index()) +
                              " is not part of the recorded campaign");
    return dataset_.sweeps()[it->second];
}

const core::FrequencyGrid& MeasuredChannelProvider::grid() const {
    return dataset_.grid();
}

double evaluate_mask(const ChannelProvider& provider, const core::Mask& mask,
                     const dsp::FomConfig& cfg) {
    return dsp::fom(dsp::cir_from_sweep(provider.sweep_for(mask), cfg), cfg);
}

SearchResult exhaustive_search(const ChannelProvider& provider, const dsp::FomConfig& cfg,
                               int threads) {
    std::uint64_t total = provider.available_masks();
    if (total > kExhaustiveLimit)
        throw GuardError("exhaustive search over " + std::to_string(total) +
                         " masks exceeds the " + std::to_string(kExhaustiveLimit) +
                         " limit; use coordinate_descent instead");

    std::vector<std::uint64_t> order(total);
    for (std::uint64_t i = 0; i < total; ++i)
        order[i] = provider.mask_at(i).to_index();

    return result_from_trace(evaluate_batch(provider, order, cfg, threads),
                             provider.element_count());
}

SearchResult coordinate_descent(const ChannelProvider& provider, const core::Mask& start,
                                int max_sweeps, const dsp::FomConfig& cfg) {
    if (max_sweeps < 1)
        throw ValidationError("coordinate descent needs max_sweeps >= 1");

    std::unordered_map<std::uint64_t, double> memo;
    std::vector<TraceEntry> trace;
    auto evaluate = [&](const core::Mask& mask) {
        auto it = memo.find(mask.to_index());
        double value;
        if (it != memo.end()) {
            value = it->second;
        } else {
            value = evaluate_mask(provider, mask, cfg);
            memo.emplace(mask.to_index(), value);
        }
        trace.push_back({mask.to_index(), value});
        return value;
    };

    core::Mask current = start;
    double current_fom = evaluate(current);
    for (int pass = 0; pass < max_sweeps; ++pass) {
        bool improved = false;
        for (int i = 0; i < current.size(); ++i) {
            core::Mask trial = current.flipped(i);
            double trial_fom = evaluate(trial);
            if (trial_fom > current_fom) { // strict improvement only
                current = trial;
                current_fom = trial_fom;
                improved = true;
            }
        }
        if (!improved)
            break;
    }
    return result_from_trace(std::move(trace), provider.element_count());
}

SearchResult random_search(const ChannelProvider& provider, std::uint64_t n, std::uint64_t seed,
                           const dsp::FomConfig& cfg, int threads) {
    if (n < 1)
        throw ValidationError("random search needs at least one draw");
    std::mt19937_64 rng(seed);
    std::uint64_t total = provider.available_masks();
    std::vector<std::uint64_t> order;
    order.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        order.push_back(provider.mask_at(bounded_uint64(rng, total)).to_index());
    return result_from_trace(evaluate_batch(provider, order, cfg, threads),
                             provider.element_count());
}

std::vector<core::Mask> baseline_masks(int n) {
    return {core::Mask::all_off(n), core::Mask::all_on(n)};
}

} // namespace riscav::optim
