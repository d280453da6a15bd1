// SPDX-License-Identifier: Apache-2.0
#include "riscav/core.hpp"

#include <cmath>
#include <set>
#include <string>

namespace riscav::core {

namespace {

void require_element_count(int n) {
    if (n < 1 || n > Mask::kMaxElements)
        throw ValidationError("mask element count must be in [1, " +
                              std::to_string(Mask::kMaxElements) + "], got " + std::to_string(n));
}

} // namespace

Mask::Mask(int n, std::uint32_t bits) : n_(n), bits_(bits) {
    require_element_count(n);
    if (n < 32 && (bits >> n) != 0)
        throw ValidationError("mask bits exceed element count " + std::to_string(n));
}

Mask Mask::from_index(std::uint64_t index, int n) {
    require_element_count(n);
    std::uint64_t states = std::uint64_t{1} << n;
    if (index >= states)
        throw ValidationError("mask index " + std::to_string(index) + " out of range [0, " +
                              std::to_string(states) + ") for " + std::to_string(n) + " elements");
    return Mask(n, static_cast<std::uint32_t>(index));
}

Mask Mask::all_on(int n) {
    require_element_count(n);
    std::uint32_t bits = n == 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1);
    return Mask(n, bits);
}

bool Mask::element_on(int i) const {
    if (i < 0 || i >= n_)
        throw ValidationError("element id " + std::to_string(i) + " out of range for " +
                              std::to_string(n_) + "-element mask");
    return (bits_ >> i) & 1u;
}

Mask Mask::flipped(int i) const {
    if (i < 0 || i >= n_)
        throw ValidationError("cannot flip element " + std::to_string(i) + " of a " +
                              std::to_string(n_) + "-element mask");
    return Mask(n_, bits_ ^ (std::uint32_t{1} << i));
}

FrequencyGrid::FrequencyGrid(double f_start_hz, double f_stop_hz, int count)
    : f_start_hz_(f_start_hz), f_stop_hz_(f_stop_hz), count_(count) {
    if (!(f_start_hz > 0.0) || !std::isfinite(f_start_hz))
        throw ValidationError("grid start frequency must be positive and finite");
    if (!(f_stop_hz > f_start_hz) || !std::isfinite(f_stop_hz))
        throw ValidationError("grid stop frequency must exceed start frequency");
    if (count < 2)
        throw ValidationError("grid needs at least 2 points, got " + std::to_string(count));
}

double FrequencyGrid::frequency(int i) const {
    // Blend of the endpoints; exact at i = 0 and i = count-1.
    double w = static_cast<double>(i) / (count_ - 1);
    return f_start_hz_ * (1.0 - w) + f_stop_hz_ * w;
}

std::vector<double> FrequencyGrid::frequencies() const {
    std::vector<double> out(static_cast<std::size_t>(count_));
    for (int i = 0; i < count_; ++i)
        out[static_cast<std::size_t>(i)] = frequency(i);
    return out;
}

ChannelSweep::ChannelSweep(FrequencyGrid grid, std::vector<Complex> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (static_cast<int>(samples_.size()) != grid_.count())
        throw ValidationError("sweep has " + std::to_string(samples_.size()) +
                              " samples for a " + std::to_string(grid_.count()) + "-point grid");
    for (const Complex& s : samples_)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw ValidationError("sweep contains a non-finite sample");
}

Cir::Cir(double t_step_s, std::vector<Complex> samples)
    : t_step_s_(t_step_s), samples_(std::move(samples)) {
    if (!(t_step_s > 0.0) || !std::isfinite(t_step_s))
        throw ValidationError("CIR time step must be positive and finite");
    if (samples_.size() < 2)
        throw ValidationError("CIR needs at least 2 samples");
    for (const Complex& s : samples_)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw ValidationError("CIR contains a non-finite sample");
}

MaskSweepDataset::MaskSweepDataset(std::vector<Mask> masks, std::vector<ChannelSweep> sweeps,
                                   Origin origin)
    : masks_(std::move(masks)), sweeps_(std::move(sweeps)), origin_(origin) {
    if (masks_.empty())
        throw ValidationError("dataset needs at least one mask");
    if (masks_.size() != sweeps_.size())
        throw ValidationError("dataset has " + std::to_string(masks_.size()) + " masks but " +
                              std::to_string(sweeps_.size()) + " sweeps");
    const FrequencyGrid& g = sweeps_.front().grid();
    for (const ChannelSweep& s : sweeps_)
        if (!(s.grid() == g))
            throw ValidationError("dataset sweeps do not share one grid");
    int n = masks_.front().size();
    std::set<std::uint64_t> seen;
    for (const Mask& m : masks_) {
        if (m.size() != n)
            throw ValidationError("dataset masks have mixed element counts");
        if (!seen.insert(m.to_index()).second)
            throw ValidationError("duplicate mask index " + std::to_string(m.to_index()) +
                                  " in dataset");
    }
}

} // namespace riscav::core
