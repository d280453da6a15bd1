// SPDX-License-Identifier: Apache-2.0
//
// Domain types shared by every other component: binary RIS masks, uniform
// frequency grids, complex channel sweeps, impulse responses and the
// per-mask sweep dataset container. All types validate their invariants on
// construction and are immutable afterwards, so instances can be shared
// freely across threads.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "riscav/errors.hpp"

namespace riscav::core {

using Complex = std::complex<double>;

// One on/off assignment for all RIS elements. Element i maps to bit i of the
// unsigned mask index (element 0 is the least-significant bit); that encoding
// is fixed and used by every file format and log line.
class Mask {
  public:
    static constexpr int kMaxElements = 32;

    Mask(int n, std::uint32_t bits);

    static Mask from_index(std::uint64_t index, int n);
    static Mask all_off(int n) { return Mask(n, 0); }
    static Mask all_on(int n);

    std::uint64_t to_index() const { return bits_; }
    int size() const { return n_; }
    bool element_on(int i) const;

    // Copy with element i toggled; this mask is unchanged.
    Mask flipped(int i) const;

    friend bool operator==(const Mask& a, const Mask& b) = default;

  private:
    int n_;
    std::uint32_t bits_;
};

// Uniform frequency axis [f_start, f_stop] with `count` points. Spacing is
// implied, never stored.
class FrequencyGrid {
  public:
    FrequencyGrid(double f_start_hz, double f_stop_hz, int count);

    double f_start_hz() const { return f_start_hz_; }
    double f_stop_hz() const { return f_stop_hz_; }
    int count() const { return count_; }
    double spacing_hz() const { return (f_stop_hz_ - f_start_hz_) / (count_ - 1); }

    // Endpoint-exact: frequency(0) == f_start, frequency(count-1) == f_stop.
    double frequency(int i) const;
    std::vector<double> frequencies() const;

    friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) = default;

  private:
    double f_start_hz_;
    double f_stop_hz_;
    int count_;
};

// Complex transfer-function samples H(f) for one mask on one grid.
class ChannelSweep {
  public:
    ChannelSweep(FrequencyGrid grid, std::vector<Complex> samples);

    const FrequencyGrid& grid() const { return grid_; }
    const std::vector<Complex>& samples() const { return samples_; }

    friend bool operator==(const ChannelSweep& a, const ChannelSweep& b) = default;

  private:
    FrequencyGrid grid_;
    std::vector<Complex> samples_;
};

// Uniformly sampled complex impulse response on t = 0, t_step, 2*t_step, ...
class Cir {
  public:
    Cir(double t_step_s, std::vector<Complex> samples);

    double t_step_s() const { return t_step_s_; }
    const std::vector<Complex>& samples() const { return samples_; }
    int size() const { return static_cast<int>(samples_.size()); }
    double time(int i) const { return i * t_step_s_; }

    friend bool operator==(const Cir& a, const Cir& b) = default;

  private:
    double t_step_s_;
    std::vector<Complex> samples_;
};

// Parallel (mask, sweep) campaign. All sweeps share one identical grid and
// mask indices are unique.
class MaskSweepDataset {
  public:
    enum class Origin { simulated, measured };

    MaskSweepDataset(std::vector<Mask> masks, std::vector<ChannelSweep> sweeps, Origin origin);

    const std::vector<Mask>& masks() const { return masks_; }
    const std::vector<ChannelSweep>& sweeps() const { return sweeps_; }
    Origin origin() const { return origin_; }
    int size() const { return static_cast<int>(masks_.size()); }
    const FrequencyGrid& grid() const { return sweeps_.front().grid(); }
    int element_count() const { return masks_.front().size(); }

    friend bool operator==(const MaskSweepDataset& a, const MaskSweepDataset& b) = default;

  private:
    std::vector<Mask> masks_;
    std::vector<ChannelSweep> sweeps_;
    Origin origin_;
};

} // namespace riscav::core
