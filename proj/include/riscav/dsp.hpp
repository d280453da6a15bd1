// SPDX-License-Identifier: Apache-2.0
//
// Signal-processing pipeline: per-frequency mask variability, operating-band
// selection, CIR extraction via a band-limited inverse DFT, the peak-power
// figure of merit and RMS delay spread.
#pragma once

#include <span>
#include <vector>

#include "riscav/core.hpp"

namespace riscav::dsp {

enum class SpectralWindow { rectangular, hann };

// Knobs of the CIR/FOM pipeline. Defaults: 0.286 ns peak window, 50 ns
// cutoff, 16x zero padding, rectangular spectral window.
struct FomConfig {
    double window_s = 0.286e-9;
    double cutoff_s = 50e-9;
    int zero_pad_factor = 16;
    SpectralWindow spectral_window = SpectralWindow::rectangular;

    void validate() const;
};

// Location and power of the strongest CIR sample at or before the cutoff.
struct PeakInfo {
    double t_o_s = 0.0;
    int peak_index = 0;
    double peak_power = 0.0;
};

struct MaskStdOptions {
    // Population (divide by M) on linear magnitude by default; both
    // conventions can be switched.
    bool sample_convention = false;
    bool db_magnitude = false;
};

// Per-frequency standard deviation of |H| across all masks of the dataset.
// Magnitudes are accumulated in sorted order, so the result is exactly
// invariant under reordering of the dataset. A single-mask dataset yields
// all zeros.
std::vector<double> mask_std(const core::MaskSweepDataset& dataset,
                             const MaskStdOptions& options = {});

// Smallest contiguous sub-grid containing every frequency whose deviation is
// at least `fraction` of the maximum. If only a single grid point qualifies,
// the band is widened by one neighbouring point (the side with the larger
// deviation) so the result is a valid two-point grid.
core::FrequencyGrid select_band(std::span<const double> std_per_freq,
                                const core::FrequencyGrid& grid, double fraction = 0.5);

// Band-limited inverse DFT of the sweep: spectral window, zero padding to
// zero_pad_factor * count, then a complex-envelope shift that maps the band
// center to zero frequency. t_step = 1 / (zero_pad_factor * count * spacing).
// Magnitudes, and hence FOM and delay spread, do not depend on the envelope
// convention. Energy satisfies sum |W H|^2 == L * sum |cir|^2 (L = padded
// length), see docs/FORMATS.md.
core::Cir cir_from_sweep(const core::ChannelSweep& sweep, const FomConfig& cfg = {});

// Maximum of |CIR|^2 over samples with t <= cutoff; ties break toward the
// earliest time. All-zero input within the cutoff is a zero-energy error.
PeakInfo find_peak(const core::Cir& cir, const FomConfig& cfg = {});

// Ratio of peak-window power to total power up to the cutoff. The numerator
// window is the closed interval |t - t_o| <= window/2 intersected with
// [0, cutoff], so the result is always in (0, 1].
double fom(const core::Cir& cir, const FomConfig& cfg = {});

// RMS width of the |CIR|^2 profile up to the cutoff.
double delay_spread(const core::Cir& cir, const FomConfig& cfg = {});

} // namespace riscav::dsp
