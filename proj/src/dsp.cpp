// SPDX-License-Identifier: Apache-2.0
#include "riscav/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "riscav/errors.hpp"
#include "riscav/fft.hpp"

namespace riscav::dsp {

namespace {

// Slack for closed-interval comparisons on computed sample times.
constexpr double kTimeTolerance = 1e-12;

bool within(double t, double limit) {
    return t <= limit * (1.0 + kTimeTolerance);
}

int last_index_within_cutoff(const core::Cir& cir, double cutoff_s) {
    int last = -1;
    for (int i = 0; i < cir.size(); ++i) {
        if (!within(cir.time(i), cutoff_s))
            break;
        last = i;
    }
    return last;
}

} // namespace

void FomConfig::validate() const {
    if (!(window_s > 0.0) || !(window_s < cutoff_s))
        throw ValidationError("FOM window must satisfy 0 < window < cutoff");
    if (zero_pad_factor < 1)
        throw ValidationError("zero_pad_factor must be >= 1");
}

std::vector<double> mask_std(const core::MaskSweepDataset& dataset, const MaskStdOptions& options) {
    int n_freq = dataset.grid().count();
    int n_masks = dataset.size();
    std::vector<double> out(static_cast<std::size_t>(n_freq), 0.0);
    if (n_masks < 2)
        return out;

    std::vector<double> mags(static_cast<std::size_t>(n_masks));
    for (int j = 0; j < n_freq; ++j) {
        for (int m = 0; m < n_masks; ++m) {
            double mag = std::abs(dataset.sweeps()[static_cast<std::size_t>(m)]
                                      .samples()[static_cast<std::size_t>(j)]);
            if (options.db_magnitude) {
                if (!(mag > 0.0))
                    throw NumericalError("dB magnitude convention requires nonzero |H| samples");
                mag = 20.0 * std::log10(mag);
            }
            mags[static_cast<std::size_t>(m)] = mag;
        }
        // Sorted accumulation makes the value independent of mask order.
        std::sort(mags.begin(), mags.end());
        double mean = 0.0;
        for (double v : mags)
            mean += v;
        mean /= n_masks;
        double ss = 0.0;
        for (double v : mags)
            ss += (v - mean) * (v - mean);
        double denom = options.sample_convention ? n_masks - 1 : n_masks;
        out[static_cast<std::size_t>(j)] = std::sqrt(ss / denom);
    }
    return out;
}

core::FrequencyGrid select_band(std::span<const double> std_per_freq,
                                const core::FrequencyGrid& grid, double fraction) {
    if (static_cast<int>(std_per_freq.size()) != grid.count())
        throw ValidationError("deviation vector length does not match the grid");
    if (!(fraction > 0.0) || fraction > 1.0)
        throw ValidationError("band fraction must be in (0, 1]");
    double max_std = 0.0;
    for (double v : std_per_freq)
        max_std = std::max(max_std, v);
    if (!(max_std > 0.0))
        throw NumericalError("no mask-sensitive band: deviation is zero everywhere");

    double threshold = fraction * max_std;
    int first = -1;
    int last = -1;
    for (int i = 0; i < grid.count(); ++i) {
        if (std_per_freq[static_cast<std::size_t>(i)] >= threshold) {
            if (first < 0)
                first = i;
            last = i;
        }
    }
    if (first == last) {
        // Single qualifying point: widen toward the stronger neighbour so the
        // result is a valid grid.
        double left = first > 0 ? std_per_freq[static_cast<std::size_t>(first - 1)] : -1.0;
        double right =
            last + 1 < grid.count() ? std_per_freq[static_cast<std::size_t>(last + 1)] : -1.0;
        if (left >= right)
            --first;
        else
            ++last;
    }
    return core::FrequencyGrid(grid.frequency(first), grid.frequency(last), last - first + 1);
}

core::Cir cir_from_sweep(const core::ChannelSweep& sweep, const FomConfig& cfg) {
    cfg.validate();
    const auto& samples = sweep.samples();
    std::size_t n = samples.size();
    std::size_t padded = n * static_cast<std::size_t>(cfg.zero_pad_factor);

    std::vector<core::Complex> spectrum(n);
    for (std::size_t k = 0; k < n; ++k) {
        double w = 1.0;
        if (cfg.spectral_window == SpectralWindow::hann)
            w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(n - 1));
        spectrum[k] = samples[k] * w;
    }

    std::vector<core::Complex> cir = fft::inverse_dft(spectrum, padded);

    // Complex-envelope shift: bin (n-1)/2 (band center) maps to zero
    // frequency. The j*(n-1) product is reduced mod 2L in integers to keep
    // the phase exact for long transforms.
    std::uint64_t two_l = 2 * static_cast<std::uint64_t>(padded);
    for (std::size_t j = 0; j < padded; ++j) {
        std::uint64_t r = (static_cast<std::uint64_t>(j) * (n - 1)) % two_l;
        double angle =
            -std::numbers::pi * static_cast<double>(r) / static_cast<double>(padded);
        cir[j] *= core::Complex(std::cos(angle), std::sin(angle));
    }

    double t_step = 1.0 / (static_cast<double>(padded) * sweep.grid().spacing_hz());
    return core::Cir(t_step, std::move(cir));
}

PeakInfo find_peak(const core::Cir& cir, const FomConfig& cfg) {
    cfg.validate();
    int last = last_index_within_cutoff(cir, cfg.cutoff_s);
    if (last < 0)
        throw NumericalError("no CIR samples at or before the cutoff");
    PeakInfo info;
    double best = 0.0;
    int best_index = -1;
    for (int i = 0; i <= last; ++i) {
        double p = std::norm(cir.samples()[static_cast<std::size_t>(i)]);
        if (p > best) { // strict: ties keep the earliest index
            best = p;
            best_index = i;
        }
    }
    if (best_index < 0)
        throw NumericalError("CIR has zero energy within the cutoff");
    info.peak_index = best_index;
    info.t_o_s = cir.time(best_index);
    info.peak_power = best;
    return info;
}

double fom(const core::Cir& cir, const FomConfig& cfg) {
    PeakInfo peak = find_peak(cir, cfg);
    int last = last_index_within_cutoff(cir, cfg.cutoff_s);
    double half_window = 0.5 * cfg.window_s;
    double numerator = 0.0;
    double denominator = 0.0;
    for (int i = 0; i <= last; ++i) {
        double p = std::norm(cir.samples()[static_cast<std::size_t>(i)]);
        denominator += p;
        if (within(std::abs(cir.time(i) - peak.t_o_s), half_window))
            numerator += p;
    }
    // Both integrals use the rectangle rule; the shared t_step factor cancels
    // but is kept for the documented definition.
    return (numerator * cir.t_step_s()) / (denominator * cir.t_step_s());
}

double delay_spread(const core::Cir& cir, const FomConfig& cfg) {
    cfg.validate();
    int last = last_index_within_cutoff(cir, cfg.cutoff_s);
    if (last < 0)
        throw NumericalError("no CIR samples at or before the cutoff");
    double total = 0.0;
    double first_moment = 0.0;
    double second_moment = 0.0;
    for (int i = 0; i <= last; ++i) {
        double p = std::norm(cir.samples()[static_cast<std::size_t>(i)]);
        double t = cir.time(i);
        total += p;
        first_moment += p * t;
        second_moment += p * t * t;
    }
    if (!(total > 0.0))
        throw NumericalError("CIR has zero energy within the cutoff");
    double mean = first_moment / total;
    double variance = second_moment / total - mean * mean;
    return std::sqrt(std::max(variance, 0.0));
}

} // namespace riscav::dsp
