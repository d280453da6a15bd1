// SPDX-License-Identifier: Apache-2.0
//
// Coupled-dipole cavity surrogate. Walls, RIS elements and antenna ports are
// point dipoles in 2D; each dipole responds with a Lorentzian polarizability
// (the RIS resonance toggles with the diode state) and the self-consistent
// multiple-scattering system is solved per frequency to produce
// mask-dependent channel sweeps standing in for hardware measurements.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "riscav/core.hpp"

namespace riscav::physics {

using core::Complex;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kMinSeparation = 1e-6;      // meters between dipoles
inline constexpr double kMaxConditionNumber = 1e12; // solve refusal threshold
inline constexpr double kMaxSolveResidual = 1e-10;  // relative residual bound

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

enum class DipoleKind { wall, ris, antenna };

// One point scatterer. `coupling` scales the Lorentzian amplitude; a coupling
// of zero makes the dipole inert (used for non-scattering antenna ports).
struct DipoleSpec {
    Vec2 position;
    DipoleKind kind = DipoleKind::wall;
    double resonance_off_hz = 6.0e9;
    double resonance_on_hz = 6.0e9;
    double linewidth_hz = 0.15e9;
    double coupling = 1.0;
};

// Rectangular cavity blueprint. Wall dipoles are laid out uniformly along the
// perimeter (with optional seeded jitter for disorder); the RIS is mounted a
// small standoff inside the left wall, centered vertically, as a line
// (ris_rows = 1) or a grid (e.g. 4 rows x 4 columns for 16 elements).
struct SceneConfig {
    double width_m = 0.45;
    double height_m = 0.45;
    double wall_spacing_m = 0.025;
    double wall_jitter_m = 0.004;
    int ris_elements = 16;
    int ris_rows = 1;
    double ris_spacing_m = 0.024;
    double ris_standoff_m = 0.012;
    Vec2 tx{0.13, 0.11};
    Vec2 rx{0.32, 0.29};
    std::uint64_t seed = 1;

    double ris_resonance_off_hz = 6.0e9;
    double ris_resonance_on_hz = 5.5e9;
    double ris_linewidth_hz = 0.15e9;
    double ris_coupling = 4.0;

    double wall_resonance_hz = 9.0e9;
    double wall_linewidth_hz = 0.3e9;
    double wall_coupling = 6.0;

    // Antenna ports are pure source/probe points unless this is set.
    bool scattering_antennas = false;
    double antenna_resonance_hz = 7.0e9;
    double antenna_linewidth_hz = 1.0e9;
    double antenna_coupling = 0.5;
};

// Immutable geometric/electromagnetic description used by the solver.
class Scene {
  public:
    Scene(std::vector<DipoleSpec> dipoles, int tx, int rx, std::vector<int> ris_order);

    static Scene build(const SceneConfig& config);

    const std::vector<DipoleSpec>& dipoles() const { return dipoles_; }
    int tx() const { return tx_; }
    int rx() const { return rx_; }
    const std::vector<int>& ris_order() const { return ris_order_; }
    int ris_count() const { return static_cast<int>(ris_order_.size()); }

    // Same scene with transmit and receive ports exchanged.
    Scene with_swapped_ports() const;

  private:
    std::vector<DipoleSpec> dipoles_;
    int tx_;
    int rx_;
    std::vector<int> ris_order_;
};

// Lorentzian dipole response  alpha(f) = c * f_r^2 / (f_r^2 - f^2 - i f G)
// with f_r = resonance_off for state 0 (and for non-RIS kinds) and
// resonance_on for state 1. Im(alpha) >= 0 at every frequency.
Complex polarizability(const DipoleSpec& spec, bool state_on, double f_hz);

// 2D scalar free-space Green's function (i/4) H0^(1)(k d), symmetric in its
// arguments. Coincident points are a singularity error.
Complex greens_2d(const Vec2& a, const Vec2& b, double f_hz);

// Transfer function between the scene ports at one frequency: solves the
// self-consistent field system e = e_inc + A e (A_mn = G_mn alpha_n, zero
// diagonal; each dipole moment alpha_n e_n drives every other site) for the
// given excitation from tx and accumulates the direct path plus every
// scattered moment at rx. The source-indexed polarizability keeps the system
// reciprocal. Relative solve residual is kept below kMaxSolveResidual;
// ill-conditioned systems are refused.
Complex channel(const Scene& scene, const core::Mask& mask, double f_hz,
                double excitation = 1.0);

// channel() evaluated on every grid point.
core::ChannelSweep sweep(const Scene& scene, const core::Mask& mask,
                         const core::FrequencyGrid& grid);

// Precomputed mask-independent factorization of the scattering system, one
// block per grid frequency. Construction does the full-cavity work once;
// per-mask evaluation then costs a dense solve only over the RIS elements,
// which is what makes exhaustive 2^N searches tractable. Values agree with
// sweep() to solver precision (see tests). Immutable and safe for concurrent
// sweeps once constructed.
class SweepEngine {
  public:
    SweepEngine(Scene scene, core::FrequencyGrid grid, int threads = 1);
    ~SweepEngine();
    SweepEngine(SweepEngine&&) noexcept;
    SweepEngine& operator=(SweepEngine&&) noexcept;
    SweepEngine(const SweepEngine&) = delete;
    SweepEngine& operator=(const SweepEngine&) = delete;

    const Scene& scene() const { return scene_; }
    const core::FrequencyGrid& grid() const { return grid_; }

    core::ChannelSweep sweep(const core::Mask& mask, int threads = 1) const;
    Complex channel_at(const core::Mask& mask, int grid_index) const;

  private:
    struct FrequencyBlock;
    Scene scene_;
    core::FrequencyGrid grid_;
    std::vector<int> ris_elements_; // mask element id per active RIS dipole
    std::vector<FrequencyBlock> blocks_;
};

} // namespace riscav::physics
