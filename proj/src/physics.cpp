// SPDX-License-Identifier: Apache-2.0
#include "riscav/physics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "riscav/errors.hpp"
#include "riscav/rng.hpp"
#include "riscav/threading.hpp"

namespace riscav::physics {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

void validate_dipole(const DipoleSpec& d, int index) {
    std::string tag = "dipole " + std::to_string(index);
    if (!std::isfinite(d.position.x) || !std::isfinite(d.position.y))
        throw ValidationError(tag + " has a non-finite position");
    if (!(d.linewidth_hz > 0.0))
        throw ValidationError(tag + " needs a positive linewidth");
    if (!(d.resonance_off_hz > 0.0) || !(d.resonance_on_hz > 0.0))
        throw ValidationError(tag + " needs positive resonance frequencies");
    if (d.kind == DipoleKind::ris && d.resonance_on_hz > d.resonance_off_hz)
        throw ValidationError(tag + ": on-state resonance must not exceed the off state");
    if (!(d.coupling >= 0.0))
        throw ValidationError(tag + " needs a non-negative coupling strength");
}

// Scatterers are the dipoles that actually respond; inert (coupling == 0)
// dipoles such as default antenna ports stay out of the linear system.
std::vector<int> scatterer_indices(const Scene& scene) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(scene.dipoles().size()); ++i)
        if (scene.dipoles()[static_cast<std::size_t>(i)].coupling > 0.0)
            out.push_back(i);
    return out;
}

// mask element driving dipole i, or -1.
std::vector<int> ris_element_of(const Scene& scene) {
    std::vector<int> out(scene.dipoles().size(), -1);
    for (int e = 0; e < scene.ris_count(); ++e)
        out[static_cast<std::size_t>(scene.ris_order()[static_cast<std::size_t>(e)])] = e;
    return out;
}

void check_mask(const Scene& scene, const core::Mask& mask) {
    // A scene without RIS elements accepts any mask (it acts as the empty
    // mask); otherwise sizes must agree.
    if (scene.ris_count() != 0 && mask.size() != scene.ris_count())
        throw ValidationError("mask has " + std::to_string(mask.size()) +
                              " elements but the scene has " + std::to_string(scene.ris_count()) +
                              " RIS dipoles");
}

bool dipole_state(const core::Mask& mask, int element) {
    return element >= 0 && mask.element_on(element);
}

std::string solve_context(double f_hz, const core::Mask& mask) {
    return " (f = " + std::to_string(f_hz) + " Hz, mask index " +
           std::to_string(mask.to_index()) + ")";
}

void check_conditioning(double rcond, double f_hz, const core::Mask& mask) {
    if (!(rcond > 1.0 / kMaxConditionNumber))
        throw NumericalError("scattering system is ill-conditioned" + solve_context(f_hz, mask));
}

} // namespace

double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

Scene::Scene(std::vector<DipoleSpec> dipoles, int tx, int rx, std::vector<int> ris_order)
    : dipoles_(std::move(dipoles)), tx_(tx), rx_(rx), ris_order_(std::move(ris_order)) {
    int n = static_cast<int>(dipoles_.size());
    for (int i = 0; i < n; ++i)
        validate_dipole(dipoles_[static_cast<std::size_t>(i)], i);
    if (tx_ < 0 || tx_ >= n || rx_ < 0 || rx_ >= n)
        throw ValidationError("antenna indices out of range");
    if (tx_ == rx_)
        throw ValidationError("transmit and receive ports must differ");
    if (dipoles_[static_cast<std::size_t>(tx_)].kind != DipoleKind::antenna ||
        dipoles_[static_cast<std::size_t>(rx_)].kind != DipoleKind::antenna)
        throw ValidationError("ports must reference antenna dipoles");
    std::vector<bool> used(dipoles_.size(), false);
    for (int idx : ris_order_) {
        if (idx < 0 || idx >= n)
            throw ValidationError("RIS order references dipole " + std::to_string(idx) +
                                  " outside the scene");
        if (dipoles_[static_cast<std::size_t>(idx)].kind != DipoleKind::ris)
            throw ValidationError("RIS order references a non-RIS dipole");
        if (used[static_cast<std::size_t>(idx)])
            throw ValidationError("RIS order references dipole " + std::to_string(idx) + " twice");
        used[static_cast<std::size_t>(idx)] = true;
    }
    if (static_cast<int>(ris_order_.size()) > core::Mask::kMaxElements)
        throw ValidationError("scene exceeds the maximum RIS element count");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (distance(dipoles_[static_cast<std::size_t>(i)].position,
                         dipoles_[static_cast<std::size_t>(j)].position) < kMinSeparation)
                throw ValidationError("dipoles " + std::to_string(i) + " and " +
                                      std::to_string(j) + " are closer than the minimum separation");
}

Scene Scene::build(const SceneConfig& config) {
    if (!(config.width_m > 0.0) || !(config.height_m > 0.0))
        throw ValidationError("cavity dimensions must be positive");
    if (!(config.wall_spacing_m > 0.0))
        throw ValidationError("wall dipole spacing must be positive");
    if (config.ris_elements < 0 || config.ris_elements > core::Mask::kMaxElements)
        throw ValidationError("RIS element count must be in [0, " +
                              std::to_string(core::Mask::kMaxElements) + "]");
    if (config.ris_elements > 0 && !(config.ris_spacing_m > 0.0))
        throw ValidationError("RIS element spacing must be positive");
    if (!(config.wall_jitter_m >= 0.0))
        throw ValidationError("wall jitter must be non-negative");

    auto inside = [&](const Vec2& p) {
        return p.x > 0.0 && p.x < config.width_m && p.y > 0.0 && p.y < config.height_m;
    };
    if (!inside(config.tx) || !inside(config.rx))
        throw ValidationError("antenna positions must lie strictly inside the cavity rectangle");

    std::vector<DipoleSpec> dipoles;
    std::mt19937_64 rng(config.seed);

    // Wall ring along the perimeter, bottom-left corner first,
    // counter-clockwise, with optional seeded jitter.
    double w = config.width_m;
    double h = config.height_m;
    double perimeter = 2.0 * (w + h);
    int n_wall = static_cast<int>(std::floor(perimeter / config.wall_spacing_m + 1e-9));
    for (int k = 0; k < n_wall; ++k) {
        double s = k * config.wall_spacing_m;
        Vec2 p;
        if (s < w)
            p = {s, 0.0};
        else if (s < w + h)
            p = {w, s - w};
        else if (s < 2.0 * w + h)
            p = {w - (s - w - h), h};
        else
            p = {0.0, s - 2.0 * w - h};
        p.x += symmetric_double(rng, config.wall_jitter_m);
        p.y += symmetric_double(rng, config.wall_jitter_m);
        DipoleSpec d;
        d.position = p;
        d.kind = DipoleKind::wall;
        d.resonance_off_hz = config.wall_resonance_hz;
        d.resonance_on_hz = config.wall_resonance_hz;
        d.linewidth_hz = config.wall_linewidth_hz;
        d.coupling = config.wall_coupling;
        dipoles.push_back(d);
    }

    // RIS line or grid, mounted a standoff inside the left wall, centered
    // vertically. Element e sits at row e / cols, column e % cols.
    if (config.ris_rows < 1)
        throw ValidationError("RIS row count must be >= 1");
    std::vector<int> ris_order;
    if (config.ris_elements > 0) {
        int rows = std::min(config.ris_rows, config.ris_elements);
        int cols = (config.ris_elements + rows - 1) / rows;
        for (int e = 0; e < config.ris_elements; ++e) {
            int row = e / cols;
            int col = e % cols;
            double x = config.ris_standoff_m + row * config.ris_spacing_m;
            double y = h / 2.0 + (col - (cols - 1) / 2.0) * config.ris_spacing_m;
            if (!(y > 0.0) || !(y < h) || !(x > 0.0) || !(x < config.width_m))
                throw ValidationError("RIS layout does not fit inside the cavity");
            DipoleSpec d;
            d.position = {x, y};
            d.kind = DipoleKind::ris;
            d.resonance_off_hz = config.ris_resonance_off_hz;
            d.resonance_on_hz = config.ris_resonance_on_hz;
            d.linewidth_hz = config.ris_linewidth_hz;
            d.coupling = config.ris_coupling;
            ris_order.push_back(static_cast<int>(dipoles.size()));
            dipoles.push_back(d);
        }
    }

    auto add_antenna = [&](const Vec2& p) {
        DipoleSpec d;
        d.position = p;
        d.kind = DipoleKind::antenna;
        d.resonance_off_hz = config.antenna_resonance_hz;
        d.resonance_on_hz = config.antenna_resonance_hz;
        d.linewidth_hz = config.antenna_linewidth_hz;
        d.coupling = config.scattering_antennas ? config.antenna_coupling : 0.0;
        int index = static_cast<int>(dipoles.size());
        dipoles.push_back(d);
        return index;
    };
    int tx = add_antenna(config.tx);
    int rx = add_antenna(config.rx);

    return Scene(std::move(dipoles), tx, rx, std::move(ris_order));
}

Scene Scene::with_swapped_ports() const {
    return Scene(dipoles_, rx_, tx_, ris_order_);
}

Complex polarizability(const DipoleSpec& spec, bool state_on, double f_hz) {
    if (!(f_hz > 0.0))
        throw ValidationError("polarizability requires a positive frequency");
    double f_r = (spec.kind == DipoleKind::ris && state_on) ? spec.resonance_on_hz
                                                            : spec.resonance_off_hz;
    Complex denom(f_r * f_r - f_hz * f_hz, -f_hz * spec.linewidth_hz);
    return spec.coupling * (f_r * f_r) / denom;
}

Complex greens_2d(const Vec2& a, const Vec2& b, double f_hz) {
    if (!(f_hz > 0.0))
        throw ValidationError("greens_2d requires a positive frequency");
    double d = distance(a, b);
    if (d < kMinSeparation)
        throw NumericalError("greens_2d is singular for coincident points");
    double kd = 2.0 * std::numbers::pi * f_hz / kSpeedOfLight * d;
    double j0 = std::cyl_bessel_j(0.0, kd);
    double y0 = std::cyl_neumann(0.0, kd);
    // (i/4) * (J0 + i Y0)
    return Complex(-0.25 * y0, 0.25 * j0);
}

Complex channel(const Scene& scene, const core::Mask& mask, double f_hz, double excitation) {
    if (!(f_hz > 0.0))
        throw ValidationError("channel requires a positive frequency");
    check_mask(scene, mask);

    const auto& dipoles = scene.dipoles();
    const Vec2& tx_pos = dipoles[static_cast<std::size_t>(scene.tx())].position;
    const Vec2& rx_pos = dipoles[static_cast<std::size_t>(scene.rx())].position;
    Complex direct = excitation * greens_2d(tx_pos, rx_pos, f_hz);

    std::vector<int> scat = scatterer_indices(scene);
    int n = static_cast<int>(scat.size());
    if (n == 0)
        return direct;

    std::vector<int> element_of = ris_element_of(scene);
    VectorXcd alpha(n);
    for (int i = 0; i < n; ++i) {
        const DipoleSpec& d = dipoles[static_cast<std::size_t>(scat[static_cast<std::size_t>(i)])];
        bool on = dipole_state(mask, element_of[static_cast<std::size_t>(scat[static_cast<std::size_t>(i)])]);
        alpha(i) = polarizability(d, on, f_hz);
    }

    // B = I - A with A_mn = G_mn alpha_n (zero diagonal): dipole n's moment
    // alpha_n e_n drives the field at m, which keeps the system reciprocal
    // for heterogeneous polarizabilities. A scattering antenna is never
    // excited by its own source and never probes its own scattered field,
    // hence the tx/rx exclusions below.
    MatrixXcd B = MatrixXcd::Identity(n, n);
    VectorXcd rhs(n);
    VectorXcd receive(n);
    for (int i = 0; i < n; ++i) {
        int di = scat[static_cast<std::size_t>(i)];
        const Vec2& pi = dipoles[static_cast<std::size_t>(di)].position;
        for (int j = 0; j < n; ++j) {
            if (i == j)
                continue;
            int dj = scat[static_cast<std::size_t>(j)];
            B(i, j) = -greens_2d(pi, dipoles[static_cast<std::size_t>(dj)].position, f_hz) *
                      alpha(j);
        }
        rhs(i) = di == scene.tx() ? Complex(0.0, 0.0) : excitation * greens_2d(pi, tx_pos, f_hz);
        receive(i) = di == scene.rx() ? Complex(0.0, 0.0) : greens_2d(rx_pos, pi, f_hz);
    }

    Eigen::PartialPivLU<MatrixXcd> lu(B);
    check_conditioning(lu.rcond(), f_hz, mask);
    VectorXcd field = lu.solve(rhs);
    double rhs_norm = rhs.norm();
    if (rhs_norm > 0.0) {
        double residual = (B * field - rhs).norm() / rhs_norm;
        if (residual > kMaxSolveResidual) {
            field += lu.solve(rhs - B * field); // one refinement step
            residual = (B * field - rhs).norm() / rhs_norm;
            if (residual > kMaxSolveResidual)
                throw NumericalError("scattering solve residual " + std::to_string(residual) +
                                     " exceeds tolerance" + solve_context(f_hz, mask));
        }
    }

    Complex scattered(0.0, 0.0);
    for (int i = 0; i < n; ++i)
        scattered += receive(i) * alpha(i) * field(i);
    return direct + scattered;
}

core::ChannelSweep sweep(const Scene& scene, const core::Mask& mask,
                         const core::FrequencyGrid& grid) {
    std::vector<Complex> samples(static_cast<std::size_t>(grid.count()));
    for (int j = 0; j < grid.count(); ++j) {
        try {
            samples[static_cast<std::size_t>(j)] = channel(scene, mask, grid.frequency(j));
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what()) + " at grid index " + std::to_string(j));
        }
    }
    return core::ChannelSweep(grid, std::move(samples));
}

// Mask-independent pieces of the scattering solve at one frequency. With the
// fixed dipoles eliminated from (I - G D) e = s, the per-mask system over
// the RIS block reads
//   [I - K D_R] e_R = s_R + q,      K = G_RR + G_RF D_F inv(B_FF) G_FR,
// and the transfer function is h0 + (w + g_R^T) D_R e_R.
struct SweepEngine::FrequencyBlock {
    double f_hz = 0.0;
    Complex h0;                            // direct path + fixed-scatterer response
    MatrixXcd coupling;                    // K, n_ris x n_ris
    VectorXcd source;                      // s_R + q
    Eigen::RowVectorXcd receive_via_fixed; // w
    VectorXcd receive;                     // g_R
    VectorXcd alpha_off;
    VectorXcd alpha_on;
};

SweepEngine::SweepEngine(SweepEngine&&) noexcept = default;
SweepEngine& SweepEngine::operator=(SweepEngine&&) noexcept = default;
SweepEngine::~SweepEngine() = default;

SweepEngine::SweepEngine(Scene scene, core::FrequencyGrid grid, int threads)
    : scene_(std::move(scene)), grid_(grid) {
    const auto& dipoles = scene_.dipoles();
    std::vector<int> scat = scatterer_indices(scene_);
    std::vector<int> element_of = ris_element_of(scene_);

    // Fixed scatterers keep their order; RIS dipoles are listed in mask
    // element order so diagonal updates line up with mask bits. Inert RIS
    // dipoles (coupling zero) drop out, so the driving element id is kept.
    std::vector<int> fixed;
    std::vector<int> ris;
    for (int idx : scat)
        if (element_of[static_cast<std::size_t>(idx)] < 0)
            fixed.push_back(idx);
    for (int e = 0; e < scene_.ris_count(); ++e) {
        int idx = scene_.ris_order()[static_cast<std::size_t>(e)];
        if (dipoles[static_cast<std::size_t>(idx)].coupling > 0.0) {
            ris.push_back(idx);
            ris_elements_.push_back(e);
        }
    }
    int n_f = static_cast<int>(fixed.size());
    int n_r = static_cast<int>(ris.size());

    const Vec2& tx_pos = dipoles[static_cast<std::size_t>(scene_.tx())].position;
    const Vec2& rx_pos = dipoles[static_cast<std::size_t>(scene_.rx())].position;
    core::Mask probe = core::Mask::all_off(std::max(scene_.ris_count(), 1));

    blocks_.resize(static_cast<std::size_t>(grid_.count()));
    parallel_for(static_cast<std::size_t>(grid_.count()), threads, [&](std::size_t j) {
        double f = grid_.frequency(static_cast<int>(j));
        FrequencyBlock& blk = blocks_[j];
        blk.f_hz = f;

        auto g = [&](const Vec2& a, const Vec2& b) { return greens_2d(a, b, f); };
        auto pos = [&](int idx) { return dipoles[static_cast<std::size_t>(idx)].position; };

        VectorXcd alpha_f(n_f);
        for (int i = 0; i < n_f; ++i)
            alpha_f(i) = polarizability(dipoles[static_cast<std::size_t>(fixed[static_cast<std::size_t>(i)])],
                                        false, f);

        VectorXcd s_f(n_f), g_f(n_f);
        for (int i = 0; i < n_f; ++i) {
            int di = fixed[static_cast<std::size_t>(i)];
            s_f(i) = di == scene_.tx() ? Complex(0.0, 0.0) : g(pos(di), tx_pos);
            g_f(i) = di == scene_.rx() ? Complex(0.0, 0.0) : g(rx_pos, pos(di));
        }

        blk.source.resize(n_r);
        blk.receive.resize(n_r);
        blk.alpha_off.resize(n_r);
        blk.alpha_on.resize(n_r);
        for (int i = 0; i < n_r; ++i) {
            int di = ris[static_cast<std::size_t>(i)];
            blk.source(i) = g(pos(di), tx_pos);
            blk.receive(i) = g(rx_pos, pos(di));
            const DipoleSpec& d = dipoles[static_cast<std::size_t>(di)];
            blk.alpha_off(i) = polarizability(d, false, f);
            blk.alpha_on(i) = polarizability(d, true, f);
        }

        MatrixXcd g_rr = MatrixXcd::Zero(n_r, n_r);
        for (int i = 0; i < n_r; ++i)
            for (int k = 0; k < n_r; ++k)
                if (i != k)
                    g_rr(i, k) = g(pos(ris[static_cast<std::size_t>(i)]),
                                   pos(ris[static_cast<std::size_t>(k)]));

        Complex g0 = g(tx_pos, rx_pos);
        if (n_f == 0) {
            blk.h0 = g0;
            blk.coupling = std::move(g_rr);
            blk.receive_via_fixed = Eigen::RowVectorXcd::Zero(n_r);
            return;
        }

        MatrixXcd b_ff = MatrixXcd::Identity(n_f, n_f);
        for (int i = 0; i < n_f; ++i)
            for (int k = 0; k < n_f; ++k)
                if (i != k)
                    b_ff(i, k) = -g(pos(fixed[static_cast<std::size_t>(i)]),
                                    pos(fixed[static_cast<std::size_t>(k)])) *
                                 alpha_f(k);

        MatrixXcd g_fr(n_f, n_r);
        MatrixXcd g_rf(n_r, n_f);
        for (int i = 0; i < n_f; ++i)
            for (int k = 0; k < n_r; ++k) {
                Complex v = g(pos(fixed[static_cast<std::size_t>(i)]),
                              pos(ris[static_cast<std::size_t>(k)]));
                g_fr(i, k) = v;
                g_rf(k, i) = v;
            }

        Eigen::PartialPivLU<MatrixXcd> lu(b_ff);
        check_conditioning(lu.rcond(), f, probe);

        VectorXcd u = lu.solve(s_f);     // fixed fields with every RIS moment silent
        MatrixXcd v = lu.solve(g_fr);    // fixed response to each RIS unit moment
        MatrixXcd g_rf_scaled = g_rf * alpha_f.asDiagonal();

        blk.coupling = g_rr + g_rf_scaled * v;
        blk.source = blk.source + g_rf_scaled * u;
        Eigen::RowVectorXcd weighted = (g_f.array() * alpha_f.array()).matrix().transpose();
        blk.h0 = g0 + (weighted * u).value();
        blk.receive_via_fixed = weighted * v;
    });
}

Complex SweepEngine::channel_at(const core::Mask& mask, int grid_index) const {
    check_mask(scene_, mask);
    if (grid_index < 0 || grid_index >= grid_.count())
        throw ValidationError("grid index out of range");
    const FrequencyBlock& blk = blocks_[static_cast<std::size_t>(grid_index)];
    int n_r = static_cast<int>(blk.source.size());
    if (n_r == 0)
        return blk.h0;

    VectorXcd alpha(n_r);
    for (int i = 0; i < n_r; ++i) {
        bool on = mask.element_on(ris_elements_[static_cast<std::size_t>(i)]);
        alpha(i) = on ? blk.alpha_on(i) : blk.alpha_off(i);
    }

    MatrixXcd system = MatrixXcd::Identity(n_r, n_r);
    system.noalias() -= blk.coupling * alpha.asDiagonal();
    const VectorXcd& rhs = blk.source;

    Eigen::PartialPivLU<MatrixXcd> lu(system);
    check_conditioning(lu.rcond(), blk.f_hz, mask);
    VectorXcd field = lu.solve(rhs);
    double rhs_norm = rhs.norm();
    if (rhs_norm > 0.0) {
        double residual = (system * field - rhs).norm() / rhs_norm;
        if (residual > kMaxSolveResidual) {
            field += lu.solve(rhs - system * field);
            residual = (system * field - rhs).norm() / rhs_norm;
            if (residual > kMaxSolveResidual)
                throw NumericalError("RIS-block solve residual " + std::to_string(residual) +
                                     " exceeds tolerance" + solve_context(blk.f_hz, mask));
        }
    }

    VectorXcd moments = alpha.cwiseProduct(field);
    Complex h = blk.h0;
    h += (blk.receive_via_fixed * moments).value();
    h += (blk.receive.array() * moments.array()).sum();
    return h;
}

core::ChannelSweep SweepEngine::sweep(const core::Mask& mask, int threads) const {
    check_mask(scene_, mask);
    std::vector<Complex> samples(static_cast<std::size_t>(grid_.count()));
    parallel_for(static_cast<std::size_t>(grid_.count()), threads, [&](std::size_t j) {
        samples[j] = channel_at(mask, static_cast<int>(j));
    });
    return core::ChannelSweep(grid_, std::move(samples));
}

} // namespace riscav::physics
