#include "wgsta/splitter.hpp"

#include "wgsta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wgsta {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// The bright-state block [[0, sqrt2 W], [sqrt2 W, D]] equals (D/2) I plus a
// two-level Hamiltonian with coupling sqrt2 W and mismatch -D/2. The identity part
// is a global phase and is dropped; the correction runs on the traceless part.
SignFlipSchedule traceless_bright_schedule(const ModelParams& p)
{
    return {kSqrt2 * p.omega0, -0.5 * p.delta0, p.half_length};
}

} // namespace

SplitterCoefficients splitter_coefficients(const SplitterParams& sp, double z, Side side)
{
    const ModelParams& p = sp.base;
    if (p.omega0 == 0.0) {
        if (z == 0.0 && side == Side::none) {
            throw DiscontinuityError(z);
        }
        const bool left = z < 0.0 || (z == 0.0 && side == Side::left);
        return {0.0, left ? p.delta0 : -p.delta0};
    }
    if (!p.sta) {
        const SignFlipSchedule s(p);
        return {s.coupling(z), s.mismatch(z, side)};
    }
    if (sp.mode == SplitterMode::direct) {
        const auto pt = SignFlipSchedule(p).point(z, side);
        return {pt.omega_eff, pt.delta_eff};
    }
    const auto pt = traceless_bright_schedule(p).point(z, side);
    return {pt.omega_eff / kSqrt2, -2.0 * pt.delta_eff};
}

HamiltonianSpec build_h3(const SplitterParams& sp)
{
    sp.base.validate();
    HamiltonianSpec h;
    h.dim = 3;
    h.discontinuities = {0.0};
    h.eval = [sp](double z, Side side) -> HMatrix {
        const auto k = splitter_coefficients(sp, z, side);
        HMatrix m(3, 3);
        m << 0.0, k.coupling, 0.0,
             k.coupling, k.mismatch, k.coupling,
             0.0, k.coupling, 0.0;
        return m;
    };
    return h;
}

HamiltonianSpec build_bright_h2(const SplitterParams& sp)
{
    sp.base.validate();
    HamiltonianSpec h;
    h.dim = 2;
    h.discontinuities = {0.0};
    h.eval = [sp](double z, Side side) -> HMatrix {
        const auto k = splitter_coefficients(sp, z, side);
        HMatrix m(2, 2);
        m << 0.0, kSqrt2 * k.coupling, kSqrt2 * k.coupling, k.mismatch;
        return m;
    };
    return h;
}

BrightDark reduce_bright_dark(const Amplitudes& c)
{
    if (c.size() != 3) {
        throw ArgumentError("bright/dark reduction needs three amplitudes");
    }
    return {(c[0] + c[2]) / kSqrt2, c[1], (c[0] - c[2]) / kSqrt2};
}

Amplitudes expand_bright_dark(const BrightDark& r)
{
    return {(r.bright + r.dark) / kSqrt2, r.middle, (r.bright - r.dark) / kSqrt2};
}

SplitterResult simulate_splitter(const SplitterParams& sp, const SplitterOptions& options)
{
    const double L = sp.base.half_length;
    const Amplitudes c0 = options.input.value_or(Amplitudes{0.0, 1.0, 0.0});

    SplitterResult result;
    result.trajectory = propagate_adaptive(build_h3(sp), c0, -L, L, {options.tol, options.samples, {}});
    const auto& last = result.trajectory.back().intensities;
    result.final_intensities = {last[0], last[1], last[2]};
    result.splitting_infidelity = std::max(std::abs(last[0] - 0.5), std::abs(last[2] - 0.5));

    // Cross-check the reduction against an independent two-level run on the same grid.
    const BrightDark start = reduce_bright_dark(c0);
    const double bright_norm = std::sqrt(std::norm(start.bright) + std::norm(start.middle));
    std::vector<double> grid;
    grid.reserve(result.trajectory.samples.size());
    for (const auto& s : result.trajectory.samples) {
        grid.push_back(s.z);
    }

    Trajectory reduced;
    if (bright_norm > 0.0) {
        const Amplitudes b0{start.bright / bright_norm, start.middle / bright_norm};
        reduced = propagate_adaptive(build_bright_h2(sp), b0, -L, L, {options.tol, 0, grid});
    }

    for (std::size_t k = 0; k < result.trajectory.samples.size(); ++k) {
        const BrightDark r = reduce_bright_dark(result.trajectory.samples[k].amplitudes);
        result.dark_leakage = std::max(result.dark_leakage, kSqrt2 * std::abs(r.dark - start.dark));
        if (bright_norm > 0.0) {
            const auto& b = reduced.samples[k].amplitudes;
            const double dev = std::max(std::abs(r.bright - bright_norm * b[0]),
                                        std::abs(r.middle - bright_norm * b[1]));
            result.reduction_deviation = std::max(result.reduction_deviation, dev);
        }
    }
    return result;
}

} // namespace wgsta
