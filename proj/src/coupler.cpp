#include "wgsta/coupler.hpp"

#include "wgsta/errors.hpp"

#include <cmath>
#include <optional>

namespace wgsta {

namespace {

HMatrix two_level(double coupling, double mismatch)
{
    HMatrix h(2, 2);
    h << mismatch, coupling, coupling, -mismatch;
    return h;
}

} // namespace

HamiltonianSpec build_h2(const ModelParams& p)
{
    p.validate();
    HamiltonianSpec h;
    h.dim = 2;
    h.discontinuities = {0.0};

    if (p.omega0 == 0.0) {
        const double d0 = p.delta0;
        h.eval = [d0](double z, Side side) -> HMatrix {
            if (z == 0.0 && side == Side::none) {
                throw DiscontinuityError(z);
            }
            const bool left = z < 0.0 || (z == 0.0 && side == Side::left);
            return two_level(0.0, left ? d0 : -d0);
        };
        return h;
    }

    const SignFlipSchedule schedule(p);
    if (p.sta) {
        h.eval = [schedule](double z, Side side) -> HMatrix {
            const auto pt = schedule.point(z, side);
            return two_level(pt.omega_eff, pt.delta_eff);
        };
    } else {
        h.eval = [schedule](double z, Side side) -> HMatrix {
            return two_level(schedule.coupling(z), schedule.mismatch(z, side));
        };
    }
    return h;
}

CouplerResult simulate(const ModelParams& p, int input_guide, const CouplerOptions& options)
{
    if (input_guide != 1 && input_guide != 2) {
        throw ArgumentError("input guide must be 1 or 2");
    }
    const HamiltonianSpec h = build_h2(p);
    Amplitudes c0{0.0, 0.0};
    c0[static_cast<std::size_t>(input_guide - 1)] = 1.0;

    CouplerResult result;
    result.trajectory =
        propagate_adaptive(h, c0, -p.half_length, p.half_length, {options.tol, options.samples, {}});
    result.final_i2 = result.trajectory.back().intensities[1];
    if (options.adiabatic_populations) {
        result.adiabatic_populations = adiabatic_projection(p, result.trajectory);
    }
    return result;
}

std::vector<AdiabaticPopulations> adiabatic_projection(const ModelParams& p, const Trajectory& traj)
{
    p.validate();
    if (traj.dim() != 2) {
        throw ArgumentError("adiabatic projection needs a two-guide trajectory");
    }
    const double L = p.half_length;
    if (std::abs(traj.front().z + L) > 1e-12 * L || std::abs(traj.back().z - L) > 1e-12 * L) {
        throw ArgumentError("trajectory does not span the device [-L, L] of these parameters");
    }

    std::optional<SignFlipSchedule> schedule;
    if (p.omega0 > 0.0) {
        schedule.emplace(p);
    }

    std::vector<AdiabaticPopulations> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        const Side side = s.z == 0.0 ? Side::left : Side::none;
        double omega = 0.0;
        double delta = 0.0;
        double phi = 0.0;
        if (schedule) {
            omega = schedule->coupling(s.z);
            delta = schedule->mismatch(s.z, side);
            if (p.sta) {
                phi = schedule->point(s.z, side).phi;
            }
        } else {
            delta = (s.z < 0.0 || s.z == 0.0) ? p.delta0 : -p.delta0;
        }
        const double theta = mixing_angle(omega, delta);

        const Complex c1 = s.amplitudes[0] * std::polar(1.0, -0.5 * phi);
        const Complex c2 = s.amplitudes[1] * std::polar(1.0, 0.5 * phi);
        const double ch = std::cos(0.5 * theta);
        const double sh = std::sin(0.5 * theta);
        // Eigenvalue -sqrt(W^2 + D^2): (-sin, cos); +sqrt(W^2 + D^2): (cos, sin).
        const Complex lower = -sh * c1 + ch * c2;
        const Complex upper = ch * c1 + sh * c2;
        out.push_back({std::norm(lower), std::norm(upper)});
    }
    return out;
}

} // namespace wgsta
