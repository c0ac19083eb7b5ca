#pragma once

// Two-waveguide directional coupler built on the sign-flip model.

#include "wgsta/model.hpp"
#include "wgsta/propagator.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace wgsta {

// H(z) = [[D, W], [W, -D]] with (W, D) = raw (Omega, Delta) or, when p.sta is set,
// (Omega_eff, Delta_eff). omega0 = 0 gives two decoupled guides.
HamiltonianSpec build_h2(const ModelParams& p);

struct CouplerOptions {
    double tol = 1e-10;
    std::size_t samples = 0; // see AdaptiveOptions
    bool adiabatic_populations = false;
};

using AdiabaticPopulations = std::array<double, 2>; // ascending eigenvalue order

struct CouplerResult {
    Trajectory trajectory;
    double final_i2 = 0.0;
    std::vector<AdiabaticPopulations> adiabatic_populations; // empty unless requested
};

// Light enters `input_guide` (1 or 2) at z = -L.
CouplerResult simulate(const ModelParams& p, int input_guide = 1, const CouplerOptions& options = {});

// Populations of the eigenstates of the raw H(z) at every trajectory sample.
// With p.sta the amplitudes are first rotated by exp(-+i phi/2) back into the
// frame of the complex counterdiabatic Hamiltonian. The sample at z = 0, if any,
// is projected with the z -> 0- eigenbasis.
std::vector<AdiabaticPopulations> adiabatic_projection(const ModelParams& p, const Trajectory& traj);

} // namespace wgsta
