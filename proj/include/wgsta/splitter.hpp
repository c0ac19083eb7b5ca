#pragma once

// Three-waveguide 50/50 beam splitter: two outer guides equally coupled to a
// middle guide whose mismatch flips sign at z = 0.
//
//   H(z) = [[0, W, 0], [W, D, W], [0, W, 0]]
//
// In the basis (c_b, c_2, c_d) with c_b = (c1 + c3)/sqrt2 and c_d = (c1 - c3)/sqrt2
// the dark state decouples and (c_b, c_2) obeys [[0, sqrt2 W], [sqrt2 W, D]].

#include "wgsta/model.hpp"
#include "wgsta/propagator.hpp"

#include <array>
#include <cstddef>
#include <optional>

namespace wgsta {

enum class SplitterMode {
    direct,     // reuse the two-guide (Omega_eff, Delta_eff) as (W, D)
    reduced_cd, // counterdiabatic correction of the exact bright-state system
};

struct SplitterParams {
    ModelParams base;                        // base.sta = false gives the raw couplings
    SplitterMode mode = SplitterMode::reduced_cd;
};

struct SplitterCoefficients {
    double coupling; // W
    double mismatch; // D
};

SplitterCoefficients splitter_coefficients(const SplitterParams& sp, double z, Side side = Side::none);

HamiltonianSpec build_h3(const SplitterParams& sp);

// [[0, sqrt2 W], [sqrt2 W, D]] acting on (c_b, c_2).
HamiltonianSpec build_bright_h2(const SplitterParams& sp);

struct BrightDark {
    Complex bright;
    Complex middle;
    Complex dark;
};

BrightDark reduce_bright_dark(const Amplitudes& c);
Amplitudes expand_bright_dark(const BrightDark& r);

struct SplitterOptions {
    double tol = 1e-10;
    std::size_t samples = 0;
    std::optional<Amplitudes> input; // defaults to the middle guide (0, 1, 0)
};

struct SplitterResult {
    Trajectory trajectory;
    std::array<double, 3> final_intensities{};
    double splitting_infidelity = 0.0; // max(|I1 - 1/2|, |I3 - 1/2|)
    double dark_leakage = 0.0;         // max over samples of |c1 - c3| for middle input
    double reduction_deviation = 0.0; // max over samples of |(c_b, c_2) - two-level run|
};

SplitterResult simulate_splitter(const SplitterParams& sp, const SplitterOptions& options = {});

} // namespace wgsta
