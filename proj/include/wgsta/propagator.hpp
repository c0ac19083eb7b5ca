#pragma once

// Integrators for i dc/dz = H(z) c with piecewise-smooth Hermitian H(z).
//
// Two independent backends:
//   propagate_adaptive  embedded Dormand-Prince 5(4) with error control
//   propagate_pwc       product of exact exponentials of H frozen at cell midpoints
//
// Both split the interval at every listed discontinuity and evaluate H there
// one-sidedly, from inside the segment being integrated. Neither renormalizes.

#include "wgsta/model.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace wgsta {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;
// At most 3x3; the fixed upper bound keeps every evaluation on the stack.
using HMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

struct HamiltonianSpec {
    int dim = 2;
    std::function<HMatrix(double z, Side side)> eval;
    std::vector<double> discontinuities; // ascending
};

// Generator of the mirrored problem: s = -z, G(s) = -H(-s). Propagating it forward
// from s = -b to s = -a undoes a forward run from a to b.
HamiltonianSpec reversed(const HamiltonianSpec& h);

struct StateVector {
    Amplitudes amplitudes;
    double z = 0.0;
};

double norm_squared(const Amplitudes& c);

struct TrajectorySample {
    double z = 0.0;
    Amplitudes amplitudes;
    std::vector<double> intensities;
};

struct StepStatistics {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double min_step = 0.0;
    double max_step = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::string backend;
    StepStatistics steps;

    const TrajectorySample& front() const { return samples.front(); }
    const TrajectorySample& back() const { return samples.back(); }
    int dim() const { return samples.empty() ? 0 : static_cast<int>(samples.front().amplitudes.size()); }
};

struct AdaptiveOptions {
    double tol = 1e-10;      // accuracy target in [1e-12, 1e-4]; steps are controlled at tol/10
    std::size_t samples = 0; // 0: record every accepted step; otherwise a uniform grid of this size
    // Explicit output positions; overrides `samples`. Strictly increasing, first
    // z_from and last z_to.
    std::vector<double> grid;
};

// Throws ArgumentError for bad ranges, tolerances or a non-normalized c0, and
// StiffnessError when the step size underflows 1e-12 * (z_to - z_from).
Trajectory propagate_adaptive(const HamiltonianSpec& h, const Amplitudes& c0, double z_from,
                              double z_to, const AdaptiveOptions& options = {});

// `steps` cells spread uniformly over [z_from, z_to]. Every discontinuity inside the
// interval must fall on a cell boundary, otherwise ArgumentError.
// Records every cell boundary when `record` is true; otherwise only the end points.
Trajectory propagate_pwc(const HamiltonianSpec& h, const Amplitudes& c0, double z_from,
                         double z_to, std::size_t steps, bool record = true);

// exp(-i H dz) for Hermitian H.
HMatrix evolution_operator(const HMatrix& h, double dz);

} // namespace wgsta
