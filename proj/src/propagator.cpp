#include "wgsta/propagator.hpp"

#include "wgsta/errors.hpp"

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace wgsta {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kUnderflowFraction = 1e-12;
// Local error target relative to the requested tolerance; keeps accumulated
// norm drift over long devices below the tolerance-scale budget.
constexpr double kLocalErrorScale = 0.1;

void check_common(const HamiltonianSpec& h, const Amplitudes& c0, double z_from, double z_to)
{
    if (h.dim != 2 && h.dim != 3) {
        throw ArgumentError("Hamiltonian dimension must be 2 or 3");
    }
    if (!h.eval) {
        throw ArgumentError("Hamiltonian has no evaluator");
    }
    if (!(std::isfinite(z_from) && std::isfinite(z_to) && z_from < z_to)) {
        throw ArgumentError("propagation requires finite z_from < z_to");
    }
    if (static_cast<int>(c0.size()) != h.dim) {
        throw ArgumentError("initial state dimension does not match the Hamiltonian");
    }
    if (std::abs(norm_squared(c0) - 1.0) > kNormTolerance) {
        throw ArgumentError("initial state is not normalized");
    }
}

// [z_from, d_1, ..., d_k, z_to] with every interior discontinuity.
std::vector<double> segment_bounds(const HamiltonianSpec& h, double z_from, double z_to)
{
    std::vector<double> bounds{z_from};
    for (double d : h.discontinuities) {
        if (d > z_from && d < z_to) {
            bounds.push_back(d);
        }
    }
    bounds.push_back(z_to);
    std::sort(bounds.begin() + 1, bounds.end() - 1);
    return bounds;
}

// Tag that selects the limit from inside the segment [a, b].
Side inner_side(double z, double a, double b)
{
    if (z <= a) {
        return Side::right;
    }
    if (z >= b) {
        return Side::left;
    }
    return Side::none;
}

TrajectorySample make_sample(double z, const Amplitudes& c)
{
    TrajectorySample s;
    s.z = z;
    s.amplitudes = c;
    s.intensities.reserve(c.size());
    for (const auto& v : c) {
        s.intensities.push_back(std::norm(v));
    }
    return s;
}

std::vector<double> uniform_grid(double a, double b, std::size_t n)
{
    std::vector<double> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        z[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    z.back() = b;
    return z;
}

} // namespace

double norm_squared(const Amplitudes& c)
{
    double n = 0.0;
    for (const auto& v : c) {
        n += std::norm(v);
    }
    return n;
}

HamiltonianSpec reversed(const HamiltonianSpec& h)
{
    HamiltonianSpec r;
    r.dim = h.dim;
    r.eval = [eval = h.eval](double s, Side side) -> HMatrix {
        return -eval(-s, opposite(side));
    };
    for (auto it = h.discontinuities.rbegin(); it != h.discontinuities.rend(); ++it) {
        r.discontinuities.push_back(-*it);
    }
    return r;
}

HMatrix evolution_operator(const HMatrix& h, double dz)
{
    Eigen::SelfAdjointEigenSolver<HMatrix> es(h);
    const auto& v = es.eigenvectors();
    HMatrix phases = HMatrix::Zero(h.rows(), h.cols());
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
        phases(k, k) = std::polar(1.0, -es.eigenvalues()(k) * dz);
    }
    return v * phases * v.adjoint();
}

Trajectory propagate_adaptive(const HamiltonianSpec& h, const Amplitudes& c0, double z_from,
                              double z_to, const AdaptiveOptions& options)
{
    check_common(h, c0, z_from, z_to);
    if (!(options.tol >= 1e-12 && options.tol <= 1e-4)) {
        throw ArgumentError("tolerance must lie in [1e-12, 1e-4]");
    }
    std::vector<double> grid = options.grid;
    if (!grid.empty()) {
        const bool increasing = std::adjacent_find(grid.begin(), grid.end(), std::greater_equal<>()) == grid.end();
        if (grid.size() < 2 || grid.front() != z_from || grid.back() != z_to || !increasing) {
            throw ArgumentError("output grid must increase strictly from z_from to z_to");
        }
    } else if (options.samples == 1) {
        throw ArgumentError("an output grid needs at least 2 samples");
    } else if (options.samples >= 2) {
        grid = uniform_grid(z_from, z_to, options.samples);
    }

    const double span = z_to - z_from;
    const double min_step = kUnderflowFraction * span;
    const bool on_grid = !grid.empty();
    std::size_t next_grid = on_grid ? 1 : 0;

    Trajectory traj;
    traj.backend = "dopri5-adaptive";
    traj.steps.min_step = std::numeric_limits<double>::infinity();
    traj.samples.push_back(make_sample(z_from, c0));

    Amplitudes x = c0;
    const auto bounds = segment_bounds(h, z_from, z_to);
    double dt = 0.0;

    for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
        const double a = bounds[seg];
        const double b = bounds[seg + 1];
        auto rhs = [&h, a, b](const Amplitudes& c, Amplitudes& dcdz, double z) {
            const HMatrix hz = h.eval(z, inner_side(z, a, b));
            const auto n = static_cast<Eigen::Index>(c.size());
            for (Eigen::Index i = 0; i < n; ++i) {
                Complex acc = 0.0;
                for (Eigen::Index j = 0; j < n; ++j) {
                    acc += hz(i, j) * c[j];
                }
                dcdz[i] = Complex(acc.imag(), -acc.real()); // -i * acc
            }
        };

        // FSAL state must not leak across the jump: a fresh stepper per segment.
        auto stepper = odeint::make_controlled(kLocalErrorScale * options.tol, kLocalErrorScale * options.tol,
                                               odeint::runge_kutta_dopri5<Amplitudes>());
        if (dt <= 0.0) {
            const double scale = std::max(1.0, h.eval(a, Side::right).cwiseAbs().maxCoeff());
            dt = std::min(b - a, 1e-2 / scale);
        }

        double z = a;
        while (z < b) {
            double stop = b;
            if (on_grid) {
                while (next_grid < grid.size() && grid[next_grid] <= z) {
                    ++next_grid;
                }
                if (next_grid < grid.size()) {
                    stop = std::min(stop, grid[next_grid]);
                }
            }
            const bool clamped = dt >= stop - z;
            double trial = clamped ? stop - z : dt;
            const double start = z;
            const auto result = stepper.try_step(rhs, x, z, trial);
            if (result == odeint::success) {
                ++traj.steps.accepted;
                const double taken = clamped ? stop - start : z - start;
                traj.steps.min_step = std::min(traj.steps.min_step, taken);
                traj.steps.max_step = std::max(traj.steps.max_step, taken);
                if (clamped) {
                    z = stop;
                    // A short step to hit a stop says nothing about the usable step size.
                    dt = std::max(dt, trial);
                } else {
                    dt = trial;
                }
                if (on_grid) {
                    if (next_grid < grid.size() && z == grid[next_grid]) {
                        traj.samples.push_back(make_sample(z, x));
                        ++next_grid;
                    }
                } else {
                    traj.samples.push_back(make_sample(z, x));
                }
            } else {
                ++traj.steps.rejected;
                dt = trial;
            }
            if (dt < min_step) {
                throw StiffnessError("step size underflow at z = " + std::to_string(z));
            }
        }
    }
    if (traj.steps.accepted == 0) {
        traj.steps.min_step = 0.0;
    }
    return traj;
}

Trajectory propagate_pwc(const HamiltonianSpec& h, const Amplitudes& c0, double z_from,
                         double z_to, std::size_t steps, bool record)
{
    check_common(h, c0, z_from, z_to);
    if (steps < 1) {
        throw ArgumentError("piecewise-constant propagation needs steps >= 1");
    }

    const double span = z_to - z_from;
    const auto bounds = segment_bounds(h, z_from, z_to);

    std::vector<std::size_t> cells;
    std::size_t total = 0;
    for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
        const double exact = (bounds[seg + 1] - bounds[seg]) / span * static_cast<double>(steps);
        const double rounded = std::round(exact);
        if (rounded < 1.0 || std::abs(exact - rounded) > 1e-9 * static_cast<double>(steps)) {
            throw ArgumentError("cell grid of " + std::to_string(steps) +
                                " steps cannot be aligned with the discontinuity at z = " +
                                std::to_string(bounds[seg + 1]));
        }
        cells.push_back(static_cast<std::size_t>(rounded));
        total += cells.back();
    }
    if (total != steps) {
        throw ArgumentError("cell grid cannot be aligned with the discontinuities");
    }

    Trajectory traj;
    traj.backend = "pwc-exponential";
    traj.samples.reserve(record ? steps + 1 : 2);
    traj.samples.push_back(make_sample(z_from, c0));

    Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, 3, 1> c(h.dim);
    for (int i = 0; i < h.dim; ++i) {
        c(i) = c0[static_cast<std::size_t>(i)];
    }
    Amplitudes out(c0.size());

    traj.steps.min_step = std::numeric_limits<double>::infinity();
    for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
        const double a = bounds[seg];
        const double b = bounds[seg + 1];
        const double width = (b - a) / static_cast<double>(cells[seg]);
        traj.steps.min_step = std::min(traj.steps.min_step, width);
        traj.steps.max_step = std::max(traj.steps.max_step, width);
        for (std::size_t k = 0; k < cells[seg]; ++k) {
            const double mid = a + (static_cast<double>(k) + 0.5) * width;
            c = evolution_operator(h.eval(mid, Side::none), width) * c;
            ++traj.steps.accepted;
            const bool last = k + 1 == cells[seg];
            if (record || (last && seg + 2 == bounds.size())) {
                for (int i = 0; i < h.dim; ++i) {
                    out[static_cast<std::size_t>(i)] = c(i);
                }
                const double z = last ? b : a + static_cast<double>(k + 1) * width;
                traj.samples.push_back(make_sample(z, out));
            }
        }
    }
    return traj;
}

} // namespace wgsta
