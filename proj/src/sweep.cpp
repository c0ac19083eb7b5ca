#include "wgsta/sweep.hpp"

#include "wgsta/coupler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace wgsta {

std::string_view to_string(SweepParameter p)
{
    switch (p) {
    case SweepParameter::omega0:
        return "omega0";
    case SweepParameter::delta0:
        return "delta0";
    case SweepParameter::total_length:
        return "total_length";
    }
    return "?";
}

std::string_view to_string(SweepMetric m)
{
    return m == SweepMetric::final_i2 ? "final_i2" : "splitting_infidelity";
}

SweepParameter parse_sweep_parameter(std::string_view name)
{
    for (auto p : {SweepParameter::omega0, SweepParameter::delta0, SweepParameter::total_length}) {
        if (name == to_string(p)) {
            return p;
        }
    }
    throw ArgumentError("unknown sweep parameter '" + std::string(name) + "'");
}

SweepMetric parse_sweep_metric(std::string_view name)
{
    for (auto m : {SweepMetric::final_i2, SweepMetric::splitting_infidelity}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    throw ArgumentError("unknown sweep metric '" + std::string(name) + "'");
}

std::vector<double> SweepAxis::values() const
{
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; ++k) {
        v[k] = min + (max - min) * static_cast<double>(k) / static_cast<double>(count - 1);
    }
    v.back() = max;
    return v;
}

void SweepSpec::validate() const
{
    for (const SweepAxis* a : {&x, &y}) {
        if (a->count < 2) {
            throw ArgumentError("sweep axis " + std::string(to_string(a->parameter)) + " needs count >= 2");
        }
        if (!(std::isfinite(a->min) && std::isfinite(a->max) && a->min < a->max)) {
            throw ArgumentError("sweep axis " + std::string(to_string(a->parameter)) + " needs min < max");
        }
        if (a->min < 0.0) {
            throw ArgumentError("sweep axis " + std::string(to_string(a->parameter)) + " must be >= 0");
        }
    }
    if (x.parameter == y.parameter) {
        throw ArgumentError("sweep axes must be different parameters");
    }
    if (!(fixed.omega0 >= 0.0 && fixed.delta0 >= 0.0 && fixed.half_length >= 0.0)) {
        throw ArgumentError("fixed sweep parameters must be >= 0");
    }
    if (!(tol >= 1e-12 && tol <= 1e-4)) {
        throw ArgumentError("tolerance must lie in [1e-12, 1e-4]");
    }
}

double evaluate_point(double omega0, double delta0, double total_length, bool sta,
                      SweepMetric metric, SplitterMode mode, double tol)
{
    if (omega0 == 0.0 || total_length == 0.0) {
        return metric == SweepMetric::final_i2 ? 0.0 : 0.5;
    }
    const auto p = ModelParams::with_total_length(omega0, delta0, total_length, sta);
    if (metric == SweepMetric::final_i2) {
        return simulate(p, 1, {tol, 2, false}).final_i2;
    }
    return simulate_splitter({p, mode}, {tol, 2, {}}).splitting_infidelity;
}

double evaluate_cell(const SweepSpec& spec, double x, double y)
{
    double values[3] = {spec.fixed.omega0, spec.fixed.delta0, spec.fixed.total_length()};
    values[static_cast<int>(spec.x.parameter)] = x;
    values[static_cast<int>(spec.y.parameter)] = y;
    return evaluate_point(values[0], values[1], values[2], spec.sta, spec.metric, spec.mode, spec.tol);
}

SweepResult run_sweep(const SweepSpec& spec)
{
    spec.validate();

    SweepResult result;
    result.spec = spec;
    result.x_values = spec.x.values();
    result.y_values = spec.y.values();
    result.backend = "dopri5-adaptive";
    const std::size_t nx = result.x_values.size();
    const std::size_t cells = nx * result.y_values.size();
    result.grid.assign(cells, std::numeric_limits<double>::quiet_NaN());

    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::size_t failed_cell = cells;
    std::string failure;

    auto work = [&] {
        for (std::size_t k = next++; k < cells; k = next++) {
            const double x = result.x_values[k % nx];
            const double y = result.y_values[k / nx];
            try {
                result.grid[k] = evaluate_cell(spec, x, y);
            } catch (const std::exception& e) {
                std::lock_guard lock(failure_mutex);
                if (k < failed_cell) {
                    failed_cell = k;
                    failure = e.what();
                }
            }
        }
    };

    unsigned workers = spec.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.workers;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, cells));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    if (failed_cell < cells) {
        const double x = result.x_values[failed_cell % nx];
        const double y = result.y_values[failed_cell / nx];
        throw SweepError("sweep cell " + std::string(to_string(spec.x.parameter)) + "=" +
                             std::to_string(x) + ", " + std::string(to_string(spec.y.parameter)) +
                             "=" + std::to_string(y) + " failed: " + failure,
                         x, y);
    }
    return result;
}

double robust_region_fraction(const SweepResult& result, double target)
{
    if (result.grid.empty()) {
        return 0.0;
    }
    const auto hits = std::count_if(result.grid.begin(), result.grid.end(),
                                    [target](double v) { return v >= target; });
    return static_cast<double>(hits) / static_cast<double>(result.grid.size());
}

ThresholdResult threshold_length(const ThresholdQuery& q)
{
    if (!(q.target > 0.0 && q.target < 1.0)) {
        throw ArgumentError("threshold target must lie in (0, 1)");
    }
    if (!(q.min_length >= 0.0 && q.min_length < q.max_length && std::isfinite(q.max_length))) {
        throw ArgumentError("threshold search range must satisfy 0 <= min < max");
    }
    if (q.coarse_points < 2 || !(q.resolution > 0.0)) {
        throw ArgumentError("threshold search needs >= 2 coarse points and a positive resolution");
    }
    if (!(q.omega0 >= 0.0 && q.delta0 >= 0.0)) {
        throw ArgumentError("omega0 and delta0 must be >= 0");
    }

    auto metric = [&](double length) {
        return evaluate_point(q.omega0, q.delta0, length, q.sta, SweepMetric::final_i2,
                              SplitterMode::reduced_cd, q.tol);
    };

    const SweepAxis axis{SweepParameter::total_length, q.min_length, q.max_length, q.coarse_points};
    const auto lengths = axis.values();

    ThresholdResult r;
    std::size_t first = lengths.size();
    std::vector<double> scan(lengths.size());
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        scan[k] = metric(lengths[k]);
        r.max_metric = std::max(r.max_metric, scan[k]);
        if (scan[k] >= q.target) {
            first = k;
            break;
        }
    }
    if (first == lengths.size()) {
        return r;
    }

    r.reached = true;
    double hi = lengths[first];
    double hi_metric = scan[first];
    if (first > 0) {
        double lo = lengths[first - 1];
        while (hi - lo > q.resolution) {
            const double mid = 0.5 * (lo + hi);
            const double m = metric(mid);
            r.max_metric = std::max(r.max_metric, m);
            if (m >= q.target) {
                hi = mid;
                hi_metric = m;
            } else {
                lo = mid;
            }
        }
    }
    r.total_length = hi;
    r.metric = hi_metric;
    return r;
}

} // namespace wgsta
