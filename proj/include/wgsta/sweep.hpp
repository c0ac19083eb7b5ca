#pragma once

// Rectangular parameter sweeps over the coupler and splitter models.

#include "wgsta/errors.hpp"
#include "wgsta/model.hpp"
#include "wgsta/splitter.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace wgsta {

enum class SweepParameter { omega0, delta0, total_length };
enum class SweepMetric { final_i2, splitting_infidelity };

std::string_view to_string(SweepParameter p);
std::string_view to_string(SweepMetric m);
SweepParameter parse_sweep_parameter(std::string_view name);
SweepMetric parse_sweep_metric(std::string_view name);

struct SweepAxis {
    SweepParameter parameter = SweepParameter::omega0;
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 2;

    std::vector<double> values() const;
};

struct SweepSpec {
    SweepAxis x;
    SweepAxis y;
    // Values for the parameter that is not swept. `fixed.sta` is ignored in favour of `sta`.
    ModelParams fixed;
    SweepMetric metric = SweepMetric::final_i2;
    SplitterMode mode = SplitterMode::reduced_cd;
    bool sta = false;
    double tol = 1e-8;
    unsigned workers = 1; // 0: one per hardware thread

    void validate() const;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<double> x_values;
    std::vector<double> y_values;
    std::vector<double> grid; // row-major: grid[j * nx + i] is (x_i, y_j)
    std::string backend;

    double at(std::size_t i, std::size_t j) const { return grid[j * x_values.size() + i]; }
};

// Metric of a single design point. omega0 = 0 or total_length = 0 means no
// propagation: final_i2 = 0 and splitting_infidelity = 1/2.
double evaluate_point(double omega0, double delta0, double total_length, bool sta,
                      SweepMetric metric, SplitterMode mode, double tol);

// Metric at sweep coordinates (x, y).
double evaluate_cell(const SweepSpec& spec, double x, double y);

class SweepError : public NumericalError {
public:
    SweepError(const std::string& what, double x, double y) : NumericalError(what), x_(x), y_(y) {}
    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }

private:
    double x_;
    double y_;
};

// Throws SweepError naming the first failed cell.
SweepResult run_sweep(const SweepSpec& spec);

// Fraction of cells with metric >= target.
double robust_region_fraction(const SweepResult& result, double target);

struct ThresholdQuery {
    double omega0 = 0.0;
    double delta0 = 0.0;
    bool sta = false;
    double target = 0.99;
    double min_length = 0.0; // total length, mm
    double max_length = 2.0;
    double tol = 1e-10;
    std::size_t coarse_points = 100;
    double resolution = 0.01; // mm
};

struct ThresholdResult {
    bool reached = false;
    double total_length = 0.0; // smallest length found with metric >= target
    double metric = 0.0;       // final_i2 at total_length
    double max_metric = 0.0;   // best final_i2 seen on the coarse scan
};

// Coarse scan of final_i2 over [min_length, max_length], then bisection between the
// first passing point and its predecessor down to `resolution`.
ThresholdResult threshold_length(const ThresholdQuery& q);

} // namespace wgsta
