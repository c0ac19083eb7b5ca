#pragma once

// Run configuration and CSV/JSON serialization of results.

#include "wgsta/model.hpp"
#include "wgsta/propagator.hpp"
#include "wgsta/splitter.hpp"
#include "wgsta/sweep.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wgsta {

enum class Command { profile, simulate, splitter, sweep, threshold, check };
enum class OutputFormat { csv, json };

std::string_view to_string(Command c);
Command parse_command(std::string_view name);
std::string_view to_string(SplitterMode m);
SplitterMode parse_splitter_mode(std::string_view name);

struct RunConfig {
    Command command = Command::simulate;
    ModelParams model{1.5, 0.1, 12.5, false};
    SplitterMode mode = SplitterMode::reduced_cd;
    int input_guide = 1;
    std::size_t samples = 1001;
    double tol = 1e-10;
    SweepAxis axis_x{SweepParameter::omega0, 0.0, 5.0, 64};
    SweepAxis axis_y{SweepParameter::total_length, 0.0, 2.0, 64};
    SweepMetric metric = SweepMetric::final_i2;
    unsigned workers = 0;
    double target = 0.99;
    double range_min = 0.0; // threshold search, total length in mm
    double range_max = 2.0;
    OutputFormat format = OutputFormat::csv;
    std::string output; // empty: standard output

    // Range checks for the fields the command uses. Throws ArgumentError.
    void validate() const;

    SweepSpec sweep_spec() const;
    ThresholdQuery threshold_query() const;
};

// `{"<command>": {...}}`. Unknown keys, wrong types and out-of-range values throw
// ArgumentError. Keys missing from the document keep their RunConfig defaults.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Inverse of parse_config for every key the command reads (the output path is left out).
nlohmann::json config_to_json(const RunConfig& cfg);

nlohmann::json provenance(const RunConfig& cfg, std::string_view backend);

// Column-oriented numeric table.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// 17 significant digits, '.' decimal separator; parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

void write_csv(std::ostream& os, const Table& table);
Table read_csv(std::istream& is);

// z, omega, delta, omega_a, omega_eff, delta_eff on a uniform grid over [-L, L].
// A grid point at z = 0 reports the z -> 0- limit.
Table profile_table(const ModelParams& p, std::size_t samples);

// z, I1, I2[, I3].
Table intensity_table(const Trajectory& traj);

// First header cell "<y>\<x>", then the x values; each row starts with its y value.
Table sweep_table(const SweepResult& result);

nlohmann::json table_to_json(const Table& table);
nlohmann::json to_json(const Diagnostics& d);
nlohmann::json to_json(const SweepResult& result);

} // namespace wgsta
