#include "wgsta/cli.hpp"

#include "wgsta/coupler.hpp"
#include "wgsta/errors.hpp"
#include "wgsta/io.hpp"
#include "wgsta/splitter.hpp"
#include "wgsta/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace wgsta {

using nlohmann::json;

namespace {

class OutputError : public Error {
public:
    using Error::Error;
};

struct FlagValues {
    std::string config;
    double omega0 = 0.0;
    double delta0 = 0.0;
    double total_length = 0.0;
    bool sta = false;
    std::size_t samples = 0;
    double tol = 0.0;
    int input_guide = 1;
    std::string mode;
    std::string axis_x;
    std::string axis_y;
    std::string metric;
    unsigned workers = 0;
    double target = 0.0;
    std::vector<double> range;
    std::string format;
    std::string output;
};

SweepAxis parse_axis_flag(const std::string& text)
{
    // NAME:MIN:MAX:COUNT
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) {
        parts.push_back(item);
    }
    if (parts.size() != 4) {
        throw ArgumentError("axis '" + text + "' must look like NAME:MIN:MAX:COUNT");
    }
    SweepAxis a;
    a.parameter = parse_sweep_parameter(parts[0]);
    a.min = parse_double(parts[1]);
    a.max = parse_double(parts[2]);
    const double count = parse_double(parts[3]);
    if (count < 0.0 || count != static_cast<double>(static_cast<std::size_t>(count))) {
        throw ArgumentError("axis count must be a non-negative integer");
    }
    a.count = static_cast<std::size_t>(count);
    return a;
}

void register_flags(CLI::App* sub, Command cmd, FlagValues& v)
{
    sub->add_option("--config", v.config, "JSON config file; flags override its values")
        ->check(CLI::ExistingFile);
    sub->add_option("--omega0", v.omega0, "peak coupling (1/mm)");
    sub->add_option("--delta0", v.delta0, "phase-mismatch magnitude (1/mm)");
    if (cmd != Command::threshold) {
        sub->add_option("--total-length", v.total_length, "device length 2L (mm)");
    }
    sub->add_flag("--sta,!--no-sta", v.sta, "use the counterdiabatic schedule");
    if (cmd == Command::profile || cmd == Command::simulate || cmd == Command::splitter ||
        cmd == Command::check) {
        sub->add_option("--samples", v.samples, "number of output points along z");
    }
    if (cmd == Command::simulate || cmd == Command::splitter || cmd == Command::sweep ||
        cmd == Command::threshold) {
        sub->add_option("--tol", v.tol, "integrator tolerance");
    }
    if (cmd == Command::simulate) {
        sub->add_option("--input-guide", v.input_guide, "guide that receives the light (1 or 2)");
    }
    if (cmd == Command::splitter || cmd == Command::sweep) {
        sub->add_option("--mode", v.mode, "splitter correction: direct | reduced_cd");
    }
    if (cmd == Command::sweep) {
        sub->add_option("--x-axis", v.axis_x, "NAME:MIN:MAX:COUNT (NAME: omega0, delta0, total_length)");
        sub->add_option("--y-axis", v.axis_y, "NAME:MIN:MAX:COUNT");
        sub->add_option("--metric", v.metric, "final_i2 | splitting_infidelity");
        sub->add_option("--workers", v.workers, "worker threads (0: one per hardware thread)");
    }
    if (cmd == Command::threshold) {
        sub->add_option("--target", v.target, "required final I2");
        sub->add_option("--range", v.range, "search range for 2L (mm): MIN MAX")->expected(2);
    }
    sub->add_option("--format", v.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("-o,--output", v.output, "output file (default: standard output)");
}

RunConfig build_config(const CLI::App& sub, Command cmd, const FlagValues& v)
{
    RunConfig cfg;
    if (!v.config.empty()) {
        cfg = load_config(v.config);
        if (cfg.command != cmd) {
            throw ArgumentError("config file describes '" + std::string(to_string(cfg.command)) +
                                "', not '" + std::string(to_string(cmd)) + "'");
        }
    }
    cfg.command = cmd;

    auto given = [&sub](const std::string& name) {
        const CLI::Option* o = sub.get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
    };
    if (given("--omega0")) cfg.model.omega0 = v.omega0;
    if (given("--delta0")) cfg.model.delta0 = v.delta0;
    if (given("--total-length")) cfg.model.half_length = 0.5 * v.total_length;
    if (given("--sta")) cfg.model.sta = v.sta;
    if (given("--samples")) cfg.samples = v.samples;
    if (given("--tol")) cfg.tol = v.tol;
    if (given("--input-guide")) cfg.input_guide = v.input_guide;
    if (given("--mode")) cfg.mode = parse_splitter_mode(v.mode);
    if (given("--x-axis")) cfg.axis_x = parse_axis_flag(v.axis_x);
    if (given("--y-axis")) cfg.axis_y = parse_axis_flag(v.axis_y);
    if (given("--metric")) cfg.metric = parse_sweep_metric(v.metric);
    if (given("--workers")) cfg.workers = v.workers;
    if (given("--target")) cfg.target = v.target;
    if (given("--range")) {
        cfg.range_min = v.range.at(0);
        cfg.range_max = v.range.at(1);
    }
    if (given("--format")) cfg.format = v.format == "json" ? OutputFormat::json : OutputFormat::csv;
    if (given("--output")) cfg.output = v.output;

    cfg.validate();
    return cfg;
}

struct Payload {
    std::optional<Table> table;
    json body = json::object();
    std::string backend = "closed-form";
};

void write_payload(const RunConfig& cfg, Payload payload, std::ostream& out)
{
    const bool as_csv = cfg.format == OutputFormat::csv && payload.table.has_value();
    std::ofstream file;
    std::ostream* os = &out;
    if (!cfg.output.empty()) {
        file.open(cfg.output);
        if (!file) {
            throw OutputError("cannot open output file " + cfg.output);
        }
        os = &file;
    }

    if (as_csv) {
        write_csv(*os, *payload.table);
        if (!cfg.output.empty()) {
            std::ofstream side(cfg.output + ".provenance.json");
            if (!side) {
                throw OutputError("cannot write provenance next to " + cfg.output);
            }
            side << provenance(cfg, payload.backend).dump(2) << '\n';
        }
    } else {
        payload.body["provenance"] = provenance(cfg, payload.backend);
        *os << payload.body.dump(2) << '\n';
    }
    os->flush();
    if (!*os) {
        throw OutputError("failed writing output");
    }
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    Payload payload;
    switch (cfg.command) {
    case Command::profile: {
        payload.table = profile_table(cfg.model, cfg.samples);
        payload.body = table_to_json(*payload.table);
        break;
    }
    case Command::simulate: {
        const auto r = simulate(cfg.model, cfg.input_guide, {cfg.tol, cfg.samples, false});
        payload.table = intensity_table(r.trajectory);
        payload.body = table_to_json(*payload.table);
        payload.body["final_i2"] = r.final_i2;
        payload.backend = r.trajectory.backend;
        break;
    }
    case Command::splitter: {
        const auto r = simulate_splitter({cfg.model, cfg.mode}, {cfg.tol, cfg.samples, {}});
        payload.table = intensity_table(r.trajectory);
        payload.body = table_to_json(*payload.table);
        payload.body["final_intensities"] = r.final_intensities;
        payload.body["splitting_infidelity"] = r.splitting_infidelity;
        payload.body["dark_leakage"] = r.dark_leakage;
        payload.body["reduction_deviation"] = r.reduction_deviation;
        payload.backend = r.trajectory.backend;
        break;
    }
    case Command::sweep: {
        const auto r = run_sweep(cfg.sweep_spec());
        payload.table = sweep_table(r);
        payload.body = to_json(r);
        payload.backend = r.backend;
        break;
    }
    case Command::threshold: {
        const auto r = threshold_length(cfg.threshold_query());
        payload.backend = "dopri5-adaptive";
        payload.body = {{"reached", r.reached}, {"target", cfg.target}, {"max_metric", r.max_metric}};
        if (r.reached) {
            payload.body["total_length"] = r.total_length;
            payload.body["metric"] = r.metric;
            payload.table = Table{{"total_length", "metric"}, {{r.total_length, r.metric}}};
        }
        if (!r.reached) {
            err << "target " << cfg.target << " not reached for 2L in ["
                << cfg.range_min << ", " << cfg.range_max
                << "] mm; best final I2 " << r.max_metric << '\n';
            if (cfg.format == OutputFormat::json) {
                write_payload(cfg, payload, out);
            }
            return kExitFailure;
        }
        break;
    }
    case Command::check: {
        payload.body = to_json(diagnostics(cfg.model, cfg.samples));
        payload.body["samples"] = cfg.samples;
        break;
    }
    }
    write_payload(cfg, std::move(payload), out);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Shortcut-to-adiabaticity waveguide coupler toolkit", "wgsta"};
    app.require_subcommand(1);

    FlagValues values;
    const std::vector<std::pair<Command, std::string>> commands{
        {Command::profile, "coupling and mismatch profiles, raw and counterdiabatic"},
        {Command::simulate, "two-guide intensity trajectory"},
        {Command::splitter, "three-guide beam-splitter trajectory"},
        {Command::sweep, "final-intensity map over two parameters"},
        {Command::threshold, "shortest device reaching a target transfer"},
        {Command::check, "adiabaticity and coupling-bound diagnostics (JSON)"},
    };
    for (const auto& [cmd, help] : commands) {
        register_flags(app.add_subcommand(std::string(to_string(cmd)), help), cmd, values);
    }

    std::vector<std::string> reversed_args(args.rbegin(), args.rend());
    try {
        app.parse(reversed_args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    try {
        const Command cmd = parse_command(sub->get_name());
        const RunConfig cfg = build_config(*sub, cmd, values);
        return execute(cfg, out, err);
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace wgsta
