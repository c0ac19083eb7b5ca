#include "wgsta/io.hpp"

#include "wgsta/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#ifndef WGSTA_VERSION
#define WGSTA_VERSION "unknown"
#endif

namespace wgsta {

using nlohmann::json;

namespace {

const std::set<std::string>& allowed_keys(Command c)
{
    static const std::set<std::string> profile{"omega0", "delta0", "total_length", "sta", "samples",
                                               "format", "output"};
    static const std::set<std::string> simulate{"omega0",  "delta0",      "total_length", "sta", "samples",
                                                "tol",     "input_guide", "format",       "output"};
    static const std::set<std::string> splitter{"omega0", "delta0", "total_length", "sta",   "samples",
                                                "tol",    "mode",   "format",       "output"};
    static const std::set<std::string> sweep{"omega0", "delta0", "total_length", "sta",    "axis_x", "axis_y",
                                             "metric", "mode",   "tol",          "workers", "format", "output"};
    static const std::set<std::string> threshold{"omega0", "delta0", "sta",    "target",
                                                 "range",  "tol",    "format", "output"};
    static const std::set<std::string> check{"omega0", "delta0", "total_length", "sta", "samples",
                                             "format", "output"};
    switch (c) {
    case Command::profile:
        return profile;
    case Command::simulate:
        return simulate;
    case Command::splitter:
        return splitter;
    case Command::sweep:
        return sweep;
    case Command::threshold:
        return threshold;
    case Command::check:
        return check;
    }
    return check;
}

double get_number(const json& v, const std::string& key)
{
    if (!v.is_number()) {
        throw ArgumentError("config key '" + key + "' must be a number");
    }
    return v.get<double>();
}

std::size_t get_count(const json& v, const std::string& key)
{
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ArgumentError("config key '" + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

bool get_bool(const json& v, const std::string& key)
{
    if (!v.is_boolean()) {
        throw ArgumentError("config key '" + key + "' must be true or false");
    }
    return v.get<bool>();
}

std::string get_string(const json& v, const std::string& key)
{
    if (!v.is_string()) {
        throw ArgumentError("config key '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

SweepAxis parse_axis(const json& v, const std::string& key)
{
    if (!v.is_object()) {
        throw ArgumentError("config key '" + key + "' must be an object");
    }
    SweepAxis a;
    for (const auto& [k, item] : v.items()) {
        const std::string path = key + "." + k;
        if (k == "parameter") {
            a.parameter = parse_sweep_parameter(get_string(item, path));
        } else if (k == "min") {
            a.min = get_number(item, path);
        } else if (k == "max") {
            a.max = get_number(item, path);
        } else if (k == "count") {
            a.count = get_count(item, path);
        } else {
            throw ArgumentError("unknown config key '" + path + "'");
        }
    }
    return a;
}

json axis_to_json(const SweepAxis& a)
{
    return {{"parameter", to_string(a.parameter)}, {"min", a.min}, {"max", a.max}, {"count", a.count}};
}

void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw ArgumentError(what);
    }
}

bool uses_tolerance(Command c)
{
    return c == Command::simulate || c == Command::splitter || c == Command::sweep ||
           c == Command::threshold;
}

} // namespace

std::string_view to_string(Command c)
{
    switch (c) {
    case Command::profile:
        return "profile";
    case Command::simulate:
        return "simulate";
    case Command::splitter:
        return "splitter";
    case Command::sweep:
        return "sweep";
    case Command::threshold:
        return "threshold";
    case Command::check:
        return "check";
    }
    return "?";
}

Command parse_command(std::string_view name)
{
    for (auto c : {Command::profile, Command::simulate, Command::splitter, Command::sweep,
                   Command::threshold, Command::check}) {
        if (name == to_string(c)) {
            return c;
        }
    }
    throw ArgumentError("unknown command '" + std::string(name) + "'");
}

std::string_view to_string(SplitterMode m)
{
    return m == SplitterMode::direct ? "direct" : "reduced_cd";
}

SplitterMode parse_splitter_mode(std::string_view name)
{
    if (name == "direct") {
        return SplitterMode::direct;
    }
    if (name == "reduced_cd") {
        return SplitterMode::reduced_cd;
    }
    throw ArgumentError("unknown splitter mode '" + std::string(name) + "'");
}

void RunConfig::validate() const
{
    const auto& m = model;
    require(std::isfinite(m.omega0) && m.omega0 >= 0.0, "omega0 must be >= 0");
    require(std::isfinite(m.delta0) && m.delta0 >= 0.0, "delta0 must be >= 0");
    if (command == Command::profile || command == Command::check) {
        require(m.omega0 > 0.0, "omega0 must be > 0 for the schedule");
    }
    if (command == Command::sweep) {
        require(std::isfinite(m.half_length) && m.half_length >= 0.0, "total_length must be >= 0");
    } else if (command != Command::threshold) {
        require(std::isfinite(m.half_length) && m.half_length > 0.0, "total_length must be > 0");
    }
    if (command != Command::sweep && command != Command::threshold) {
        require(samples >= 2, "samples must be >= 2");
    }
    if (uses_tolerance(command)) {
        require(tol >= 1e-12 && tol <= 1e-4, "tol must lie in [1e-12, 1e-4]");
    }
    require(input_guide == 1 || input_guide == 2, "input_guide must be 1 or 2");
    if (command == Command::threshold) {
        require(target > 0.0 && target < 1.0, "target must lie in (0, 1)");
        require(std::isfinite(range_max) && range_min >= 0.0 && range_min < range_max,
                "range must satisfy 0 <= min < max");
    }
    if (command == Command::sweep) {
        sweep_spec().validate();
    }
}

SweepSpec RunConfig::sweep_spec() const
{
    SweepSpec s;
    s.x = axis_x;
    s.y = axis_y;
    s.fixed = model;
    s.metric = metric;
    s.mode = mode;
    s.sta = model.sta;
    s.tol = tol;
    s.workers = workers;
    return s;
}

ThresholdQuery RunConfig::threshold_query() const
{
    ThresholdQuery q;
    q.omega0 = model.omega0;
    q.delta0 = model.delta0;
    q.sta = model.sta;
    q.target = target;
    q.min_length = range_min;
    q.max_length = range_max;
    q.tol = tol;
    return q;
}

RunConfig parse_config(const json& doc)
{
    require(doc.is_object() && doc.size() == 1, "config must hold exactly one top-level command object");
    const auto& [name, body] = *doc.items().begin();

    RunConfig cfg;
    cfg.command = parse_command(name);
    require(body.is_object(), "config for '" + name + "' must be an object");

    const auto& allowed = allowed_keys(cfg.command);
    for (const auto& [key, v] : body.items()) {
        if (!allowed.contains(key)) {
            throw ArgumentError("unknown config key '" + key + "' for command '" + name + "'");
        }
        if (key == "omega0") {
            cfg.model.omega0 = get_number(v, key);
        } else if (key == "delta0") {
            cfg.model.delta0 = get_number(v, key);
        } else if (key == "total_length") {
            cfg.model.half_length = 0.5 * get_number(v, key);
        } else if (key == "sta") {
            cfg.model.sta = get_bool(v, key);
        } else if (key == "samples") {
            cfg.samples = get_count(v, key);
        } else if (key == "tol") {
            cfg.tol = get_number(v, key);
        } else if (key == "input_guide") {
            cfg.input_guide = static_cast<int>(get_count(v, key));
        } else if (key == "mode") {
            cfg.mode = parse_splitter_mode(get_string(v, key));
        } else if (key == "axis_x") {
            cfg.axis_x = parse_axis(v, key);
        } else if (key == "axis_y") {
            cfg.axis_y = parse_axis(v, key);
        } else if (key == "metric") {
            cfg.metric = parse_sweep_metric(get_string(v, key));
        } else if (key == "workers") {
            cfg.workers = static_cast<unsigned>(get_count(v, key));
        } else if (key == "target") {
            cfg.target = get_number(v, key);
        } else if (key == "range") {
            require(v.is_array() && v.size() == 2, "config key 'range' must be [min, max]");
            cfg.range_min = get_number(v[0], "range[0]");
            cfg.range_max = get_number(v[1], "range[1]");
        } else if (key == "format") {
            const auto f = get_string(v, key);
            require(f == "csv" || f == "json", "format must be 'csv' or 'json'");
            cfg.format = f == "csv" ? OutputFormat::csv : OutputFormat::json;
        } else if (key == "output") {
            cfg.output = get_string(v, key);
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config_text(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ArgumentError(std::string("malformed config: ") + e.what());
    }
    return parse_config(doc);
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open config file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

json config_to_json(const RunConfig& cfg)
{
    json body;
    const auto& allowed = allowed_keys(cfg.command);
    auto put = [&](const std::string& key, json value) {
        if (allowed.contains(key)) {
            body[key] = std::move(value);
        }
    };
    put("omega0", cfg.model.omega0);
    put("delta0", cfg.model.delta0);
    put("total_length", cfg.model.total_length());
    put("sta", cfg.model.sta);
    put("samples", cfg.samples);
    put("tol", cfg.tol);
    put("input_guide", cfg.input_guide);
    put("mode", to_string(cfg.mode));
    put("axis_x", axis_to_json(cfg.axis_x));
    put("axis_y", axis_to_json(cfg.axis_y));
    put("metric", to_string(cfg.metric));
    put("workers", cfg.workers);
    put("target", cfg.target);
    put("range", json::array({cfg.range_min, cfg.range_max}));
    put("format", cfg.format == OutputFormat::csv ? "csv" : "json");
    return {{std::string(to_string(cfg.command)), body}};
}

json provenance(const RunConfig& cfg, std::string_view backend)
{
    json p;
    p["config"] = config_to_json(cfg);
    p["backend"] = backend;
    if (uses_tolerance(cfg.command)) {
        p["tolerance"] = cfg.tol;
    }
    p["version"] = WGSTA_VERSION;
    return p;
}

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

double parse_double(std::string_view text)
{
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ArgumentError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

namespace {

void write_field(std::ostream& os, const std::string& field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        os << field;
        return;
    }
    os << '"';
    for (char ch : field) {
        if (ch == '"') {
            os << '"';
        }
        os << ch;
    }
    os << '"';
}

std::vector<std::string> split_record(const std::string& line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                fields.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.emplace_back();
        } else {
            fields.back() += ch;
        }
    }
    return fields;
}

} // namespace

void write_csv(std::ostream& os, const Table& table)
{
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i > 0) {
            os << ',';
        }
        write_field(os, table.header[i]);
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                os << ',';
            }
            os << format_double(row[i]);
        }
        os << '\n';
    }
}

Table read_csv(std::istream& is)
{
    Table t;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto fields = split_record(line);
        if (header) {
            t.header = std::move(fields);
            header = false;
            continue;
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            row.push_back(parse_double(f));
        }
        t.rows.push_back(std::move(row));
    }
    if (header) {
        throw ArgumentError("empty CSV document");
    }
    return t;
}

Table profile_table(const ModelParams& p, std::size_t samples)
{
    require(samples >= 2, "profile needs at least 2 samples");
    const SignFlipSchedule s(p);
    const double L = p.half_length;
    Table t;
    t.header = {"z", "omega", "delta", "omega_a", "omega_eff", "delta_eff"};
    t.rows.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double z = k + 1 == samples
                             ? L
                             : -L + 2.0 * L * static_cast<double>(k) / static_cast<double>(samples - 1);
        const auto pt = s.point(z, z == 0.0 ? Side::left : Side::none);
        t.rows.push_back({z, pt.omega, pt.delta, pt.omega_a, pt.omega_eff, pt.delta_eff});
    }
    return t;
}

Table intensity_table(const Trajectory& traj)
{
    Table t;
    t.header = {"z"};
    for (int i = 0; i < traj.dim(); ++i) {
        t.header.push_back("I" + std::to_string(i + 1));
    }
    t.rows.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        std::vector<double> row{s.z};
        row.insert(row.end(), s.intensities.begin(), s.intensities.end());
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table sweep_table(const SweepResult& result)
{
    Table t;
    t.header.push_back(std::string(to_string(result.spec.y.parameter)) + "\\" +
                       std::string(to_string(result.spec.x.parameter)));
    for (double x : result.x_values) {
        t.header.push_back(format_double(x));
    }
    const std::size_t nx = result.x_values.size();
    for (std::size_t j = 0; j < result.y_values.size(); ++j) {
        std::vector<double> row{result.y_values[j]};
        for (std::size_t i = 0; i < nx; ++i) {
            row.push_back(result.at(i, j));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

json table_to_json(const Table& table)
{
    json data = json::object();
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        json col = json::array();
        for (const auto& row : table.rows) {
            col.push_back(row[c]);
        }
        data[table.header[c]] = std::move(col);
    }
    return {{"columns", table.header}, {"data", data}};
}

json to_json(const Diagnostics& d)
{
    return {{"max_adiabaticity_ratio", d.max_adiabaticity_ratio},
            {"max_cd_ratio", d.max_cd_ratio},
            {"bound_satisfied", d.bound_satisfied}};
}

json to_json(const SweepResult& result)
{
    json grid = json::array();
    const std::size_t nx = result.x_values.size();
    for (std::size_t j = 0; j < result.y_values.size(); ++j) {
        grid.push_back(std::vector<double>(result.grid.begin() + static_cast<std::ptrdiff_t>(j * nx),
                                           result.grid.begin() + static_cast<std::ptrdiff_t>((j + 1) * nx)));
    }
    return {{"axes",
             {{"x", {{"parameter", to_string(result.spec.x.parameter)}, {"values", result.x_values}}},
              {"y", {{"parameter", to_string(result.spec.y.parameter)}, {"values", result.y_values}}}}},
            {"grid", grid},
            {"metric", to_string(result.spec.metric)}};
}

} // namespace wgsta
