#include <catch_amalgamated.hpp>

#include "wgsta/coupler.hpp"
#include "wgsta/errors.hpp"
#include "wgsta/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>

using namespace wgsta;
using nlohmann::json;

namespace {

bool same_bits(double a, double b)
{
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

const char* kRobustnessSweep = R"({
  "sweep": {
    "omega0": 5.0,
    "delta0": 1.0,
    "sta": true,
    "axis_x": {"parameter": "omega0", "min": 0.0, "max": 5.0, "count": 64},
    "axis_y": {"parameter": "total_length", "min": 0.0, "max": 2.0, "count": 64},
    "metric": "final_i2",
    "tol": 1e-8
  }
})";

} // namespace

TEST_CASE("config parsing", "[io][config]")
{
    SECTION("empty and malformed documents")
    {
        CHECK_THROWS_AS(parse_config_text(""), ArgumentError);
        CHECK_THROWS_AS(parse_config_text("{"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text("{}"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text("[1, 2]"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text(R"({"simulate": {}, "profile": {}})"), ArgumentError);
    }

    SECTION("two-axis sweep")
    {
        const auto cfg = parse_config_text(kRobustnessSweep);
        CHECK(cfg.command == Command::sweep);
        const auto spec = cfg.sweep_spec();
        CHECK(spec.x.parameter == SweepParameter::omega0);
        CHECK(spec.y.parameter == SweepParameter::total_length);
        CHECK(spec.x.count == 64);
        CHECK(spec.y.max == 2.0);
        CHECK(spec.fixed.delta0 == 1.0);
        CHECK(spec.sta);
        CHECK(spec.tol == 1e-8);
    }

    SECTION("range errors")
    {
        CHECK_THROWS_AS(parse_config_text(R"({"simulate": {"omega0": -1}})"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text(R"({"simulate": {"total_length": 0}})"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text(R"({"simulate": {"input_guide": 3}})"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text(R"({"simulate": {"tol": 0.1}})"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text(R"({"threshold": {"target": 1.5}})"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text(R"({"threshold": {"range": [2, 1]}})"), ArgumentError);
    }

    SECTION("unknown keys and wrong types")
    {
        CHECK_THROWS_AS(parse_config_text(R"({"simulate": {"omega": 1}})"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text(R"({"profile": {"tol": 1e-8}})"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text(R"({"simulate": {"omega0": "1.5"}})"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text(R"({"simulate": {"sta": 1}})"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text(R"({"simulate": {"samples": 2.5}})"), ArgumentError);
        CHECK_THROWS_AS(parse_config_text(R"({"fly": {}})"), ArgumentError);
        CHECK_THROWS_AS(
            parse_config_text(R"({"sweep": {"axis_x": {"parameter": "omega0", "min": 0, "max": 1, "n": 3}}})"),
            ArgumentError);
    }

    SECTION("config survives a round trip")
    {
        for (const char* text :
             {kRobustnessSweep, R"({"threshold": {"omega0": 5, "delta0": 1, "target": 0.95, "range": [0.2, 3]}})",
              R"({"splitter": {"mode": "direct", "sta": true, "samples": 11}})"}) {
            const auto cfg = parse_config_text(text);
            const json once = config_to_json(cfg);
            CHECK(config_to_json(parse_config(once)) == once);
        }
    }
}

TEST_CASE("floats survive CSV bit for bit", "[io][csv][property]")
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::uint64_t> bits;
    Table t{{"a", "b"}, {}};
    for (int k = 0; k < 2000; ++k) {
        double v = std::bit_cast<double>(bits(rng));
        if (!std::isfinite(v)) {
            continue;
        }
        t.rows.push_back({v, std::nextafter(v, 0.0)});
    }
    t.rows.push_back({0.1, -0.0});
    t.rows.push_back({std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max()});

    std::stringstream ss;
    write_csv(ss, t);
    const Table back = read_csv(ss);
    REQUIRE(back.header == t.header);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            REQUIRE(same_bits(back.rows[r][c], t.rows[r][c]));
        }
    }
}

TEST_CASE("CSV layout", "[io][csv]")
{
    const Table t{{"plain", "with,comma", "with \"quote\""}, {{1.0, 0.5, -2.0}}};
    std::stringstream ss;
    write_csv(ss, t);
    const std::string text = ss.str();
    CHECK(text.rfind("plain,\"with,comma\",\"with \"\"quote\"\"\"\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    std::stringstream in(text);
    CHECK(read_csv(in).header == t.header);

    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(parse_double("1e-3") == 1e-3);
    CHECK_THROWS_AS(parse_double("1,5"), ArgumentError);
    CHECK_THROWS_AS(parse_double(""), ArgumentError);
}

TEST_CASE("trajectory table", "[io]")
{
    const auto r = simulate(ModelParams::with_total_length(1.5, 0.1, 25.0, true), 1, {1e-10, 50, false});
    const Table t = intensity_table(r.trajectory);
    REQUIRE(t.header == std::vector<std::string>{"z", "I1", "I2"});
    REQUIRE(t.rows.size() == 50);
    for (std::size_t k = 1; k < t.rows.size(); ++k) {
        CHECK(t.rows[k][0] > t.rows[k - 1][0]);
    }
    CHECK(t.rows.back()[2] == r.final_i2);
}

TEST_CASE("profile table", "[io]")
{
    const Table t = profile_table({1.5, 0.1, 12.5, true}, 1001);
    REQUIRE(t.header == std::vector<std::string>{"z", "omega", "delta", "omega_a", "omega_eff", "delta_eff"});
    REQUIRE(t.rows.size() == 1001);
    const auto& mid = t.rows[500];
    CHECK(mid[0] == 0.0);
    CHECK(mid[1] == 1.5);
    CHECK(mid[2] == 0.1); // left limit
    CHECK(mid[4] == 1.5);
}

TEST_CASE("JSON payloads", "[io][json]")
{
    SECTION("sweep")
    {
        SweepSpec s;
        s.x = {SweepParameter::omega0, 0.0, 2.0, 3};
        s.y = {SweepParameter::delta0, 0.0, 1.0, 2};
        s.fixed = ModelParams::with_total_length(1.0, 1.0, 5.0);
        const auto r = run_sweep(s);
        const json j = to_json(r);
        CHECK(j.contains("axes"));
        CHECK(j.contains("grid"));
        CHECK(j["axes"]["x"]["values"].size() == 3);
        CHECK(j["grid"].size() == 2);
        CHECK(j["grid"][1].size() == 3);

        // bit-exact through text
        const json back = json::parse(j.dump());
        for (std::size_t jy = 0; jy < 2; ++jy) {
            for (std::size_t ix = 0; ix < 3; ++ix) {
                CHECK(same_bits(back["grid"][jy][ix].get<double>(), r.at(ix, jy)));
            }
        }

        const Table t = sweep_table(r);
        CHECK(t.header.front() == "delta0\\omega0");
        CHECK(t.rows.size() == 2);
        CHECK(t.rows[1][0] == 1.0);
    }

    SECTION("diagnostics")
    {
        const json j = to_json(diagnostics({1.5, 0.1, 12.5, true}, 1001));
        CHECK(j.contains("max_cd_ratio"));
        CHECK(j.contains("bound_satisfied"));
        CHECK(j.contains("max_adiabaticity_ratio"));
    }

    SECTION("provenance")
    {
        const auto cfg = parse_config_text(R"({"simulate": {"omega0": 5, "delta0": 1, "total_length": 0.7}})");
        const json p = provenance(cfg, "dopri5-adaptive");
        CHECK(p["backend"] == "dopri5-adaptive");
        CHECK(p["tolerance"] == 1e-10);
        CHECK(p.contains("version"));
        const auto again = parse_config(p["config"]);
        CHECK(again.model.omega0 == 5.0);
        CHECK(again.model.half_length == 0.35);
    }
}
