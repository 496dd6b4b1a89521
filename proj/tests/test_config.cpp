#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "degenbeam/runner.hpp"

using namespace degenbeam;
using nlohmann::json;
namespace fs = std::filesystem;

namespace
{
    const char * schema_blob = R"({
        "profile": {"type": "power", "alpha": 0.5, "scale": 1.0},
        "grid": {"n": 200},
        "time": {"T": "auto2T0", "dt": 0.001},
        "initial": {"y": "bump", "v": "zero"},
        "observability": {"samples": 100, "mode_count": 10},
        "control": {"filter_modes": 10, "cg_tol": 1e-10, "max_iter": 500, "tikhonov": 0.0},
        "out": "./runs/exp1"
    })";

    fs::path temp_dir(const std::string & tag)
    {
        const fs::path dir = fs::temp_directory_path() / ("degenbeam_test_" + tag);
        fs::remove_all(dir);
        fs::create_directories(dir);
        return dir;
    }

    std::string slurp(const fs::path & p)
    {
        std::ifstream in(p, std::ios::binary);
        REQUIRE(bool(in));
        return std::string(std::istreambuf_iterator<char>(in), {});
    }
} // namespace

TEST_CASE("the documented schema parses with every field honored")
{
    const ExperimentConfig cfg = parse_config_json(json::parse(schema_blob));
    CHECK(cfg.profile.type == "power");
    CHECK(cfg.profile.alpha == 0.5);
    CHECK(cfg.grid_n == 200);
    CHECK(cfg.time_auto);
    CHECK(cfg.dt == 0.001);
    CHECK(cfg.initial_y == "bump");
    CHECK(cfg.initial_v == "zero");
    CHECK(cfg.obs_samples == 100);
    CHECK(cfg.obs_mode_count == 10);
    CHECK(cfg.filter_modes == 10);
    CHECK(cfg.cg_tol == 1e-10);
    CHECK(cfg.max_iter == 500);
    CHECK(cfg.tikhonov == 0.0);
    CHECK(cfg.out_dir == "./runs/exp1");

    // auto2T0 with K = 0.5, a(1) = 1: T0 = 32/3
    const TimeGrid tg = resolve_time(cfg, 32.0 / 3.0);
    CHECK(tg.T == doctest::Approx(64.0 / 3.0));
    CHECK(std::abs(tg.steps * tg.dt - tg.T) <= 1e-12);
    CHECK(tg.dt <= 0.001 + 1e-15);
}

TEST_CASE("unknown keys are rejected at every level")
{
    auto with = [](const char * pointer, json value)
    {
        json j = json::parse(schema_blob);
        j[json::json_pointer(pointer)] = std::move(value);
        return j;
    };
    CHECK_THROWS_AS(parse_config_json(with("/mystery", 1)), Error);
    CHECK_THROWS_AS(parse_config_json(with("/profile/gamma", 2.0)), Error);
    CHECK_THROWS_AS(parse_config_json(with("/grid/m", 100)), Error);
    CHECK_THROWS_AS(parse_config_json(with("/time/steps", 10)), Error);
    CHECK_THROWS_AS(parse_config_json(with("/initial/w", "zero")), Error);
    CHECK_THROWS_AS(parse_config_json(with("/observability/tol", 0.1)), Error);
    CHECK_THROWS_AS(parse_config_json(with("/control/solver", "cg")), Error);
}

TEST_CASE("malformed configs produce field diagnostics")
{
    auto parse_str = [](const std::string & text)
    { return parse_config_json(json::parse(text)); };

    CHECK_THROWS_AS(parse_str(R"({"profile": {"type": "cubic"}})"), Error);
    CHECK_THROWS_AS(parse_str(R"({"profile": {"type": "power"}})"), Error);
    CHECK_THROWS_AS(
        parse_str(R"({"profile": {"type": "power", "alpha": "x"}, "grid": {"n": 10}})"), Error);
    CHECK_THROWS_AS(parse_str(
        R"({"profile": {"type": "power", "alpha": 0.5}, "time": {"T": -1.0}})"), Error);
    CHECK_THROWS_AS(parse_str(
        R"({"profile": {"type": "power", "alpha": 0.5}, "time": {"T": "auto"}})"), Error);

    try
    {
        parse_str(R"({"profile": {"type": "power", "alpha": 0.5}, "grid": {"n": "many"}})");
        CHECK(false);
    }
    catch (const Error & e)
    {
        CHECK(e.code() == ErrorCode::ConfigError);
        CHECK(std::string(e.what()).find("grid.n") != std::string::npos);
    }

    // custom tables
    CHECK_THROWS_AS(parse_str(R"({"profile": {"type": "custom",
        "x": [0.0, 1.0], "a": [0.0], "a_prime": [1.0, 1.0]}})"), Error);
    CHECK_THROWS_AS(parse_str(R"({"profile": {"type": "custom",
        "x": [0.5, 1.0], "a": [0.5, 1.0], "a_prime": [1.0, 1.0]}})"), Error);

    const ExperimentConfig ok = parse_str(R"({"profile": {"type": "custom",
        "x": [0.0, 0.5, 1.0], "a": [0.0, 0.5, 1.0], "a_prime": [1.0, 1.0, 1.0]}})");
    const DegeneracyProfile p = make_profile(ok.profile);
    CHECK(p.a(0.25) == doctest::Approx(0.25));
    CHECK(p.a_prime(0.75) == doctest::Approx(1.0));
}

TEST_CASE("time snapping never enlarges dt and always divides T")
{
    const TimeGrid a = snap_time(1.0, 1e-3);
    CHECK(a.steps == 1000);
    CHECK(a.dt == doctest::Approx(1e-3));

    const TimeGrid b = snap_time(64.0 / 3.0, 1e-3);
    CHECK(b.steps == 21334);
    CHECK(b.dt <= 1e-3);
    CHECK(std::abs(b.steps * b.dt - b.T) <= 1e-12);
}

TEST_CASE("initial data vocabulary")
{
    const Grid grid = build_grid(64);
    const DegeneracyProfile p = make_power_profile(0.5, 1.0);
    const BeamOperator op = assemble_beam_operator(p, grid);
    const WeightedQuadrature quad = make_weighted_quadrature(p, grid);

    const std::vector<double> zero = make_shape("zero", op, grid);
    for (double v : zero) CHECK(v == 0.0);

    const std::vector<double> bump = make_shape("bump", op, grid);
    CHECK(bump[32] == doctest::Approx(0.25 * 0.25));
    CHECK(bump[0] == 0.0);
    CHECK(bump[64] == 0.0);

    const std::vector<double> mode = make_shape("mode:1", op, grid);
    CHECK(weighted_l2_norm_sq(mode, quad) == doctest::Approx(1.0).epsilon(1e-10));

    const std::vector<double> r1 = make_shape("random:7", op, grid);
    const std::vector<double> r2 = make_shape("random:7", op, grid);
    const std::vector<double> r3 = make_shape("random:8", op, grid);
    CHECK(r1 == r2);
    CHECK(r1 != r3);

    CHECK_THROWS_AS(make_shape("mode:0", op, grid), Error);
    CHECK_THROWS_AS(make_shape("wiggle", op, grid), Error);
    CHECK_THROWS_AS(make_shape("random:x", op, grid), Error);
}

TEST_CASE("classify pipeline writes a faithful run report")
{
    const fs::path out = temp_dir("classify");
    json j = json::parse(schema_blob);
    j["out"] = out.string();
    const ExperimentConfig cfg = parse_config_json(j);

    const auto report = run_command(Command::Classify, cfg);
    CHECK(report["degeneracy"]["K"] == 0.5);
    CHECK(report["degeneracy"]["regime"] == "WD");
    CHECK(report["T0"].get<double>() == doctest::Approx(32.0 / 3.0));
    CHECK(fs::exists(out / "run_report.json"));

    // the echoed config reproduces the resolved run
    const ExperimentConfig echoed =
        parse_config_json(json::parse(report["config"].dump()));
    CHECK_FALSE(echoed.time_auto);
    CHECK(echoed.T == doctest::Approx(64.0 / 3.0));
    fs::remove_all(out);
}

TEST_CASE("simulate pipeline with zero data emits an all-zero energy table")
{
    const fs::path out = temp_dir("simulate");
    json j = json::parse(schema_blob);
    j["out"] = out.string();
    j["grid"]["n"] = 32;
    j["time"]["T"] = 0.1;
    j["time"]["dt"] = 0.01;
    j["initial"]["y"] = "zero";
    const ExperimentConfig cfg = parse_config_json(j);

    run_command(Command::Simulate, cfg);
    const std::string csv = slurp(out / "trajectory.csv");
    CHECK(csv.rfind("t,energy,trace_yxx_1\r\n", 0) == 0);
    // 1 header + 11 samples
    std::size_t lines = 0;
    for (char c : csv)
    {
        if (c == '\n') ++lines;
    }
    CHECK(lines == 12);
    CHECK(csv.find("0.01,0,0") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("observe pipeline is deterministic for a fixed seed")
{
    json j = json::parse(schema_blob);
    j["grid"]["n"] = 48;
    j["time"]["T"] = 2.0;
    j["time"]["dt"] = 0.01;
    j["observability"] = {{"samples", 12}, {"mode_count", 3}};
    j["seed"] = 424242;

    const fs::path out1 = temp_dir("observe1");
    const fs::path out2 = temp_dir("observe2");
    j["out"] = out1.string();
    run_command(Command::Observe, parse_config_json(j));
    j["out"] = out2.string();
    run_command(Command::Observe, parse_config_json(j));

    CHECK(slurp(out1 / "quotients.csv") == slurp(out2 / "quotients.csv"));
    CHECK(slurp(out1 / "observability.json") == slurp(out2 / "observability.json"));

    // the echoed config reproduces the run byte for byte
    const json report = json::parse(slurp(out1 / "run_report.json"));
    ExperimentConfig echoed = parse_config_json(json::parse(report["config"].dump()));
    const fs::path out_echo = temp_dir("observe_echo");
    echoed.out_dir = out_echo.string();
    run_command(Command::Observe, echoed);
    CHECK(slurp(out1 / "quotients.csv") == slurp(out_echo / "quotients.csv"));
    fs::remove_all(out_echo);

    // a different seed moves the sampled quotients
    j["seed"] = 5;
    const fs::path out3 = temp_dir("observe3");
    j["out"] = out3.string();
    run_command(Command::Observe, parse_config_json(j));
    CHECK(slurp(out1 / "quotients.csv") != slurp(out3 / "quotients.csv"));

    fs::remove_all(out1);
    fs::remove_all(out2);
    fs::remove_all(out3);
}

TEST_CASE("control pipeline with zero data reports the zero control")
{
    const fs::path out = temp_dir("control");
    json j = json::parse(schema_blob);
    j["out"] = out.string();
    j["grid"]["n"] = 48;
    j["time"]["dt"] = 0.02;
    j["initial"] = {{"y", "zero"}, {"v", "zero"}};
    j["control"]["filter_modes"] = 3;
    run_command(Command::Control, parse_config_json(j));

    const json summary = json::parse(slurp(out / "control_summary.json"));
    CHECK(summary["converged"].get<bool>());
    CHECK(summary["iterations"].get<int>() == 0);
    CHECK(summary["control_cost"].get<double>() == 0.0);
    CHECK(fs::exists(out / "control.csv"));
    fs::remove_all(out);
}

TEST_CASE("sweep pipeline emits the CSV matrix with vacuous cells as NaN")
{
    const fs::path out = temp_dir("sweep");
    json j = json::parse(schema_blob);
    j["out"] = out.string();
    j["grid"]["n"] = 48;
    j["time"]["dt"] = 0.02;
    j["observability"] = {{"samples", 4}, {"mode_count", 3}};
    j["sweep"] = {{"K", {1.0}}, {"T", {8.0, 32.0}}, {"workers", 2}};
    const auto report = run_command(Command::Sweep, parse_config_json(j));

    const std::string csv = slurp(out / "sweep.csv");
    CHECK(csv.rfind("K,T,T0,lower_bound,upper_bound,C_T_estimate,c_T", 0) == 0);
    // K=1, a(1)=1, T=32: lower 16, upper 400
    CHECK(csv.find("1,32,16,16,400,") != std::string::npos);
    // T = 8 < T0 = 16: lower = 8 - 16 = -8, upper = 96 + 16 = 112, cost NaN
    CHECK(csv.find("1,8,16,-8,112,") != std::string::npos);

    const std::size_t line_start = csv.find("1,8,16");
    const std::string row = csv.substr(line_start, csv.find('\r', line_start) - line_start);
    CHECK(row.substr(row.rfind(',') + 1) == "nan");

    CHECK(fs::exists(out / "cell_K1_T8" / "observability.json"));
    CHECK(fs::exists(out / "cell_K1_T32" / "observability.json"));

    // for fixed K the estimate is non-decreasing in T
    const json cell8 = json::parse(slurp(out / "cell_K1_T8" / "observability.json"));
    const json cell32 = json::parse(slurp(out / "cell_K1_T32" / "observability.json"));
    CHECK(cell32["C_T_estimate"].get<double>() >= cell8["C_T_estimate"].get<double>());
    fs::remove_all(out);
}
