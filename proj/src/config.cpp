#include "degenbeam/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "degenbeam/modal.hpp"

namespace degenbeam
{
    namespace
    {
        using nlohmann::json;

        [[noreturn]] void fail(const std::string & where, const std::string & what)
        {
            throw Error(ErrorCode::ConfigError, where + ": " + what);
        }

        void check_keys(const json & obj, const std::string & where,
                        const std::set<std::string> & allowed)
        {
            for (const auto & item : obj.items())
            {
                if (!allowed.count(item.key()))
                {
                    fail(where, "unknown key \"" + item.key() + "\"");
                }
            }
        }

        double get_number(const json & obj, const std::string & where, const std::string & key,
                          double fallback)
        {
            if (!obj.contains(key)) return fallback;
            if (!obj[key].is_number()) fail(where + "." + key, "expected a number");
            return obj[key].get<double>();
        }

        int get_int(const json & obj, const std::string & where, const std::string & key,
                    int fallback)
        {
            if (!obj.contains(key)) return fallback;
            if (!obj[key].is_number_integer()) fail(where + "." + key, "expected an integer");
            return obj[key].get<int>();
        }

        std::string get_string(const json & obj, const std::string & where, const std::string & key,
                               const std::string & fallback)
        {
            if (!obj.contains(key)) return fallback;
            if (!obj[key].is_string()) fail(where + "." + key, "expected a string");
            return obj[key].get<std::string>();
        }

        std::vector<double> get_number_list(const json & obj, const std::string & where,
                                            const std::string & key)
        {
            if (!obj[key].is_array() || obj[key].empty())
            {
                fail(where + "." + key, "expected a non-empty array of numbers");
            }
            std::vector<double> out;
            for (const auto & v : obj[key])
            {
                if (!v.is_number()) fail(where + "." + key, "expected numbers");
                out.push_back(v.get<double>());
            }
            return out;
        }
    } // namespace

    ExperimentConfig parse_config_json(const json & j)
    {
        if (!j.is_object())
        {
            fail("config", "top level must be an object");
        }
        check_keys(j, "config",
                   {"profile", "grid", "time", "initial", "observability", "control", "out",
                    "seed", "sweep"});

        ExperimentConfig cfg;

        if (!j.contains("profile") || !j["profile"].is_object())
        {
            fail("config.profile", "required object");
        }
        const json & p = j["profile"];
        cfg.profile.type = get_string(p, "profile", "type", "");
        if (cfg.profile.type == "power")
        {
            check_keys(p, "profile", {"type", "alpha", "scale"});
            if (!p.contains("alpha")) fail("profile.alpha", "required for power profiles");
            cfg.profile.alpha = get_number(p, "profile", "alpha", 0.0);
            cfg.profile.scale = get_number(p, "profile", "scale", 1.0);
        }
        else if (cfg.profile.type == "custom")
        {
            check_keys(p, "profile", {"type", "x", "a", "a_prime"});
            for (const char * key : {"x", "a", "a_prime"})
            {
                if (!p.contains(key)) fail(std::string("profile.") + key, "required for custom profiles");
            }
            cfg.profile.xs = get_number_list(p, "profile", "x");
            cfg.profile.as = get_number_list(p, "profile", "a");
            cfg.profile.a_primes = get_number_list(p, "profile", "a_prime");
            if (cfg.profile.xs.size() != cfg.profile.as.size() ||
                cfg.profile.xs.size() != cfg.profile.a_primes.size() ||
                cfg.profile.xs.size() < 2)
            {
                fail("profile", "custom table needs x, a, a_prime of equal length >= 2");
            }
            if (!std::is_sorted(cfg.profile.xs.begin(), cfg.profile.xs.end()) ||
                cfg.profile.xs.front() != 0.0 || cfg.profile.xs.back() != 1.0)
            {
                fail("profile.x", "custom table must be sorted and span [0,1]");
            }
        }
        else
        {
            fail("profile.type", "must be \"power\" or \"custom\"");
        }

        if (j.contains("grid"))
        {
            check_keys(j["grid"], "grid", {"n"});
            cfg.grid_n = get_int(j["grid"], "grid", "n", cfg.grid_n);
        }

        if (j.contains("time"))
        {
            const json & t = j["time"];
            check_keys(t, "time", {"T", "dt", "snapshots"});
            if (t.contains("T"))
            {
                if (t["T"].is_string())
                {
                    if (t["T"].get<std::string>() != "auto2T0")
                    {
                        fail("time.T", "must be a number or \"auto2T0\"");
                    }
                    cfg.time_auto = true;
                }
                else if (t["T"].is_number())
                {
                    cfg.time_auto = false;
                    cfg.T = t["T"].get<double>();
                    if (!(cfg.T > 0.0)) fail("time.T", "must be positive");
                }
                else
                {
                    fail("time.T", "must be a number or \"auto2T0\"");
                }
            }
            if (t.contains("dt"))
            {
                cfg.dt = get_number(t, "time", "dt", cfg.dt);
                cfg.dt_specified = true;
                if (!(cfg.dt > 0.0)) fail("time.dt", "must be positive");
            }
            if (t.contains("snapshots"))
            {
                cfg.snapshots = get_number_list(t, "time", "snapshots");
            }
        }

        if (j.contains("initial"))
        {
            check_keys(j["initial"], "initial", {"y", "v"});
            cfg.initial_y = get_string(j["initial"], "initial", "y", cfg.initial_y);
            cfg.initial_v = get_string(j["initial"], "initial", "v", cfg.initial_v);
        }

        if (j.contains("observability"))
        {
            check_keys(j["observability"], "observability", {"samples", "mode_count"});
            cfg.obs_samples = get_int(j["observability"], "observability", "samples", cfg.obs_samples);
            cfg.obs_mode_count =
                get_int(j["observability"], "observability", "mode_count", cfg.obs_mode_count);
            if (cfg.obs_samples < 0) fail("observability.samples", "must be >= 0");
            if (cfg.obs_mode_count < 1) fail("observability.mode_count", "must be >= 1");
            if (cfg.obs_mode_count > 30) fail("observability.mode_count", "must be <= 30");
        }

        if (j.contains("control"))
        {
            const json & c = j["control"];
            check_keys(c, "control",
                       {"filter_modes", "cg_tol", "max_iter", "tikhonov", "allow_short_time"});
            cfg.filter_modes = get_int(c, "control", "filter_modes", cfg.filter_modes);
            cfg.cg_tol = get_number(c, "control", "cg_tol", cfg.cg_tol);
            cfg.max_iter = get_int(c, "control", "max_iter", cfg.max_iter);
            cfg.tikhonov = get_number(c, "control", "tikhonov", cfg.tikhonov);
            if (c.contains("allow_short_time"))
            {
                if (!c["allow_short_time"].is_boolean())
                {
                    fail("control.allow_short_time", "expected a boolean");
                }
                cfg.allow_short_time = c["allow_short_time"].get<bool>();
            }
            if (cfg.filter_modes < 1) fail("control.filter_modes", "must be >= 1");
            if (!(cfg.cg_tol > 0.0)) fail("control.cg_tol", "must be positive");
            if (cfg.max_iter < 1) fail("control.max_iter", "must be >= 1");
            if (cfg.tikhonov < 0.0) fail("control.tikhonov", "must be >= 0");
        }

        cfg.out_dir = get_string(j, "config", "out", cfg.out_dir);

        if (j.contains("seed"))
        {
            if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            {
                fail("config.seed", "expected an unsigned integer");
            }
            cfg.seed = j["seed"].get<std::uint64_t>();
        }

        if (j.contains("sweep"))
        {
            const json & s = j["sweep"];
            check_keys(s, "sweep", {"K", "T", "workers"});
            if (!s.contains("K") || !s.contains("T"))
            {
                fail("sweep", "needs arrays \"K\" and \"T\"");
            }
            cfg.sweep_K = get_number_list(s, "sweep", "K");
            cfg.sweep_T = get_number_list(s, "sweep", "T");
            cfg.sweep_workers = get_int(s, "sweep", "workers", 1);
            if (cfg.sweep_workers < 1) fail("sweep.workers", "must be >= 1");
            for (double k : *cfg.sweep_K)
            {
                if (!(k > 0.0 && k < 2.0)) fail("sweep.K", "entries must lie in (0,2)");
            }
            for (double t : *cfg.sweep_T)
            {
                if (!(t > 0.0)) fail("sweep.T", "entries must be positive");
            }
        }
        return cfg;
    }

    ExperimentConfig load_config(const std::string & path)
    {
        std::ifstream in(path);
        if (!in)
        {
            throw Error(ErrorCode::ConfigError, "cannot open config file " + path);
        }
        json j;
        try
        {
            j = json::parse(in);
        }
        catch (const json::parse_error & e)
        {
            throw Error(ErrorCode::ConfigError, std::string("malformed JSON: ") + e.what());
        }
        return parse_config_json(j);
    }

    TimeGrid snap_time(double T, double dt_requested)
    {
        if (!(T > 0.0) || !(dt_requested > 0.0))
        {
            throw Error(ErrorCode::ConfigError, "T and dt must be positive");
        }
        TimeGrid tg;
        tg.T = T;
        tg.steps = std::max(1, int(std::ceil(T / dt_requested - 1e-9)));
        tg.dt = T / tg.steps;
        return tg;
    }

    TimeGrid resolve_time(const ExperimentConfig & cfg, double T0)
    {
        const double T = cfg.time_auto ? 2.0 * T0 : cfg.T;
        const double dt = cfg.dt_specified ? cfg.dt : std::min(1e-3, T / 1000.0);
        return snap_time(T, dt);
    }

    namespace
    {
        double interp(const std::vector<double> & xs, const std::vector<double> & ys, double x)
        {
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            if (it == xs.begin()) return ys.front();
            if (it == xs.end()) return ys.back();
            const std::size_t i = std::size_t(it - xs.begin());
            const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            return ys[i - 1] + t * (ys[i] - ys[i - 1]);
        }
    } // namespace

    DegeneracyProfile make_profile(const ProfileSpec & spec)
    {
        if (spec.type == "power")
        {
            return make_power_profile(spec.alpha, spec.scale);
        }
        auto xs = spec.xs;
        auto as = spec.as;
        auto aps = spec.a_primes;
        return DegeneracyProfile::custom(
            [xs, as](double x) { return interp(xs, as, x); },
            [xs, aps](double x) { return interp(xs, aps, x); });
    }

    std::vector<double> make_shape(const std::string & spec, const BeamOperator & op,
                                   const Grid & grid)
    {
        const int N = grid.n_cells;
        std::vector<double> u(N + 1, 0.0);
        if (spec == "zero")
        {
            return u;
        }
        if (spec == "bump")
        {
            for (int i = 0; i <= N; ++i)
            {
                const double x = grid.nodes[i];
                u[i] = x * x * (1.0 - x) * (1.0 - x);
            }
            return u;
        }
        if (spec.rfind("mode:", 0) == 0)
        {
            int k = 0;
            try
            {
                k = std::stoi(spec.substr(5));
            }
            catch (...)
            {
                throw Error(ErrorCode::ConfigError, "bad mode index in \"" + spec + "\"");
            }
            if (k < 1)
            {
                throw Error(ErrorCode::ConfigError, "mode index must be >= 1");
            }
            const ModalBasis modes = compute_modes(op, grid, k);
            return dof_to_full(modes.shapes[k - 1], grid);
        }
        if (spec.rfind("random:", 0) == 0)
        {
            std::uint64_t s = 0;
            try
            {
                s = std::stoull(spec.substr(7));
            }
            catch (...)
            {
                throw Error(ErrorCode::ConfigError, "bad seed in \"" + spec + "\"");
            }
            const int count = 8;
            const ModalBasis modes = compute_modes(op, grid, count);
            std::mt19937_64 rng(s);
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::vector<double> dof(op.dim(), 0.0);
            for (int k = 0; k < count; ++k)
            {
                const double c = gauss(rng);
                for (std::size_t i = 0; i < dof.size(); ++i)
                {
                    dof[i] += c * modes.shapes[k][i];
                }
            }
            return dof_to_full(dof, grid);
        }
        throw Error(ErrorCode::ConfigError,
                    "unknown shape \"" + spec + "\" (use zero, bump, mode:k, random:seed)");
    }

    BeamState make_initial_state(const ExperimentConfig & cfg, const BeamOperator & op,
                                 const Grid & grid)
    {
        BeamState s;
        s.y = make_shape(cfg.initial_y, op, grid);
        s.v = make_shape(cfg.initial_v, op, grid);
        s.t = 0.0;
        return s;
    }

    nlohmann::ordered_json echo_config(const ExperimentConfig & cfg, const TimeGrid & time)
    {
        nlohmann::ordered_json j;
        if (cfg.profile.type == "power")
        {
            j["profile"] = {{"type", "power"}, {"alpha", cfg.profile.alpha},
                            {"scale", cfg.profile.scale}};
        }
        else
        {
            j["profile"] = {{"type", "custom"}, {"x", cfg.profile.xs}, {"a", cfg.profile.as},
                            {"a_prime", cfg.profile.a_primes}};
        }
        j["grid"] = {{"n", cfg.grid_n}};
        j["time"] = {{"T", time.T}, {"dt", time.dt}};
        if (!cfg.snapshots.empty())
        {
            j["time"]["snapshots"] = cfg.snapshots;
        }
        j["initial"] = {{"y", cfg.initial_y}, {"v", cfg.initial_v}};
        j["observability"] = {{"samples", cfg.obs_samples}, {"mode_count", cfg.obs_mode_count}};
        j["control"] = {{"filter_modes", cfg.filter_modes}, {"cg_tol", cfg.cg_tol},
                        {"max_iter", cfg.max_iter}, {"tikhonov", cfg.tikhonov}};
        if (cfg.allow_short_time)
        {
            j["control"]["allow_short_time"] = true;
        }
        j["out"] = cfg.out_dir;
        j["seed"] = cfg.seed;
        if (cfg.sweep_K && cfg.sweep_T)
        {
            j["sweep"] = {{"K", *cfg.sweep_K}, {"T", *cfg.sweep_T},
                          {"workers", cfg.sweep_workers}};
        }
        return j;
    }
} // namespace degenbeam
