#include "degenbeam/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "degenbeam/hum.hpp"

namespace degenbeam
{
    namespace fs = std::filesystem;
    using nlohmann::ordered_json;

    Command parse_command(const std::string & name)
    {
        if (name == "classify") return Command::Classify;
        if (name == "simulate") return Command::Simulate;
        if (name == "identities") return Command::Identities;
        if (name == "observe") return Command::Observe;
        if (name == "control") return Command::Control;
        if (name == "sweep") return Command::Sweep;
        throw Error(ErrorCode::ConfigError, "unknown command \"" + name + "\"");
    }

    const char * command_name(Command cmd)
    {
        switch (cmd)
        {
            case Command::Classify: return "classify";
            case Command::Simulate: return "simulate";
            case Command::Identities: return "identities";
            case Command::Observe: return "observe";
            case Command::Control: return "control";
            case Command::Sweep: return "sweep";
        }
        return "?";
    }

    std::string format_csv_number(double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

    namespace
    {
        constexpr const char * crlf = "\r\n";   // RFC 4180 line endings

        void write_text(const fs::path & path, const std::string & text)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
            {
                throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
            }
            out << text;
        }

        void write_json(const fs::path & path, const ordered_json & j)
        {
            write_text(path, j.dump(2) + "\n");
        }

        struct CsvWriter
        {
            std::string body;

            void row(const std::vector<std::string> & cells)
            {
                for (std::size_t i = 0; i < cells.size(); ++i)
                {
                    if (i) body += ',';
                    body += cells[i];
                }
                body += crlf;
            }

            void numbers(const std::vector<double> & cells)
            {
                std::vector<std::string> text;
                text.reserve(cells.size());
                for (double v : cells) text.push_back(format_csv_number(v));
                row(text);
            }
        };

        struct Stopwatch
        {
            std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

            double ms() const
            {
                return std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                    .count();
            }
        };

        ordered_json class_json(const DegeneracyClass & cls)
        {
            return {{"K", cls.K}, {"regime", regime_name(cls.regime)}, {"a_at_1", cls.a_at_1}};
        }

        ordered_json identity_json(const IdentityReport & r)
        {
            return {{"which", r.which == IdentityKind::First ? "first" : "second"},
                    {"lhs", r.lhs},
                    {"rhs", r.rhs},
                    {"relative_residual", r.relative_residual}};
        }

        ordered_json observability_json(const ObservabilityReport & r)
        {
            return {{"T", r.T},
                    {"samples", r.samples},
                    {"quotient_min", r.quotient_min},
                    {"quotient_max", r.quotient_max},
                    {"lower_bound", r.lower_bound},
                    {"upper_bound", r.upper_bound},
                    {"C_T_estimate", r.C_T_estimate},
                    {"c_T", r.C_T_estimate > 0.0 ? 1.0 / r.C_T_estimate
                                                 : std::numeric_limits<double>::quiet_NaN()}};
        }

        struct SweepCell
        {
            double K = 0.0;
            double T = 0.0;
            double T0 = 0.0;
            double lower = 0.0;
            double upper = 0.0;
            double estimate = std::numeric_limits<double>::quiet_NaN();
            double cost = std::numeric_limits<double>::quiet_NaN();
            std::string note;
        };

        SweepCell run_sweep_cell(const ExperimentConfig & cfg, double K, double T,
                                 const fs::path & cell_dir)
        {
            SweepCell cell;
            cell.K = K;
            cell.T = T;
            try
            {
                const DegeneracyProfile profile = make_power_profile(K, cfg.profile.scale);
                const DegeneracyClass cls = classify(profile);
                cell.T0 = observability_time(cls);
                std::tie(cell.lower, cell.upper) = observability_bounds(cls, T);

                const Grid grid = build_grid(cfg.grid_n);
                const BeamOperator op = assemble_beam_operator(profile, grid);
                const TimeGrid tg = snap_time(T, cfg.dt);
                const ObservabilityReport report = estimate_CT(
                    profile, op, grid, tg.T, tg.dt, cfg.obs_mode_count, cfg.obs_samples, cfg.seed);
                cell.estimate = report.C_T_estimate;
                cell.cost = (T > cell.T0 && report.C_T_estimate > 0.0)
                                ? 1.0 / report.C_T_estimate
                                : std::numeric_limits<double>::quiet_NaN();

                fs::create_directories(cell_dir);
                write_json(cell_dir / "observability.json", observability_json(report));
            }
            catch (const std::exception & e)
            {
                cell.note = e.what();
            }
            return cell;
        }
    } // namespace

    ordered_json run_command(Command cmd, const ExperimentConfig & cfg)
    {
        Stopwatch watch;
        const fs::path out_dir(cfg.out_dir);
        fs::create_directories(out_dir);

        const DegeneracyProfile profile = make_profile(cfg.profile);
        const DegeneracyClass cls = classify(profile);
        const double T0 = observability_time(cls);
        const TimeGrid time = resolve_time(cfg, T0);

        ordered_json report;
        report["command"] = command_name(cmd);
        report["config"] = echo_config(cfg, time);
        report["degeneracy"] = class_json(cls);
        report["T0"] = T0;
        ordered_json outputs = ordered_json::object();

        const Grid grid = build_grid(cfg.grid_n);

        switch (cmd)
        {
            case Command::Classify:
            {
                break;
            }
            case Command::Simulate:
            {
                const BeamOperator op = assemble_beam_operator(profile, grid);
                const WeightedQuadrature quad = make_weighted_quadrature(profile, grid);
                const BeamState initial = make_initial_state(cfg, op, grid);

                std::vector<int> snapshot_steps;
                for (double t : cfg.snapshots)
                {
                    const int k = int(std::round(t / time.dt));
                    if (k < 0 || k > time.steps)
                    {
                        throw Error(ErrorCode::ConfigError,
                                    "snapshot time " + std::to_string(t) + " outside [0,T]");
                    }
                    snapshot_steps.push_back(k);
                }

                CsvWriter csv;
                csv.row({"t", "energy", "trace_yxx_1"});
                ordered_json snaps = ordered_json::array();
                std::vector<double> y = full_to_dof(initial.y, grid);
                std::vector<double> v = full_to_dof(initial.v, grid);
                integrate_homogeneous(op, y, v, time.dt, time.steps,
                    [&](int k, const std::vector<double> & yk, const std::vector<double> & vk)
                    {
                        BeamState s;
                        s.y = dof_to_full(yk, grid);
                        s.v = dof_to_full(vk, grid);
                        s.t = k * time.dt;
                        csv.numbers({s.t, energy(s, quad, grid),
                                     trace_y_xx_at_1(s.y, grid, VectorKind::Clamped)});
                        for (std::size_t si = 0; si < snapshot_steps.size(); ++si)
                        {
                            if (snapshot_steps[si] == k)
                            {
                                snaps.push_back({{"t", s.t}, {"y", s.y}, {"v", s.v}});
                            }
                        }
                    });

                write_text(out_dir / "trajectory.csv", csv.body);
                outputs["trajectory_csv"] = (out_dir / "trajectory.csv").string();
                if (!cfg.snapshots.empty())
                {
                    write_json(out_dir / "snapshots.json", snaps);
                    outputs["snapshots_json"] = (out_dir / "snapshots.json").string();
                }
                break;
            }
            case Command::Identities:
            {
                const BeamOperator op = assemble_beam_operator(profile, grid);
                const WeightedQuadrature quad = make_weighted_quadrature(profile, grid);
                const BeamState initial = make_initial_state(cfg, op, grid);
                const Trajectory traj =
                    solve_homogeneous(initial, time.T, time.dt, op, quad, grid, true);
                const IdentityReport first = identity_residual_first(traj, profile, quad, grid);
                const IdentityReport second = identity_residual_second(traj, profile, quad, grid);

                ordered_json j;
                j["first"] = identity_json(first);
                j["second"] = identity_json(second);
                write_json(out_dir / "identities.json", j);
                outputs["identities_json"] = (out_dir / "identities.json").string();
                report["identities"] = j;
                break;
            }
            case Command::Observe:
            {
                const BeamOperator op = assemble_beam_operator(profile, grid);
                const ObservabilityReport obs =
                    estimate_CT(profile, op, grid, time.T, time.dt, cfg.obs_mode_count,
                                cfg.obs_samples, cfg.seed);

                write_json(out_dir / "observability.json", observability_json(obs));
                outputs["observability_json"] = (out_dir / "observability.json").string();

                CsvWriter csv;
                csv.row({"sample", "quotient"});
                for (std::size_t i = 0; i < obs.sample_quotients.size(); ++i)
                {
                    csv.row({std::to_string(i), format_csv_number(obs.sample_quotients[i])});
                }
                write_text(out_dir / "quotients.csv", csv.body);
                outputs["quotients_csv"] = (out_dir / "quotients.csv").string();
                report["observability"] = observability_json(obs);
                break;
            }
            case Command::Control:
            {
                const BeamOperator op = assemble_beam_operator(profile, grid);
                const WeightedQuadrature quad = make_weighted_quadrature(profile, grid);

                ControlProblem problem;
                problem.u0 = make_shape(cfg.initial_y, op, grid);
                problem.u1 = make_shape(cfg.initial_v, op, grid);
                problem.T = time.T;
                problem.dt = time.dt;
                problem.filter_modes = cfg.filter_modes;
                problem.cg_tol = cfg.cg_tol;
                problem.max_iter = cfg.max_iter;
                problem.tikhonov = cfg.tikhonov;
                problem.allow_short_time = cfg.allow_short_time;

                auto summary_json = [](const HUMSolution & sol, bool converged)
                {
                    return ordered_json{{"converged", converged},
                                        {"iterations", sol.iterations},
                                        {"cg_residual", sol.cg_residual},
                                        {"control_cost", sol.control_cost},
                                        {"terminal_state_norm", sol.terminal_state_norm},
                                        {"terminal_velocity_norm", sol.terminal_velocity_norm},
                                        {"terminal_energy", sol.terminal_energy},
                                        {"initial_energy", sol.initial_energy},
                                        {"uncontrolled_terminal_energy",
                                         sol.uncontrolled_terminal_energy},
                                        {"energy_reduction", sol.energy_reduction},
                                        {"short_time_warning", sol.short_time_warning}};
                };
                auto write_control_csv = [&](const HUMSolution & sol)
                {
                    CsvWriter csv;
                    csv.row({"t", "f"});
                    for (std::size_t k = 0; k < sol.control.samples.size(); ++k)
                    {
                        csv.numbers({double(k) * sol.control.dt, sol.control.samples[k]});
                    }
                    write_text(out_dir / "control.csv", csv.body);
                };

                try
                {
                    const HUMSolution sol = synthesize_control(profile, op, quad, grid, problem);
                    write_json(out_dir / "control_summary.json", summary_json(sol, true));
                    write_control_csv(sol);
                }
                catch (const ControlSynthesisError & e)
                {
                    write_json(out_dir / "control_summary.json",
                               summary_json(e.best_iterate, false));
                    write_control_csv(e.best_iterate);
                    throw;
                }
                outputs["control_summary_json"] = (out_dir / "control_summary.json").string();
                outputs["control_csv"] = (out_dir / "control.csv").string();
                break;
            }
            case Command::Sweep:
            {
                if (!cfg.sweep_K || !cfg.sweep_T)
                {
                    throw Error(ErrorCode::ConfigError, "sweep command needs a \"sweep\" block");
                }
                struct Job
                {
                    double K, T;
                    fs::path dir;
                };
                std::vector<Job> jobs;
                for (double K : *cfg.sweep_K)
                {
                    for (double T : *cfg.sweep_T)
                    {
                        char name[64];
                        std::snprintf(name, sizeof(name), "cell_K%g_T%g", K, T);
                        jobs.push_back({K, T, out_dir / name});
                    }
                }

                std::vector<SweepCell> cells(jobs.size());
                std::atomic<std::size_t> next{0};
                const int workers = std::min<int>(cfg.sweep_workers, int(jobs.size()));
                auto worker = [&]
                {
                    for (std::size_t i = next.fetch_add(1); i < jobs.size();
                         i = next.fetch_add(1))
                    {
                        cells[i] = run_sweep_cell(cfg, jobs[i].K, jobs[i].T, jobs[i].dir);
                    }
                };
                if (workers <= 1)
                {
                    worker();
                }
                else
                {
                    std::vector<std::thread> pool;
                    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
                    for (auto & t : pool) t.join();
                }

                CsvWriter csv;
                csv.row({"K", "T", "T0", "lower_bound", "upper_bound", "C_T_estimate", "c_T"});
                ordered_json notes = ordered_json::array();
                for (const SweepCell & c : cells)
                {
                    csv.numbers({c.K, c.T, c.T0, c.lower, c.upper, c.estimate, c.cost});
                    if (!c.note.empty())
                    {
                        notes.push_back({{"K", c.K}, {"T", c.T}, {"note", c.note}});
                    }
                }
                write_text(out_dir / "sweep.csv", csv.body);
                outputs["sweep_csv"] = (out_dir / "sweep.csv").string();
                if (!notes.empty())
                {
                    report["cell_failures"] = notes;
                }
                break;
            }
        }

        report["outputs"] = outputs;
        report["wall_clock_ms"] = watch.ms();
        write_json(out_dir / "run_report.json", report);
        return report;
    }
} // namespace degenbeam
