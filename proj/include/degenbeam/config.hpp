#ifndef DEGENBEAM_CONFIG_HPP
#define DEGENBEAM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "degenbeam/dynamics.hpp"

namespace degenbeam
{
    struct ProfileSpec
    {
        std::string type = "power";          // "power" or "custom"
        double alpha = 0.5;
        double scale = 1.0;
        std::vector<double> xs, as, a_primes;   // custom table, piecewise linear
    };

    /// Parsed and validated experiment configuration. Unknown keys anywhere in
    /// the file are rejected; "auto2T0" resolves T to twice the minimal
    /// observability time of the profile; dt is snapped to an exact divisor of
    /// T (never enlarged) so the time grid always lands on T.
    struct ExperimentConfig
    {
        ProfileSpec profile;
        int grid_n = 200;

        bool time_auto = true;               // T = 2 * T0
        double T = 0.0;                      // used when !time_auto
        double dt = 1e-3;
        bool dt_specified = false;           // default dt is min(1e-3, T/1000)
        std::vector<double> snapshots;       // simulate: state dump times

        std::string initial_y = "bump";      // zero | bump | mode:k | random:seed
        std::string initial_v = "zero";

        int obs_samples = 100;
        int obs_mode_count = 10;

        int filter_modes = 10;
        double cg_tol = 1e-10;
        int max_iter = 500;
        double tikhonov = 0.0;
        bool allow_short_time = false;

        std::string out_dir = "./runs/out";
        std::uint64_t seed = 12345;

        std::optional<std::vector<double>> sweep_K;
        std::optional<std::vector<double>> sweep_T;
        int sweep_workers = 1;
    };

    ExperimentConfig parse_config_json(const nlohmann::json & j);
    ExperimentConfig load_config(const std::string & path);

    /// Resolved time grid: T (after auto2T0), the snapped dt, and the step count.
    struct TimeGrid
    {
        double T = 0.0;
        double dt = 0.0;
        int steps = 0;
    };

    TimeGrid resolve_time(const ExperimentConfig & cfg, double T0);
    TimeGrid snap_time(double T, double dt_requested);

    DegeneracyProfile make_profile(const ProfileSpec & spec);

    /// Realizes one named initial-data shape on the grid:
    ///   "zero", "bump" (x^2 (1-x)^2), "mode:k" (k-th discrete eigenmode,
    ///   1-based, unit weighted-L2 norm), "random:seed" (combination of the
    ///   lowest 8 eigenmodes with standard normal coefficients drawn from the
    ///   given seed).
    std::vector<double> make_shape(const std::string & spec, const BeamOperator & op,
                                   const Grid & grid);

    BeamState make_initial_state(const ExperimentConfig & cfg, const BeamOperator & op,
                                 const Grid & grid);

    /// Config echo with T/dt/seed resolved; re-running from it reproduces the run.
    nlohmann::ordered_json echo_config(const ExperimentConfig & cfg, const TimeGrid & time);
} // namespace degenbeam

#endif
