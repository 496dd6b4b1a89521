#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "degenbeam/runner.hpp"

int main(int argc, char ** argv)
{
    CLI::App app{"degenbeam - degenerate beam observability and boundary control laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool has_seed = false;

    const std::pair<const char *, const char *> commands[] = {
        {"classify", "classify the degeneracy profile and report K, regime, T0"},
        {"simulate", "integrate the homogeneous problem; emit t/energy/trace CSV"},
        {"identities", "verify both boundary-trace identities on one trajectory"},
        {"observe", "estimate the observability constant on a low-mode subspace"},
        {"control", "synthesize the HUM null control and verify the terminal state"},
        {"sweep", "map (K, T) to C_T estimates; emit a CSV matrix"},
    };
    for (const auto & [name, desc] : commands)
    {
        CLI::App * sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "path to the experiment config JSON")
            ->required();
        sub->add_option("--out", out_override, "override the output directory");
        sub->add_option("--seed", seed_override, "override the RNG seed")
            ->each([&](const std::string &) { has_seed = true; });
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        degenbeam::ExperimentConfig cfg = degenbeam::load_config(config_path);
        if (!out_override.empty())
        {
            cfg.out_dir = out_override;
        }
        if (has_seed)
        {
            cfg.seed = seed_override;
        }
        const degenbeam::Command cmd =
            degenbeam::parse_command(app.get_subcommands().front()->get_name());
        degenbeam::run_command(cmd, cfg);
        return 0;
    }
    catch (const degenbeam::Error & e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.kind() == degenbeam::ErrorKind::Validation ? 2 : 3;
    }
    catch (const std::exception & e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
