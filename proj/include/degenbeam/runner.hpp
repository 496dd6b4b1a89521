#ifndef DEGENBEAM_RUNNER_HPP
#define DEGENBEAM_RUNNER_HPP

#include <string>

#include "degenbeam/config.hpp"

namespace degenbeam
{
    enum class Command
    {
        Classify,
        Simulate,
        Identities,
        Observe,
        Control,
        Sweep,
    };

    Command parse_command(const std::string & name);
    const char * command_name(Command cmd);

    /// Executes one experiment pipeline, writing its artifacts plus
    /// run_report.json into cfg.out_dir. Returns the report. Throws Error on
    /// validation or numerical failure (a failed control synthesis still
    /// writes the partial summary before throwing).
    nlohmann::ordered_json run_command(Command cmd, const ExperimentConfig & cfg);

    /// 17-significant-digit CSV cell formatting shared by all writers.
    std::string format_csv_number(double v);
} // namespace degenbeam

#endif
