#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "trickle/cli/experiment.hpp"

namespace trickle::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidationFailure = 1,  // a configured threshold was exceeded
    kExitConfigError = 2,
    kExitNumericalError = 3,
};

struct CommandResult {
    int exit_code = kExitOk;
    std::vector<std::filesystem::path> files;
    std::vector<std::string> summary;  // human-readable, one line each
};

// Output: <name>_counts.csv and <name>_gaps.csv.
CommandResult cmd_simulate(const ExperimentSpec& spec);
// Output: <name>_analytic.csv and <name>_exp_moments.csv.
CommandResult cmd_analytic(const ExperimentSpec& spec);
// Output: <name>_hist.csv and <name>_ks.csv.
CommandResult cmd_compare(const ExperimentSpec& spec);
// Output: <name>_theta.csv and <name>_trend.csv.
CommandResult cmd_multicell(const ExperimentSpec& spec);
// Output: <name>_markov.csv.
CommandResult cmd_markov_validate(const ExperimentSpec& spec);

// Dispatches on spec.mode. Library exceptions propagate.
CommandResult run_command(const ExperimentSpec& spec);

// Full command line handling; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace trickle::cli
