#pragma once

#include <string>

#include "philab/config.hpp"
#include "philab/experiments.hpp"

namespace philab {

/// Runs the computation behind a subcommand. No files are written.
ExperimentResult run_experiment(const RunConfig& cfg);

/// One-line human summary of a finished run.
std::string summary_line(const ExperimentResult& result);

/// 0 pass, 2 numerical-quality warning, 3 failed self-test.
int exit_status(const ExperimentResult& result);

/// Entry point of the philab binary; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace philab
