// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#ifndef DBOOST_CLI_HPP_
#define DBOOST_CLI_HPP_

#include <string>
#include <vector>

#include "dboost/experiments.hpp"
#include "dboost/qcp.hpp"

namespace dboost::cli {

// Fully-resolved configuration of a `run` invocation. Round-trips through
// the JSON config-file format ("format": "dboost-config", version 1), which
// is also what run() writes to manifest.json.
struct RunConfig {
  ExperimentSpec spec;
  SolverSettings solver;
  std::string out_dir = "results";
  bool plot = false;
  int jobs = 1;
  bool allow_any_tau = false;
};

// Parses a full argv for the `run` subcommand, merging `--config FILE`
// values underneath explicitly-passed flags. Throws std::invalid_argument
// (message includes a usage synopsis) on unknown flags or invalid values;
// tau outside {0, 0.5, 1} is rejected unless --allow-any-tau is passed.
RunConfig parse_args(int argc, const char* const* argv);
RunConfig parse_args(const std::vector<std::string>& args);

// Executes the configured trials (parallel across trials with --jobs),
// then writes results.csv, manifest.json, optional plots, and - for the
// two-asset scenario - the per-stage loss trace and prediction-curve CSVs.
// Returns 0 on full success, 2 when any method failed.
int run(const RunConfig& config);

// One grouped box plot (self-contained SVG) of test excess cost per method.
// Returns the paths written.
std::vector<std::string> emit_plots(const std::vector<TrialResult>& results,
                                    const ExperimentSpec& spec,
                                    const std::string& out_dir);

// Entry point: dispatches the run / check / solve subcommands, prints usage
// on errors, and returns the process exit code.
int main(int argc, char** argv);

}  // namespace dboost::cli

#endif  // DBOOST_CLI_HPP_
