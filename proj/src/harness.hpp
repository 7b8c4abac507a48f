#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "core.hpp"
#include "report.hpp"
#include "rewards.hpp"

namespace cohortsel {

enum class Command { simulate, sweep, hardness, bounds, replay };

Command parse_command(const std::string& name);  // ConfigError on unknown names

// Instance described by the config: generated from (instance.seed, stream 1)
// for gaussian specs, loaded from disk for replay specs.
Instance build_instance(const InstanceSpec& spec);

// Objective described by the config against a concrete instance.
Objective build_objective(const ExperimentConfig& cfg, const Instance& inst);

// One seeded trial. The reward source is cloned per trial and the stream is
// keyed by the trial seed alone, so any report row can be reproduced by
// listing its seed.
RunReport run_trial(const ExperimentConfig& cfg, Algo algo, const Instance& inst,
                    std::uint64_t seed);

// All configured algorithms x trials, trial-parallel when jobs > 1; results
// are ordered (algorithm, trial) regardless of scheduling.
std::vector<RunReport> run_simulate(const ExperimentConfig& cfg, const Instance& inst);

struct SweepCell {
  std::string algorithm;
  // Effective parameter tuple of the cell; NaN marks axes without a value
  // (epsilon/delta outside caco, s2 with a single stage, unset k1).
  double epsilon = 0.0, delta = 0.0, sigma = 0.0, s2 = 0.0;
  int k1 = -1;
  Aggregate agg;
};

std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg);
std::string render_sweep_csv(const std::vector<SweepCell>& cells);
std::string render_sweep_json(const std::vector<SweepCell>& cells);

struct CommandResult {
  std::string primary;  // report for output.path / stdout
  std::string summary;  // aggregate table for simulate/replay, empty otherwise
};

// Dispatch a subcommand; writes primary to output.path when set.
CommandResult run_command(const ExperimentConfig& cfg, Command cmd);

}  // namespace cohortsel
