#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "core.hpp"

namespace cohortsel {

// Per-run report table. One row per stage plus a summary row per run, columns
//   algorithm,seed,total_cost,objective_true,objective_empirical,stage,stage_cost,stage_pulls
// Stage rows carry their 1-based index; the summary row says "summary" and
// repeats the run totals. objective_true renders empty when unknown.
// Identical (config, seeds) render byte-identically.
std::string render_runs_csv(const std::vector<RunReport>& runs);

// JSON mirror: array of run objects with per-stage traces; full_trace adds
// pull logs, decision logs, and survivor sets.
std::string render_runs_json(const std::vector<RunReport>& runs, bool full_trace);

// Inverse of render_runs_json for round-trip tooling. Logs absent from the
// document come back empty.
std::vector<RunReport> parse_runs_json(const std::string& text);

// Render fully, then write in one shot; failures leave no partial file.
void write_text_file(const std::string& path, const std::string& text);

struct Aggregate {
  std::string algorithm;
  int trials = 0;
  double cost_mean = 0.0, cost_sd = 0.0;
  double objective_mean = 0.0, objective_sd = 0.0;  // true-utility objective when known
};

Aggregate aggregate_runs(const std::string& algorithm, const std::vector<RunReport>& runs);

// Comparison table, one aggregate row per algorithm:
//   algorithm,trials,cost_mean,cost_sd,objective_mean,objective_sd
std::string render_aggregates_csv(const std::vector<Aggregate>& rows);
std::string render_aggregates_json(const std::vector<Aggregate>& rows);

}  // namespace cohortsel
