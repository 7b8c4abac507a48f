#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cohortsel {

// Arms are dense indices in [0, n).
using ArmId = int;

// A cohort is a set of arms, stored sorted ascending without duplicates.
using Cohort = std::vector<ArmId>;

bool cohort_contains(const Cohort& m, ArmId a);

struct ArmRecord {
  ArmId id = 0;
  std::optional<int> group;     // partition index for the diversity objective
  std::optional<double> truth;  // true utility, when the instance knows it
};

// One selection stage. s is the information gain of a pull, j its cost;
// a gain-s pull is worth s unit observations and invariantly s >= j >= 1.
// survivors (K_i) drives elimination-style runs, decisions (Ktilde_i) and
// budget (Tbar_i) drive budgeted accept/reject runs; unused fields stay -1.
struct StageSpec {
  double s = 1.0;
  double j = 1.0;
  int survivors = -1;
  int decisions = -1;
  double budget = -1.0;
};

// Sufficient statistics for one arm. A gain-s pull contributes weight s to the
// running mean, so info (T(a)) counts unit-observation equivalents; both
// accumulate across stages without reset.
struct ArmStats {
  double weighted_sum = 0.0;
  double info = 0.0;
  long pulls = 0;
  double cost_incurred = 0.0;
};

void record_pull(ArmStats& st, double reward, double s, double j);

// Weighted empirical mean. Throws std::logic_error if the arm was never pulled.
double empirical_mean(const ArmStats& st);

// Full empirical utility vector; arms with no observations default to 0,
// the pessimal convention oracles rely on when an algorithm can leave arms
// unpulled (random baseline, hard-truncated schedules).
std::vector<double> empirical_utilities(const std::vector<ArmStats>& stats);

enum class RunStatus { ok, round_cap_hit, infeasible };

struct StageTrace {
  int stage = 0;  // 1-based
  long pulls = 0;
  double cost = 0.0;
  Cohort survivors;  // active set after the stage (elimination-style runs)
  int accepts = 0;
  int rejects = 0;

  bool operator==(const StageTrace&) const = default;
};

// Accept/reject event; pull_index is the number of pulls issued before it,
// so "never pulled after decision" is checkable from the logs alone.
struct DecisionRecord {
  ArmId arm = 0;
  bool accepted = false;
  long pull_index = 0;

  bool operator==(const DecisionRecord&) const = default;
};

struct RunReport {
  std::string algorithm;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::ok;
  std::string note;
  std::vector<StageTrace> per_stage;
  double total_cost = 0.0;
  Cohort cohort;
  double objective_true = 0.0;  // NaN when the instance has no ground truth
  double objective_empirical = 0.0;
  std::vector<ArmId> pull_log;
  std::vector<DecisionRecord> decisions;

  // True-utility objective when available, empirical otherwise.
  double objective_value() const;

  bool operator==(const RunReport&) const = default;
};

}  // namespace cohortsel
