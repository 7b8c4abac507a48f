#pragma once

#include <vector>

#include "core.hpp"
#include "objectives.hpp"
#include "rewards.hpp"
#include "rng.hpp"

namespace cohortsel {

// Cumulative per-arm pull target for phase t of a stage.
//
// csar_consistent (default):
//   ceil((Tbar_i/j_i - n_i) / (tlog(n_i) * (n_i - t + 1)))
// with n_i the arms still undecided at stage entry; the telescoped total never
// exceeds Tbar_i/j_i pulls, so stage budgets hold by construction.
//
// paper_literal:
//   ceil((Tbar_i - n_i) / (tlog(n_i) * j_i * (Ktilde_i - t + 1)))
// taken verbatim; it can overrun, so the runner hard-truncates pulls at the
// stage budget. The two coincide for single-stage unit-cost runs.
enum class ScheduleVariant { csar_consistent, paper_literal };

long pull_schedule(ScheduleVariant variant, double stage_budget, double j, int active,
                   int decisions, int phase);

struct BrutasConfig {
  double sigma = 1.0;             // recorded only; decisions use empirical means
  int k = 1;                      // final cohort size
  std::vector<StageSpec> stages;  // decisions summing to n, budgets Tbar_i
  ScheduleVariant schedule_variant = ScheduleVariant::csar_consistent;
};

// Budgeted accept/reject over stages. Stage i makes Ktilde_i decisions; phase
// t tops every undecided arm up to the scheduled target, recomputes the
// constrained-oracle cohort M, and for each undecided arm the best cohort with
// that arm flipped to the other side; the arm with the largest value drop is
// decided (ties to the lowest id; an infeasible flip forces the decision).
// A phase whose schedule adds no pulls still decides from current estimates.
// Returns status infeasible with a partial trace if the constrained oracle
// ever reports an empty family.
RunReport run_brutas(const BrutasConfig& cfg, const Objective& obj,
                     const std::vector<ArmRecord>& records, RewardSource& src, RngStream& rng);

}  // namespace cohortsel
