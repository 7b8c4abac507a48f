#pragma once

#include <vector>

#include "core.hpp"
#include "objectives.hpp"
#include "rewards.hpp"
#include "rng.hpp"

namespace cohortsel {

// Which arm count enters the confidence radius log term: the arms still
// active at stage entry (default, matches the cost bound's K_{i-1}) or the
// full arm count.
enum class RadiusPopulation { stage_active, all_arms };

struct CacoConfig {
  double delta = 0.1;    // in (0, 1)
  double epsilon = 0.1;  // in (0, 1); stage stop threshold
  double sigma = 1.0;    // reward noise scale at gain 1
  std::vector<StageSpec> stages;  // survivors strictly decreasing, last = cohort size
  long max_rounds_per_stage = 0;  // 0 disables the cap
  RadiusPopulation radius_population = RadiusPopulation::stage_active;
};

// Confidence radius sigma * sqrt(2 ln(4 * active_count * total_cost^3 / delta) / info).
// Requires info > 0 and a log argument above 1 (total_cost >= 1 suffices).
double radius(double sigma, int active_count, double total_cost, double delta, double info);

// Confidence-driven elimination over stages. Each stage pulls every active
// arm once at the stage's (s, j), then repeats: empirical cohort via the
// oracle, pessimistic utilities at one radius, pessimistic cohort, stop when
// the two cohorts' pessimistic values differ by less than epsilon (strict,
// absolute), else pull the widest-radius arm in the symmetric difference
// (ties to the lowest id). Survivors are the stage's empirical cohort.
//
// PAC property: with probability at least 1 - delta the returned cohort is
// epsilon-optimal for the objective.
RunReport run_caco(const CacoConfig& cfg, const Objective& obj,
                   const std::vector<ArmRecord>& records, RewardSource& src, RngStream& rng);

}  // namespace cohortsel
