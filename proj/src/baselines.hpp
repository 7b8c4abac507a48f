#pragma once

#include <vector>

#include "core.hpp"
#include "objectives.hpp"
#include "rewards.hpp"
#include "rng.hpp"

namespace cohortsel {

// Non-adaptive stage runners. Each stage spends its budget on pulls at the
// stage's (s, j), never overspending and underspending only when one more
// pull is unaffordable, then keeps the oracle's top `survivors` arms.
struct BaselineConfig {
  std::vector<StageSpec> stages;  // budget and survivors per stage
};

// Round-robin over the active arms in id order.
RunReport run_uniform(const BaselineConfig& cfg, const Objective& obj,
                      const std::vector<ArmRecord>& records, RewardSource& src, RngStream& rng);

// Each pull targets a uniformly random active arm; arms left unpulled enter
// the oracle at utility 0.
RunReport run_random(const BaselineConfig& cfg, const Objective& obj,
                     const std::vector<ArmRecord>& records, RewardSource& src, RngStream& rng);

// Two-speed confidence loop over all arms: the elimination algorithm's
// single-stage round (oracle, pessimistic oracle, widest-radius arm in the
// symmetric difference) with no epsilon stop, issuing weak pulls while
// cumulative cost is below threshold_cost and strong pulls afterwards, until
// one more pull would overspend total_budget. When the two cohorts already
// agree, the widest-radius arm overall is pulled instead.
struct SwapConfig {
  double threshold_cost = 0.0;
  double total_budget = 0.0;
  double weak_s = 1.0, weak_j = 1.0;
  double strong_s = 1.0, strong_j = 1.0;
  int k = 1;
  double sigma = 1.0;  // confidence radius scale
  double delta = 0.05;  // confidence level inside the radius log
};

RunReport run_swap_threshold(const SwapConfig& cfg, const Objective& obj,
                             const std::vector<ArmRecord>& records, RewardSource& src,
                             RngStream& rng);

}  // namespace cohortsel
