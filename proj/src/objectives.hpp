#pragma once

#include <optional>
#include <span>
#include <vector>

#include "core.hpp"

namespace cohortsel {

enum class ObjectiveKind { top_k, diversity };

// Cohort objective. top_k scores a cohort by the sum of member utilities.
// diversity partitions arms into num_groups groups and scores
// sum over groups of sqrt(sum of member utilities in the group); the square
// root makes the objective monotone submodular, so the greedy oracle carries
// a (1 - 1/e) guarantee.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::top_k;
  std::vector<int> group;  // per-arm group index, size n; empty for top_k
  int num_groups = 0;

  static Objective topk();
  static Objective diversity(std::vector<int> group, int num_groups);
};

// Strict objective value, for true utilities. Under diversity a negative
// member utility is a domain error (square-root domain).
double evaluate(const Objective& obj, std::span<const double> u, const Cohort& m);

// Estimation-side value: empirical utilities can go negative under noise, so
// diversity clamps each per-group sum at 0 before the square root. All
// maximization paths (oracles, stopping rules, decision gaps) use this form.
double evaluate_empirical(const Objective& obj, std::span<const double> u, const Cohort& m);

// argmax over size-k subsets of arms. Exact for top_k (k largest utilities,
// ties to the lowest arm id); greedy for diversity (largest clamped marginal
// gain per step, ties to the lowest arm id). Throws std::invalid_argument if
// |arms| < k.
Cohort oracle(const Objective& obj, std::span<const double> u, const std::vector<ArmId>& arms,
              int k);

// Constrained argmax over size-k subsets of [0, n) that contain every arm in
// accept and none in reject. Returns nullopt when infeasible
// (|accept| > k or n - |reject| < k). accept and reject must be disjoint.
std::optional<Cohort> constrained_oracle(const Objective& obj, std::span<const double> u,
                                         const Cohort& accept, const Cohort& reject, int k);

// Exhaustive reference maximizer over the same constrained family, restricted
// to the given arm universe. Ties resolve to the lexicographically smallest
// member list. Guarded: refuses instances with more than 1e7 candidate
// subsets. Returns nullopt when the feasible family is empty.
std::optional<Cohort> brute_force_oracle(const Objective& obj, std::span<const double> u,
                                         const std::vector<ArmId>& arms, const Cohort& accept,
                                         const Cohort& reject, int k);

}  // namespace cohortsel
