#include "objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cohortsel {

namespace {

double group_value(double sum, bool clamp) {
  if (clamp && sum < 0.0) return 0.0;
  if (sum < 0.0) throw std::domain_error("diversity objective: negative utility");
  return std::sqrt(sum);
}

double evaluate_impl(const Objective& obj, std::span<const double> u, const Cohort& m,
                     bool clamp) {
  if (obj.kind == ObjectiveKind::top_k) {
    double w = 0.0;
    for (ArmId a : m) w += u[a];
    return w;
  }
  std::vector<double> sums(obj.num_groups, 0.0);
  for (ArmId a : m) {
    if (!clamp && u[a] < 0.0) throw std::domain_error("diversity objective: negative utility");
    sums[obj.group[a]] += u[a];
  }
  double w = 0.0;
  for (double s : sums) w += group_value(s, clamp);
  return w;
}

// Greedy diversity maximizer seeded with the accept set, drawing k - |accept|
// arms from candidates. Marginal gains use the clamped group value so the
// result maximizes the same function evaluate_empirical reports.
Cohort greedy_diversity(const Objective& obj, std::span<const double> u, Cohort seed,
                        const std::vector<ArmId>& candidates, int k) {
  std::vector<double> sums(obj.num_groups, 0.0);
  for (ArmId a : seed) sums[obj.group[a]] += u[a];
  std::vector<bool> taken(u.size(), false);
  for (ArmId a : seed) taken[a] = true;
  Cohort out = std::move(seed);
  while (static_cast<int>(out.size()) < k) {
    ArmId best = -1;
    double best_gain = 0.0;
    for (ArmId a : candidates) {
      if (taken[a]) continue;
      const int g = obj.group[a];
      const double gain = group_value(sums[g] + u[a], true) - group_value(sums[g], true);
      if (best == -1 || gain > best_gain) {
        best = a;
        best_gain = gain;
      }
    }
    if (best == -1) throw std::invalid_argument("oracle: fewer candidates than k");
    taken[best] = true;
    sums[obj.group[best]] += u[best];
    out.push_back(best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// k arms of largest utility among candidates, ties to the lowest id, merged
// with the accept seed.
Cohort topk_select(std::span<const double> u, Cohort seed, std::vector<ArmId> candidates,
                   int k) {
  const int need = k - static_cast<int>(seed.size());
  if (need > static_cast<int>(candidates.size()))
    throw std::invalid_argument("oracle: fewer candidates than k");
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](ArmId a, ArmId b) { return u[a] > u[b]; });
  Cohort out = std::move(seed);
  out.insert(out.end(), candidates.begin(), candidates.begin() + need);
  std::sort(out.begin(), out.end());
  return out;
}

void check_objective(const Objective& obj, std::size_t n) {
  if (obj.kind == ObjectiveKind::diversity) {
    if (obj.group.size() != n) throw std::logic_error("objective: group map does not cover arms");
    for (int g : obj.group) {
      if (g < 0 || g >= obj.num_groups) throw std::logic_error("objective: group index out of range");
    }
  }
}

}  // namespace

Objective Objective::topk() { return Objective{}; }

Objective Objective::diversity(std::vector<int> group, int num_groups) {
  Objective obj;
  obj.kind = ObjectiveKind::diversity;
  obj.group = std::move(group);
  obj.num_groups = num_groups;
  return obj;
}

double evaluate(const Objective& obj, std::span<const double> u, const Cohort& m) {
  return evaluate_impl(obj, u, m, false);
}

double evaluate_empirical(const Objective& obj, std::span<const double> u, const Cohort& m) {
  return evaluate_impl(obj, u, m, true);
}

Cohort oracle(const Objective& obj, std::span<const double> u, const std::vector<ArmId>& arms,
              int k) {
  check_objective(obj, u.size());
  if (k < 0 || static_cast<int>(arms.size()) < k)
    throw std::invalid_argument("oracle: fewer candidates than k");
  std::vector<ArmId> candidates = arms;  // id order fixes tie-breaks for any caller order
  std::sort(candidates.begin(), candidates.end());
  if (obj.kind == ObjectiveKind::top_k) return topk_select(u, {}, std::move(candidates), k);
  return greedy_diversity(obj, u, {}, candidates, k);
}

std::optional<Cohort> constrained_oracle(const Objective& obj, std::span<const double> u,
                                         const Cohort& accept, const Cohort& reject, int k) {
  check_objective(obj, u.size());
  const int n = static_cast<int>(u.size());
  if (static_cast<int>(accept.size()) > k) return std::nullopt;
  if (n - static_cast<int>(reject.size()) < k) return std::nullopt;
  std::vector<ArmId> candidates;
  candidates.reserve(u.size());
  for (ArmId a = 0; a < n; ++a) {
    if (!cohort_contains(accept, a) && !cohort_contains(reject, a)) candidates.push_back(a);
  }
  if (obj.kind == ObjectiveKind::top_k) return topk_select(u, accept, std::move(candidates), k);
  return greedy_diversity(obj, u, accept, candidates, k);
}

std::optional<Cohort> brute_force_oracle(const Objective& obj, std::span<const double> u,
                                         const std::vector<ArmId>& arms, const Cohort& accept,
                                         const Cohort& reject, int k) {
  check_objective(obj, u.size());
  std::vector<ArmId> free_arms;
  for (ArmId a : arms) {
    if (!cohort_contains(accept, a) && !cohort_contains(reject, a)) free_arms.push_back(a);
  }
  std::sort(free_arms.begin(), free_arms.end());
  const int need = k - static_cast<int>(accept.size());
  if (need < 0 || need > static_cast<int>(free_arms.size())) return std::nullopt;

  double combos = 1.0;  // C(|free|, need), grown multiplicatively
  for (int i = 1; i <= need; ++i)
    combos *= static_cast<double>(free_arms.size() - need + i) / static_cast<double>(i);
  if (combos > 1e7) throw std::runtime_error("brute_force_oracle: candidate family exceeds 1e7");

  std::optional<Cohort> best;
  double best_w = 0.0;
  std::vector<int> idx(need);
  for (int i = 0; i < need; ++i) idx[i] = i;
  const int nf = static_cast<int>(free_arms.size());
  while (true) {
    Cohort m = accept;
    for (int i : idx) m.push_back(free_arms[i]);
    std::sort(m.begin(), m.end());
    const double w = evaluate_empirical(obj, u, m);
    // Lexicographic enumeration order makes > keep the smallest tied list for
    // free-arm choices; the explicit compare covers interleaved accept arms.
    if (!best || w > best_w || (w == best_w && m < *best)) {
      best = std::move(m);
      best_w = w;
    }
    if (need == 0) break;
    int pos = need - 1;
    while (pos >= 0 && idx[pos] == nf - need + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < need; ++i) idx[i] = idx[i - 1] + 1;
  }
  return best;
}

}  // namespace cohortsel
