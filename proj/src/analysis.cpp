#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cohortsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<ArmId> all_arms(std::size_t n) {
  std::vector<ArmId> arms(n);
  std::iota(arms.begin(), arms.end(), 0);
  return arms;
}

// Best value over size-k cohorts that force a in (or out). Exact constrained
// oracle for top_k; exhaustive search otherwise (the greedy oracle is only
// approximate, which would corrupt gaps).
double swap_optimum(const Objective& obj, std::span<const double> u,
                    const std::vector<ArmId>& arms, ArmId a, bool force_in, int k) {
  const Cohort accept = force_in ? Cohort{a} : Cohort{};
  const Cohort reject = force_in ? Cohort{} : Cohort{a};
  std::optional<Cohort> best;
  if (obj.kind == ObjectiveKind::top_k) {
    best = constrained_oracle(obj, u, accept, reject, k);
  } else {
    best = brute_force_oracle(obj, u, arms, accept, reject, k);
  }
  if (!best) return -kInf;
  return evaluate_empirical(obj, u, *best);
}

}  // namespace

double gap_score(const Objective& obj, std::span<const double> u, ArmId a, int k) {
  const int n = static_cast<int>(u.size());
  if (a < 0 || a >= n) throw std::invalid_argument("gap_score: arm out of range");
  if (k < 1 || k > n) throw std::invalid_argument("gap_score: k out of range");
  const auto arms = all_arms(u.size());
  Cohort opt;
  if (obj.kind == ObjectiveKind::top_k) {
    opt = oracle(obj, u, arms, k);
  } else {
    opt = *brute_force_oracle(obj, u, arms, {}, {}, k);
  }
  const double w_opt = evaluate_empirical(obj, u, opt);
  const bool member = cohort_contains(opt, a);
  // Members lose their slot, non-members displace one.
  const double w_swap = swap_optimum(obj, u, arms, a, !member, k);
  if (w_swap == -kInf) return kInf;
  return std::max(0.0, w_opt - w_swap);
}

GapProfile gap_profile(const Objective& obj, std::span<const double> u, int k) {
  GapProfile profile;
  profile.gaps.reserve(u.size());
  for (ArmId a = 0; a < static_cast<int>(u.size()); ++a)
    profile.gaps.push_back(gap_score(obj, u, a, k));
  profile.sorted_gaps = profile.gaps;
  std::sort(profile.sorted_gaps.begin(), profile.sorted_gaps.end());
  profile.hardness = hardness(profile.gaps);
  profile.tilde_hardness = tilde_hardness(profile.gaps);
  profile.degenerate = std::any_of(profile.gaps.begin(), profile.gaps.end(),
                                   [](double g) { return g == 0.0 || g == kInf; });
  return profile;
}

double hardness(const std::vector<double>& gaps) {
  double h = 0.0;
  for (double g : gaps) {
    if (g < 0.0) throw std::invalid_argument("hardness: negative gap");
    if (g == 0.0) return kInf;
    h += 1.0 / (g * g);  // gap == inf contributes 0
  }
  return h;
}

double tilde_hardness(const std::vector<double>& gaps) {
  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  double h = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double g = sorted[i];
    if (g < 0.0) throw std::invalid_argument("tilde_hardness: negative gap");
    if (g == 0.0) return kInf;
    h = std::max(h, static_cast<double>(i + 1) / (g * g));
  }
  return h;
}

double tlog(int n) {
  if (n <= 0) throw std::domain_error("tlog: n must be positive");
  double h = 0.0;
  for (int i = 1; i <= n; ++i) h += 1.0 / i;
  return h;
}

double caco_cost_bound(std::span<const double> u, const std::vector<double>& gaps,
                       const std::vector<StageSpec>& stages, double epsilon, double delta,
                       double sigma) {
  if (u.size() != gaps.size()) throw std::invalid_argument("caco_cost_bound: size mismatch");
  if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("caco_cost_bound: delta in (0,1)");
  if (sigma <= 0.0) throw std::invalid_argument("caco_cost_bound: sigma must be positive");
  if (stages.empty()) throw std::invalid_argument("caco_cost_bound: no stages");

  // Survivor sets under the true utilities: entering stage i+1 means being in
  // the top K_i of the previous active set.
  std::vector<ArmId> active = all_arms(u.size());
  std::stable_sort(active.begin(), active.end(),
                   [&](ArmId a, ArmId b) { return u[a] > u[b]; });

  double total = 0.0;
  for (const StageSpec& st : stages) {
    const int k_i = st.survivors;
    if (k_i < 1 || k_i > static_cast<int>(active.size()))
      throw std::invalid_argument("caco_cost_bound: survivor counts must decrease within n");
    double s_i = 0.0;
    for (ArmId a : active) {
      const double g = gaps[a];
      const double by_gap = (g == 0.0) ? kInf : 4.0 / (g * g);
      const double by_eps = (epsilon > 0.0)
                                ? (static_cast<double>(k_i) * k_i) / (epsilon * epsilon)
                                : kInf;
      const double term = std::min(by_gap, by_eps);
      if (term == kInf)
        throw std::invalid_argument("caco_cost_bound: zero gap requires epsilon > 0");
      s_i += term;
    }
    total += (st.j / st.s) * s_i *
             std::log((4.0 * sigma * sigma * st.j * st.j * st.j * st.j / (st.s * delta)) * s_i);
    active.resize(k_i);
  }
  return 499.0 * sigma * sigma * total;
}

double brutas_error_bound(double tilde_hardness, const std::vector<StageSpec>& stages,
                          double sigma) {
  if (tilde_hardness < 0.0) throw std::invalid_argument("brutas_error_bound: negative hardness");
  long n = 0;
  for (const StageSpec& st : stages) {
    if (st.decisions < 0) throw std::invalid_argument("brutas_error_bound: stages need decisions");
    n += st.decisions;
  }
  if (n <= 0) throw std::invalid_argument("brutas_error_bound: no decisions");
  if (sigma == 0.0) return 0.0;

  double exponent_num = 0.0;
  for (const StageSpec& st : stages) {
    if (st.decisions == 0) continue;  // no decisions, no contribution
    exponent_num += st.s * (st.budget - st.decisions) / (st.j * tlog(st.decisions));
  }
  if (tilde_hardness == std::numeric_limits<double>::infinity())
    return static_cast<double>(n) * static_cast<double>(n);  // vacuous, reported as-is
  return static_cast<double>(n) * static_cast<double>(n) *
         std::exp(-exponent_num / (72.0 * sigma * sigma * tilde_hardness));
}

}  // namespace cohortsel
