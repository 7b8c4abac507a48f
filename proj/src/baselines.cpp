#include "baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "caco.hpp"

namespace cohortsel {

namespace {

void validate_stages(const std::vector<StageSpec>& stages, int n) {
  if (stages.empty()) throw std::invalid_argument("baseline: at least one stage required");
  int prev = n;
  for (const StageSpec& st : stages) {
    if (st.s < 1.0 || st.j < 1.0 || st.s < st.j)
      throw std::invalid_argument("baseline: stages require s >= j >= 1");
    if (st.survivors < 1 || st.survivors >= prev)
      throw std::invalid_argument("baseline: survivor counts must decrease strictly from n");
    if (st.budget < st.j * prev)
      throw std::invalid_argument("baseline: stage budget below one pull per active arm");
    prev = st.survivors;
  }
}

void finish_report(RunReport& report, const Objective& obj, const std::vector<ArmStats>& stats,
                   const std::vector<ArmRecord>& records) {
  const auto u = empirical_utilities(stats);
  report.objective_empirical = evaluate_empirical(obj, u, report.cohort);
  report.objective_true = std::numeric_limits<double>::quiet_NaN();
  if (std::all_of(records.begin(), records.end(),
                  [](const ArmRecord& r) { return r.truth.has_value(); })) {
    std::vector<double> truths;
    truths.reserve(records.size());
    for (const auto& r : records) truths.push_back(*r.truth);
    report.objective_true = evaluate(obj, truths, report.cohort);
  }
}

// Shared stage loop; pick chooses the next arm given the active set and the
// index of the pull within the stage.
template <class Pick>
RunReport run_staged(const char* name, const BaselineConfig& cfg, const Objective& obj,
                     const std::vector<ArmRecord>& records, RewardSource& src, RngStream& rng,
                     Pick pick) {
  const int n = static_cast<int>(records.size());
  validate_stages(cfg.stages, n);

  RunReport report;
  report.algorithm = name;
  std::vector<ArmStats> stats(n);
  std::vector<ArmId> active(n);
  std::iota(active.begin(), active.end(), 0);

  for (std::size_t i = 0; i < cfg.stages.size(); ++i) {
    const StageSpec& st = cfg.stages[i];
    StageTrace trace;
    trace.stage = static_cast<int>(i) + 1;
    const long affordable = static_cast<long>(std::floor(st.budget / st.j + 1e-9));
    for (long p = 0; p < affordable; ++p) {
      const ArmId a = pick(active, p);
      const double reward = pull(src, a, st.s, rng);
      record_pull(stats[a], reward, st.s, st.j);
      trace.cost += st.j;
      trace.pulls += 1;
      report.pull_log.push_back(a);
    }
    const auto u = empirical_utilities(stats);
    active = oracle(obj, u, active, st.survivors);
    trace.survivors = active;
    report.total_cost += trace.cost;
    report.per_stage.push_back(std::move(trace));
  }

  report.cohort = active;
  finish_report(report, obj, stats, records);
  return report;
}

}  // namespace

RunReport run_uniform(const BaselineConfig& cfg, const Objective& obj,
                      const std::vector<ArmRecord>& records, RewardSource& src, RngStream& rng) {
  return run_staged("uniform", cfg, obj, records, src, rng,
                    [](const std::vector<ArmId>& active, long p) {
                      return active[static_cast<std::size_t>(p) % active.size()];
                    });
}

RunReport run_random(const BaselineConfig& cfg, const Objective& obj,
                     const std::vector<ArmRecord>& records, RewardSource& src, RngStream& rng) {
  return run_staged("random", cfg, obj, records, src, rng,
                    [&rng](const std::vector<ArmId>& active, long) {
                      return active[rng.uniform_below(active.size())];
                    });
}

RunReport run_swap_threshold(const SwapConfig& cfg, const Objective& obj,
                             const std::vector<ArmRecord>& records, RewardSource& src,
                             RngStream& rng) {
  const int n = static_cast<int>(records.size());
  if (cfg.k < 1 || cfg.k > n) throw std::invalid_argument("swap: k must lie in [1, n]");
  if (cfg.weak_s < 1.0 || cfg.weak_j < 1.0 || cfg.weak_s < cfg.weak_j ||
      cfg.strong_s < 1.0 || cfg.strong_j < 1.0 || cfg.strong_s < cfg.strong_j)
    throw std::invalid_argument("swap: pull shapes require s >= j >= 1");
  if (cfg.threshold_cost < 0.0 || cfg.total_budget <= 0.0)
    throw std::invalid_argument("swap: budgets must be positive");
  if (cfg.delta <= 0.0 || cfg.delta >= 1.0)
    throw std::invalid_argument("swap: delta must lie in (0, 1)");

  RunReport report;
  report.algorithm = "swap";
  std::vector<ArmStats> stats(n);
  std::vector<ArmId> arms(n);
  std::iota(arms.begin(), arms.end(), 0);
  StageTrace trace;
  trace.stage = 1;
  double cost = 0.0;

  // Weak while cost is under the threshold, strong afterwards.
  auto shape = [&]() -> std::pair<double, double> {
    if (cost < cfg.threshold_cost) return {cfg.weak_s, cfg.weak_j};
    return {cfg.strong_s, cfg.strong_j};
  };
  auto issue = [&](ArmId a) {
    const auto [s, j] = shape();
    const double reward = pull(src, a, s, rng);
    record_pull(stats[a], reward, s, j);
    cost += j;
    trace.cost += j;
    trace.pulls += 1;
    report.pull_log.push_back(a);
  };
  auto affordable = [&]() { return cost + shape().second <= cfg.total_budget + 1e-9; };

  for (ArmId a = 0; a < n; ++a) {
    if (!affordable()) throw std::invalid_argument("swap: budget below one pull per arm");
    issue(a);
  }

  std::vector<double> u(n, 0.0), pess(n, 0.0), rad(n, 0.0);
  Cohort chosen;
  while (true) {
    for (ArmId a = 0; a < n; ++a) u[a] = empirical_mean(stats[a]);
    chosen = oracle(obj, u, arms, cfg.k);
    if (!affordable()) break;

    pess = u;
    for (ArmId a = 0; a < n; ++a) {
      rad[a] = radius(cfg.sigma, n, cost, cfg.delta, stats[a].info);
      pess[a] = cohort_contains(chosen, a) ? u[a] - rad[a] : u[a] + rad[a];
    }
    const Cohort shadow = oracle(obj, pess, arms, cfg.k);

    ArmId widest = -1;
    for (ArmId a = 0; a < n; ++a) {
      if (cohort_contains(chosen, a) == cohort_contains(shadow, a)) continue;
      if (widest == -1 || rad[a] > rad[widest]) widest = a;
    }
    if (widest == -1) {
      // Cohorts agree; keep refining the least-known arm.
      for (ArmId a = 0; a < n; ++a) {
        if (widest == -1 || rad[a] > rad[widest]) widest = a;
      }
    }
    issue(widest);
  }

  trace.survivors = chosen;
  report.per_stage.push_back(std::move(trace));
  report.total_cost = cost;
  report.cohort = chosen;
  finish_report(report, obj, stats, records);
  return report;
}

}  // namespace cohortsel
