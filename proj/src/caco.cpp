#include "caco.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cohortsel {

namespace {

void validate(const CacoConfig& cfg, int n) {
  if (cfg.delta <= 0.0 || cfg.delta >= 1.0)
    throw std::invalid_argument("caco: delta must lie in (0, 1)");
  if (cfg.epsilon <= 0.0 || cfg.epsilon >= 1.0)
    throw std::invalid_argument("caco: epsilon must lie in (0, 1)");
  if (cfg.sigma < 0.0) throw std::invalid_argument("caco: sigma must be nonnegative");
  if (cfg.stages.empty()) throw std::invalid_argument("caco: at least one stage required");
  int prev = n;
  for (const StageSpec& st : cfg.stages) {
    if (st.s < 1.0 || st.j < 1.0 || st.s < st.j)
      throw std::invalid_argument("caco: stages require s >= j >= 1");
    if (st.survivors < 1 || st.survivors >= prev)
      throw std::invalid_argument("caco: survivor counts must decrease strictly from n");
    prev = st.survivors;
  }
}

// Objective value of the final cohort under the full empirical utility vector.
double empirical_objective(const Objective& obj, const std::vector<ArmStats>& stats,
                           const Cohort& cohort) {
  const auto u = empirical_utilities(stats);
  return evaluate_empirical(obj, u, cohort);
}

}  // namespace

double radius(double sigma, int active_count, double total_cost, double delta, double info) {
  if (info <= 0.0) throw std::logic_error("radius: arm has no information");
  if (active_count < 1) throw std::logic_error("radius: active count must be positive");
  const double arg = 4.0 * active_count * total_cost * total_cost * total_cost / delta;
  if (arg <= 1.0) throw std::logic_error("radius: log argument must exceed 1");
  return sigma * std::sqrt(2.0 * std::log(arg) / info);
}

RunReport run_caco(const CacoConfig& cfg, const Objective& obj,
                   const std::vector<ArmRecord>& records, RewardSource& src, RngStream& rng) {
  const int n = static_cast<int>(records.size());
  validate(cfg, n);

  RunReport report;
  report.algorithm = "caco";

  std::vector<ArmStats> stats(n);
  std::vector<ArmId> active(n);
  std::iota(active.begin(), active.end(), 0);
  double cost = 0.0;  // global accumulator; the radius sees it across stages

  auto issue = [&](ArmId a, const StageSpec& st, StageTrace& trace) {
    const double reward = pull(src, a, st.s, rng);
    record_pull(stats[a], reward, st.s, st.j);
    cost += st.j;
    trace.cost += st.j;
    trace.pulls += 1;
    report.pull_log.push_back(a);
  };

  for (std::size_t i = 0; i < cfg.stages.size(); ++i) {
    const StageSpec& st = cfg.stages[i];
    const int k_i = st.survivors;
    const int entering = static_cast<int>(active.size());
    const int rad_count = cfg.radius_population == RadiusPopulation::stage_active ? entering : n;

    StageTrace trace;
    trace.stage = static_cast<int>(i) + 1;
    for (ArmId a : active) issue(a, st, trace);

    std::vector<double> u(n, 0.0), pess(n, 0.0), rad(n, 0.0);
    Cohort chosen;
    long rounds = 0;
    while (true) {
      for (ArmId a : active) u[a] = empirical_mean(stats[a]);
      chosen = oracle(obj, u, active, k_i);

      pess = u;
      for (ArmId a : active) {
        rad[a] = radius(cfg.sigma, rad_count, cost, cfg.delta, stats[a].info);
        pess[a] = cohort_contains(chosen, a) ? u[a] - rad[a] : u[a] + rad[a];
      }
      const Cohort shadow = oracle(obj, pess, active, k_i);
      const double gap = std::abs(evaluate_empirical(obj, pess, shadow) -
                                  evaluate_empirical(obj, pess, chosen));
      if (gap < cfg.epsilon) break;

      if (cfg.max_rounds_per_stage > 0 && rounds >= cfg.max_rounds_per_stage) {
        report.status = RunStatus::round_cap_hit;
        report.note = "round cap hit";
        break;
      }
      ++rounds;

      ArmId widest = -1;
      for (ArmId a : active) {
        const bool in_chosen = cohort_contains(chosen, a);
        if (in_chosen == cohort_contains(shadow, a)) continue;
        if (widest == -1 || rad[a] > rad[widest]) widest = a;
      }
      if (widest == -1) throw std::logic_error("caco: cohorts differ in value but not members");
      issue(widest, st, trace);
    }

    trace.survivors = chosen;
    report.per_stage.push_back(std::move(trace));
    active = chosen;
    if (report.status == RunStatus::round_cap_hit) break;
  }

  report.total_cost = cost;
  report.cohort = active;
  report.objective_empirical = empirical_objective(obj, stats, report.cohort);
  report.objective_true = std::numeric_limits<double>::quiet_NaN();
  if (std::all_of(records.begin(), records.end(),
                  [](const ArmRecord& r) { return r.truth.has_value(); })) {
    std::vector<double> truths;
    truths.reserve(records.size());
    for (const auto& r : records) truths.push_back(*r.truth);
    report.objective_true = evaluate(obj, truths, report.cohort);
  }
  return report;
}

}  // namespace cohortsel
