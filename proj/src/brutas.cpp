#include "brutas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "analysis.hpp"

namespace cohortsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const BrutasConfig& cfg, int n) {
  if (cfg.k < 1 || cfg.k > n) throw std::invalid_argument("brutas: k must lie in [1, n]");
  if (cfg.stages.empty()) throw std::invalid_argument("brutas: at least one stage required");
  long decided = 0;
  for (const StageSpec& st : cfg.stages) {
    if (st.s < 1.0 || st.j < 1.0 || st.s < st.j)
      throw std::invalid_argument("brutas: stages require s >= j >= 1");
    if (st.decisions < 0) throw std::invalid_argument("brutas: stages need decision counts");
    const long active = n - decided;
    if (st.decisions > active)
      throw std::invalid_argument("brutas: stage decides more arms than remain");
    if (st.decisions > 0 && st.budget / st.j <= static_cast<double>(active))
      throw std::invalid_argument(
          "brutas: stage budget must afford more than one pull per active arm");
    decided += st.decisions;
  }
  if (decided != n) throw std::invalid_argument("brutas: stage decisions must sum to n");
}

}  // namespace

long pull_schedule(ScheduleVariant variant, double stage_budget, double j, int active,
                   int decisions, int phase) {
  if (active < 1 || decisions < 1 || phase < 1 || phase > decisions)
    throw std::invalid_argument("pull_schedule: phase out of range");
  if (stage_budget / j <= static_cast<double>(active))
    throw std::invalid_argument("pull_schedule: stage infeasible, budget too small");
  double value = 0.0;
  if (variant == ScheduleVariant::csar_consistent) {
    value = (stage_budget / j - active) / (tlog(active) * (active - phase + 1));
  } else {
    value = (stage_budget - active) / (tlog(active) * j * (decisions - phase + 1));
  }
  return static_cast<long>(std::ceil(value));
}

RunReport run_brutas(const BrutasConfig& cfg, const Objective& obj,
                     const std::vector<ArmRecord>& records, RewardSource& src, RngStream& rng) {
  const int n = static_cast<int>(records.size());
  validate(cfg, n);

  RunReport report;
  report.algorithm = "brutas";

  std::vector<ArmStats> stats(n);
  Cohort accept, reject;
  std::vector<bool> decided(n, false);

  for (std::size_t i = 0; i < cfg.stages.size(); ++i) {
    const StageSpec& st = cfg.stages[i];
    StageTrace trace;
    trace.stage = static_cast<int>(i) + 1;
    const int active = n - static_cast<int>(accept.size() + reject.size());

    long prev_target = 0;
    for (int t = 1; t <= st.decisions; ++t) {
      const long target =
          pull_schedule(cfg.schedule_variant, st.budget, st.j, active, st.decisions, t);
      const long increment = std::max(0L, target - prev_target);
      prev_target = std::max(prev_target, target);

      bool truncated = false;
      for (ArmId a = 0; a < n && !truncated; ++a) {
        if (decided[a]) continue;
        for (long r = 0; r < increment; ++r) {
          if (cfg.schedule_variant == ScheduleVariant::paper_literal &&
              trace.cost + st.j > st.budget + 1e-9) {
            truncated = true;  // the literal schedule can overrun; hard-truncate
            break;
          }
          const double reward = pull(src, a, st.s, rng);
          record_pull(stats[a], reward, st.s, st.j);
          trace.cost += st.j;
          trace.pulls += 1;
          report.pull_log.push_back(a);
        }
      }
      // The consistent schedule keeps this by construction; enforced always.
      if (trace.cost > st.budget + 1e-9) throw std::logic_error("brutas: stage budget exceeded");

      const auto u = empirical_utilities(stats);
      const auto cohort = constrained_oracle(obj, u, accept, reject, cfg.k);
      if (!cohort) {
        report.status = RunStatus::infeasible;
        report.note = "constrained oracle infeasible";
        report.per_stage.push_back(std::move(trace));
        break;
      }
      const double w = evaluate_empirical(obj, u, *cohort);

      // Largest drop when flipped to the other side wins the decision; an
      // infeasible flip means the arm has only one legal side.
      ArmId pick = -1;
      double pick_gap = -kInf;
      bool pick_in = false;
      for (ArmId a = 0; a < n; ++a) {
        if (decided[a]) continue;
        const bool in_cohort = cohort_contains(*cohort, a);
        Cohort acc = accept, rej = reject;
        Cohort& flip_side = in_cohort ? rej : acc;
        flip_side.insert(std::lower_bound(flip_side.begin(), flip_side.end(), a), a);
        const auto flipped = constrained_oracle(obj, u, acc, rej, cfg.k);
        const double gap = flipped ? w - evaluate_empirical(obj, u, *flipped) : kInf;
        if (gap > pick_gap) {
          pick = a;
          pick_gap = gap;
          pick_in = in_cohort;
        }
      }
      if (pick == -1) throw std::logic_error("brutas: no undecided arm to decide");

      decided[pick] = true;
      Cohort& side = pick_in ? accept : reject;
      side.insert(std::lower_bound(side.begin(), side.end(), pick), pick);
      (pick_in ? trace.accepts : trace.rejects) += 1;
      report.decisions.push_back(
          DecisionRecord{pick, pick_in, static_cast<long>(report.pull_log.size())});
    }

    if (report.status == RunStatus::infeasible) break;
    report.per_stage.push_back(std::move(trace));
  }

  for (const StageTrace& trace : report.per_stage) report.total_cost += trace.cost;
  report.cohort = accept;
  if (report.status == RunStatus::ok && static_cast<int>(accept.size()) != cfg.k)
    throw std::logic_error("brutas: accept set is not cohort sized");

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
  return report;
}

}  // namespace cohortsel
