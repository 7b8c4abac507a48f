#pragma once

// Independent top-k re-implementations of the two adaptive algorithms, written
// directly from their round/phase descriptions. They share only the reward
// source and RNG with the library so pull-for-pull agreement over many seeds
// checks the production code against a second derivation, not against itself.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "rewards.hpp"
#include "rng.hpp"

namespace refalgo {

struct StageShape {
  double s = 1.0;
  double j = 1.0;
  int survivors = 0;   // confidence-bound eliminator
  int decisions = 0;   // accept/reject scheduler
  double budget = 0.0; // accept/reject scheduler
};

// k largest by value, ties to the lowest id; pool must be sorted ascending.
inline std::vector<int> top_ids(const std::vector<double>& value, const std::vector<int>& pool,
                                int k) {
  std::vector<int> order = pool;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return value[a] > value[b]; });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

inline bool id_in(const std::vector<int>& sorted, int a) {
  return std::binary_search(sorted.begin(), sorted.end(), a);
}

struct RefRun {
  std::vector<int> pull_log;
  std::vector<int> cohort;
  std::vector<std::pair<int, bool>> decisions;  // (arm, accepted)
  double total_cost = 0.0;
  bool capped = false;
};

// Confidence-bound cohort eliminator: pull every active arm once, then repeat
// {best cohort under means; pessimistic shift by radius; shadow cohort; stop
// when the pessimistic values of the two cohorts agree within epsilon, else
// pull the widest-radius arm in their symmetric difference}.
inline RefRun ref_confidence_eliminator(double delta, double epsilon, double sigma,
                                        const std::vector<StageShape>& stages, int n,
                                        bool radius_over_all_arms, long round_cap,
                                        cohortsel::RewardSource& src, cohortsel::RngStream& rng) {
  std::vector<double> wsum(n, 0.0), winfo(n, 0.0);
  RefRun out;
  std::vector<int> active(n);
  std::iota(active.begin(), active.end(), 0);

  for (const StageShape& st : stages) {
    auto grab = [&](int a) {
      const double r = cohortsel::pull(src, a, st.s, rng);
      wsum[a] += st.s * r;
      winfo[a] += st.s;
      out.total_cost += st.j;
      out.pull_log.push_back(a);
    };
    for (int a : active) grab(a);
    const int population = radius_over_all_arms ? n : static_cast<int>(active.size());

    long rounds = 0;
    std::vector<int> best;
    while (true) {
      std::vector<double> m(n, 0.0), pess(n, 0.0), rad(n, 0.0);
      for (int a : active) m[a] = wsum[a] / winfo[a];
      best = top_ids(m, active, st.survivors);
      for (int a : active) {
        rad[a] = sigma * std::sqrt(2.0 *
                                   std::log(4.0 * population * out.total_cost * out.total_cost *
                                            out.total_cost / delta) /
                                   winfo[a]);
        pess[a] = id_in(best, a) ? m[a] - rad[a] : m[a] + rad[a];
      }
      const std::vector<int> shadow = top_ids(pess, active, st.survivors);
      double diff = 0.0;
      for (int a : shadow) diff += pess[a];
      for (int a : best) diff -= pess[a];
      if (std::abs(diff) < epsilon) break;
      if (round_cap > 0 && rounds >= round_cap) {
        out.capped = true;
        break;
      }
      ++rounds;
      int widest = -1;
      for (int a : active) {
        if (id_in(best, a) == id_in(shadow, a)) continue;
        if (widest == -1 || rad[a] > rad[widest]) widest = a;
      }
      grab(widest);
    }
    active = best;
    if (out.capped) break;
  }
  out.cohort = active;
  return out;
}

// Accept/reject scheduler: per stage, phase t tops every undecided arm up to a
// schedule target, then fixes the arm whose flip to the other side costs the
// current empirical cohort the most.
inline RefRun ref_accept_reject_scheduler(int k, const std::vector<StageShape>& stages, int n,
                                          bool consistent_schedule, cohortsel::RewardSource& src,
                                          cohortsel::RngStream& rng) {
  const double kInf = std::numeric_limits<double>::infinity();
  const auto tlog = [](int m) {
    double v = 0.0;
    for (int i = 1; i <= m; ++i) v += 1.0 / static_cast<double>(i);
    return v;
  };

  std::vector<double> wsum(n, 0.0), winfo(n, 0.0);
  std::vector<bool> decided(n, false);
  std::vector<int> accept, reject;
  RefRun out;

  // accept ∪ the best (k - |accept|) free arms; empty when impossible.
  auto constrained_top = [&](const std::vector<double>& u, const std::vector<int>& acc,
                             const std::vector<int>& rej) {
    std::vector<int> pool;
    for (int a = 0; a < n; ++a) {
      if (!id_in(acc, a) && !id_in(rej, a)) pool.push_back(a);
    }
    const int need = k - static_cast<int>(acc.size());
    if (need < 0 || need > static_cast<int>(pool.size())) return std::vector<int>{};
    std::vector<int> chosen = top_ids(u, pool, need);
    chosen.insert(chosen.end(), acc.begin(), acc.end());
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  };

  for (const StageShape& st : stages) {
    const int active = n - static_cast<int>(accept.size() + reject.size());
    double stage_cost = 0.0;
    long prev = 0;
    for (int t = 1; t <= st.decisions; ++t) {
      double sched = 0.0;
      if (consistent_schedule)
        sched = (st.budget / st.j - active) / (tlog(active) * (active - t + 1));
      else
        sched = (st.budget - active) / (tlog(active) * st.j * (st.decisions - t + 1));
      const long target = static_cast<long>(std::ceil(sched));
      const long inc = std::max(0L, target - prev);
      prev = std::max(prev, target);

      bool cut = false;
      for (int a = 0; a < n && !cut; ++a) {
        if (decided[a]) continue;
        for (long r = 0; r < inc; ++r) {
          if (!consistent_schedule && stage_cost + st.j > st.budget + 1e-9) {
            cut = true;
            break;
          }
          const double reward = cohortsel::pull(src, a, st.s, rng);
          wsum[a] += st.s * reward;
          winfo[a] += st.s;
          stage_cost += st.j;
          out.pull_log.push_back(a);
        }
      }

      std::vector<double> u(n, 0.0);
      for (int a = 0; a < n; ++a) {
        if (winfo[a] > 0.0) u[a] = wsum[a] / winfo[a];
      }
      const std::vector<int> cohort = constrained_top(u, accept, reject);
      double w = 0.0;
      for (int a : cohort) w += u[a];

      int pick = -1;
      double pick_gap = -kInf;
      bool pick_in = false;
      for (int a = 0; a < n; ++a) {
        if (decided[a]) continue;
        const bool inside = id_in(cohort, a);
        std::vector<int> acc = accept, rej = reject;
        auto& side = inside ? rej : acc;
        side.insert(std::lower_bound(side.begin(), side.end(), a), a);
        const std::vector<int> flipped = constrained_top(u, acc, rej);
        double gap = kInf;
        if (!flipped.empty()) {
          gap = w;
          for (int b : flipped) gap -= u[b];
        }
        if (gap > pick_gap) {
          pick = a;
          pick_gap = gap;
          pick_in = inside;
        }
      }
      decided[pick] = true;
      auto& side = pick_in ? accept : reject;
      side.insert(std::lower_bound(side.begin(), side.end(), pick), pick);
      out.decisions.emplace_back(pick, pick_in);
    }
    out.total_cost += stage_cost;
  }
  out.cohort = accept;
  return out;
}

}  // namespace refalgo
