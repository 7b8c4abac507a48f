#pragma once

#include <span>
#include <vector>

#include "core.hpp"
#include "objectives.hpp"

namespace cohortsel {

// Gap of arm a at cohort size k: for a in the optimal cohort M*, the value
// drop when a is forced out; otherwise the drop when a is forced in. Exact via
// the constrained oracle for top_k, exhaustive otherwise. Returns +infinity
// when the constrained family is empty (n == k side of a forced arm).
double gap_score(const Objective& obj, std::span<const double> u, ArmId a, int k);

struct GapProfile {
  std::vector<double> gaps;          // indexed by arm
  std::vector<double> sorted_gaps;   // ascending
  double hardness = 0.0;             // sum of gap^-2; +infinity if any gap is 0
  double tilde_hardness = 0.0;       // max over i of i * gap_(i)^-2, gaps ascending
  bool degenerate = false;           // zero gaps (tied optima) or empty swap families
};

GapProfile gap_profile(const Objective& obj, std::span<const double> u, int k);

// H = sum of gap^-2. A zero gap pushes it to the +infinity sentinel.
double hardness(const std::vector<double>& gaps);

// H~ = max_i i * gap_(i)^-2 over the ascending order, i starting at 1.
double tilde_hardness(const std::vector<double>& gaps);

// n-th harmonic number; the pull schedules and the error bound use it.
// Domain error for n <= 0.
double tlog(int n);

// Worst-case sampling-cost bound for the elimination algorithm on top_k
// instances, evaluated on the survivor sets implied by the true utilities:
//   499 sigma^2 sum_i (j_i/s_i) S_i ln((4 sigma^2 j_i^4 / (s_i delta)) S_i),
//   S_i = sum over arms active entering stage i of min(4/gap^2, K_i^2/eps^2).
// stages must carry survivor counts; requires eps > 0 or all gaps nonzero.
double caco_cost_bound(std::span<const double> u, const std::vector<double>& gaps,
                       const std::vector<StageSpec>& stages, double epsilon, double delta,
                       double sigma);

// Mis-selection probability bound for the budgeted algorithm:
//   n^2 exp(-(sum_b s_b (Tbar_b - Ktilde_b) / (j_b tlog(Ktilde_b))) / (72 sigma^2 H~)).
// Stages with zero decisions are skipped; values above 1 are reported as-is.
double brutas_error_bound(double tilde_hardness, const std::vector<StageSpec>& stages,
                          double sigma);

}  // namespace cohortsel
