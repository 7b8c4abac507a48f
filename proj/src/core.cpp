#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cohortsel {

bool cohort_contains(const Cohort& m, ArmId a) {
  return std::binary_search(m.begin(), m.end(), a);
}

void record_pull(ArmStats& st, double reward, double s, double j) {
  if (s < 1.0 || j < 1.0 || s < j) throw std::logic_error("record_pull: requires s >= j >= 1");
  st.weighted_sum += s * reward;
  st.info += s;
  st.pulls += 1;
  st.cost_incurred += j;
}

double empirical_mean(const ArmStats& st) {
  if (st.pulls == 0) throw std::logic_error("empirical_mean: no observations");
  return st.weighted_sum / st.info;
}

std::vector<double> empirical_utilities(const std::vector<ArmStats>& stats) {
  std::vector<double> u(stats.size(), 0.0);
  for (std::size_t a = 0; a < stats.size(); ++a) {
    if (stats[a].pulls > 0) u[a] = stats[a].weighted_sum / stats[a].info;
  }
  return u;
}

double RunReport::objective_value() const {
  return std::isnan(objective_true) ? objective_empirical : objective_true;
}

}  // namespace cohortsel
