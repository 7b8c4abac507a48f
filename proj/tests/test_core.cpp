#include <cmath>
#include <stdexcept>

#include "core.hpp"
#include "doctest.h"

using namespace cohortsel;

TEST_CASE("two unit-gain pulls equal one double-gain pull of their mean") {
  ArmStats two;
  record_pull(two, 0.2, 1.0, 1.0);
  record_pull(two, 0.8, 1.0, 1.0);
  ArmStats one;
  record_pull(one, 0.5, 2.0, 1.0);
  CHECK(empirical_mean(two) == doctest::Approx(0.5));
  CHECK(empirical_mean(one) == doctest::Approx(0.5));
  CHECK(two.info == one.info);
  CHECK(two.pulls == 2);
  CHECK(one.pulls == 1);
}

TEST_CASE("weighted mean follows information, not pull count") {
  ArmStats st;
  record_pull(st, 0.4, 1.0, 1.0);
  record_pull(st, 0.4, 1.0, 1.0);  // mean 0.4 at info 2
  record_pull(st, 0.7, 2.0, 1.5);
  CHECK(st.info == doctest::Approx(4.0));
  CHECK(empirical_mean(st) == doctest::Approx(0.55));  // (0.8 + 1.4) / 4
  CHECK(st.cost_incurred == doctest::Approx(3.5));
  CHECK(st.pulls == 3);
}

TEST_CASE("pull shapes outside s >= j >= 1 are rejected") {
  ArmStats st;
  CHECK_THROWS_AS(record_pull(st, 0.5, 0.5, 0.5), std::logic_error);
  CHECK_THROWS_AS(record_pull(st, 0.5, 2.0, 0.5), std::logic_error);
  CHECK_THROWS_AS(record_pull(st, 0.5, 2.0, 3.0), std::logic_error);
  CHECK(st.pulls == 0);
}

TEST_CASE("empirical_mean refuses an unobserved arm") {
  ArmStats st;
  CHECK_THROWS_AS(empirical_mean(st), std::logic_error);
}

TEST_CASE("empirical_utilities maps unobserved arms to zero") {
  std::vector<ArmStats> stats(3);
  record_pull(stats[1], 0.9, 1.0, 1.0);
  const auto u = empirical_utilities(stats);
  CHECK(u == std::vector<double>{0.0, 0.9, 0.0});
}

TEST_CASE("cohort_contains works on the sorted representation") {
  const Cohort m{1, 4, 9};
  CHECK(cohort_contains(m, 4));
  CHECK_FALSE(cohort_contains(m, 5));
  CHECK_FALSE(cohort_contains({}, 0));
}

TEST_CASE("objective_value prefers the true objective when known") {
  RunReport run;
  run.objective_empirical = 1.5;
  run.objective_true = std::nan("");
  CHECK(run.objective_value() == 1.5);
  run.objective_true = 2.0;
  CHECK(run.objective_value() == 2.0);
}
