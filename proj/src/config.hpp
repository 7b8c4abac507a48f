#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "brutas.hpp"
#include "caco.hpp"
#include "core.hpp"
#include "objectives.hpp"

namespace cohortsel {

// Raised for malformed or inconsistent configuration; the CLI maps it to
// exit code 1 (runtime failures map to 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Algo { caco, brutas, uniform, random, swap };

std::string algo_name(Algo a);

enum class ReportFormat { csv, json };

struct OutputSpec {
  std::string path;  // empty: render only, no file
  ReportFormat format = ReportFormat::csv;
  bool full_trace = false;  // include pull and decision logs in JSON reports
};

struct SeedSpec {
  std::uint64_t base_seed = 0;
  int trials = 1;
  std::vector<std::uint64_t> list;  // explicit per-trial seeds, overrides base/trials
  bool use_list = false;

  int count() const { return use_list ? static_cast<int>(list.size()) : trials; }
  std::uint64_t seed_at(int trial) const {
    return use_list ? list[trial] : base_seed + static_cast<std::uint64_t>(trial);
  }
};

struct InstanceSpec {
  enum class Type { gaussian, replay };
  Type type = Type::gaussian;
  // gaussian
  int n = 0;
  double meta_mean = 0.5;
  double meta_sd = 0.15;
  std::uint64_t seed = 0;
  int groups = 0;
  // both: reward noise scale at gain 1
  double sigma = 0.0;
  // replay
  std::string path;
};

struct CacoParams {
  double delta = 0.05;
  double epsilon = 0.05;
  long max_rounds_per_stage = 0;
  RadiusPopulation radius_population = RadiusPopulation::stage_active;
};

struct SwapParams {
  double threshold_cost = -1.0;  // < 0: default to the first stage budget
  double delta = 0.05;
};

// Sweep axes; cells enumerate the cartesian product in this fixed order.
struct SweepSpec {
  std::vector<double> epsilon;
  std::vector<double> delta;
  std::vector<double> sigma;
  std::vector<double> s2;   // second-stage information gain
  std::vector<int> k1;      // first-stage survivor count
  bool empty() const {
    return epsilon.empty() && delta.empty() && sigma.empty() && s2.empty() && k1.empty();
  }
};

struct BoundsSpec {
  int instances = 0;  // instances per meta_sd grid point
  std::uint64_t seed = 0;
  std::vector<double> meta_sd;
};

struct ExperimentConfig {
  std::vector<Algo> algorithms;
  ObjectiveKind objective = ObjectiveKind::top_k;
  InstanceSpec instance;
  int k = 0;
  std::vector<StageSpec> stages;
  CacoParams caco;
  ScheduleVariant brutas_schedule = ScheduleVariant::csar_consistent;
  SwapParams swap;
  SeedSpec seeds;
  SweepSpec sweep;
  BoundsSpec bounds;
  OutputSpec output;
  int jobs = 1;
};

// Parse and structurally validate a config document. Field-level problems
// raise ConfigError naming the offending path.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Cross-field checks for one algorithm against the shared stage list, with n
// the actual arm count of the instance being run.
void validate_for_algorithm(const ExperimentConfig& cfg, Algo algo, int n);

}  // namespace cohortsel
