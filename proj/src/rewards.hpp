#pragma once

#include <deque>
#include <string>
#include <variant>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace cohortsel {

// Gaussian model: a gain-s pull of arm a draws Normal(means[a], sigma/sqrt(s)).
// Rewards are not clipped.
struct GaussianSource {
  std::vector<double> means;
  double sigma = 0.0;
};

// Recorded-sample model. A gain-1 pull draws uniformly from the arm's recorded
// samples; a gain-s pull with s > 1 draws Normal(mean[a], sigma/sqrt(s)).
struct ReplaySource {
  std::vector<std::vector<double>> samples;
  std::vector<double> mean;
  double sigma = 0.0;
};

// Deterministic per-arm reward queues for tests. Exhausting a queue throws.
struct ScriptedSource {
  std::vector<std::deque<double>> queue;
};

struct RewardSource {
  std::variant<GaussianSource, ReplaySource, ScriptedSource> model;
};

// One pull of arm a with information gain s. Sources are value types; clone
// per trial when running trials concurrently (only ScriptedSource mutates).
double pull(RewardSource& src, ArmId a, double s, RngStream& rng);

struct Instance {
  std::vector<ArmRecord> records;
  RewardSource source;
  std::vector<std::string> group_labels;  // group index -> label, for CSV round trips

  int n() const { return static_cast<int>(records.size()); }
  // True utilities; throws std::logic_error if any arm lacks one.
  std::vector<double> truths() const;
  bool has_truths() const;
  // Per-arm group indices for the diversity objective; throws if any missing.
  std::vector<int> groups() const;
  int num_groups() const;
};

// n arms with true utilities drawn from Normal(meta_mean, meta_sd) and a
// Gaussian source of noise scale sigma. num_groups > 0 also assigns each arm
// a uniform group label for diversity runs.
Instance generate_gaussian_instance(int n, double meta_mean, double meta_sd, double sigma,
                                    RngStream& rng, int num_groups = 0);

// Replay CSV schema: header "arm_id,group,mean,samples"; samples are
// semicolon-separated reals; group may be empty. Arm ids must be exactly
// 0..n-1. Parse errors name the line and column. sigma is not part of the
// file; pass the configured noise scale for gain > 1 pulls.
Instance load_replay_csv(const std::string& path, double sigma = 0.0);
Instance parse_replay_csv(const std::string& text, double sigma = 0.0);
std::string render_replay_csv(const Instance& inst);
void save_replay_csv(const std::string& path, const Instance& inst);

}  // namespace cohortsel
