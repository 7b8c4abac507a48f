#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "analysis.hpp"
#include "baselines.hpp"
#include "brutas.hpp"
#include "caco.hpp"
#include "fmt_util.hpp"
#include "json.hpp"
#include "rng.hpp"

namespace cohortsel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Non-trial streams get their own stream ids so equal seed values cannot
// collide with a trial's stream (trials use stream 0).
constexpr std::uint64_t kInstanceStream = 1;

void parallel_for(int tasks, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, tasks));
  if (jobs == 1) {
    for (int i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= tasks) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string format_or_empty(double v) { return std::isnan(v) ? std::string() : format_double(v); }

std::vector<RunReport> run_batch(const ExperimentConfig& cfg, Algo algo, const Instance& inst) {
  const int trials = cfg.seeds.count();
  std::vector<RunReport> runs(trials);
  parallel_for(trials, cfg.jobs,
               [&](int t) { runs[t] = run_trial(cfg, algo, inst, cfg.seeds.seed_at(t)); });
  return runs;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "simulate") return Command::simulate;
  if (name == "sweep") return Command::sweep;
  if (name == "hardness") return Command::hardness;
  if (name == "bounds") return Command::bounds;
  if (name == "replay") return Command::replay;
  throw ConfigError("unknown command '" + name +
                    "' (expected simulate, sweep, hardness, bounds, or replay)");
}

Instance build_instance(const InstanceSpec& spec) {
  if (spec.type == InstanceSpec::Type::gaussian) {
    RngStream rng(spec.seed, kInstanceStream);
    return generate_gaussian_instance(spec.n, spec.meta_mean, spec.meta_sd, spec.sigma, rng,
                                      spec.groups);
  }
  return load_replay_csv(spec.path, spec.sigma);
}

Objective build_objective(const ExperimentConfig& cfg, const Instance& inst) {
  if (cfg.objective == ObjectiveKind::top_k) return Objective::topk();
  int q = inst.num_groups();
  if (cfg.instance.type == InstanceSpec::Type::gaussian) q = std::max(q, cfg.instance.groups);
  if (q < 1) throw ConfigError("config.objective: diversity needs group labels on every arm");
  return Objective::diversity(inst.groups(), q);
}

RunReport run_trial(const ExperimentConfig& cfg, Algo algo, const Instance& inst,
                    std::uint64_t seed) {
  const Objective obj = build_objective(cfg, inst);
  RewardSource src = inst.source;  // per-trial clone; only scripted sources mutate
  RngStream rng(seed, 0);
  RunReport report;
  try {
    switch (algo) {
      case Algo::caco: {
        CacoConfig c;
        c.delta = cfg.caco.delta;
        c.epsilon = cfg.caco.epsilon;
        c.sigma = cfg.instance.sigma;
        c.stages = cfg.stages;
        c.max_rounds_per_stage = cfg.caco.max_rounds_per_stage;
        c.radius_population = cfg.caco.radius_population;
        report = run_caco(c, obj, inst.records, src, rng);
        break;
      }
      case Algo::brutas: {
        BrutasConfig c;
        c.sigma = cfg.instance.sigma;
        c.k = cfg.k;
        c.stages = cfg.stages;
        c.schedule_variant = cfg.brutas_schedule;
        report = run_brutas(c, obj, inst.records, src, rng);
        break;
      }
      case Algo::uniform:
      case Algo::random: {
        BaselineConfig c;
        c.stages = cfg.stages;
        report = algo == Algo::uniform ? run_uniform(c, obj, inst.records, src, rng)
                                       : run_random(c, obj, inst.records, src, rng);
        break;
      }
      case Algo::swap: {
        SwapConfig c;
        c.threshold_cost =
            cfg.swap.threshold_cost < 0.0 ? cfg.stages.front().budget : cfg.swap.threshold_cost;
        c.total_budget = 0.0;
        for (const StageSpec& st : cfg.stages) c.total_budget += st.budget;
        c.weak_s = cfg.stages.front().s;
        c.weak_j = cfg.stages.front().j;
        c.strong_s = cfg.stages.back().s;
        c.strong_j = cfg.stages.back().j;
        c.k = cfg.k;
        c.sigma = cfg.instance.sigma;
        c.delta = cfg.swap.delta;
        report = run_swap_threshold(c, obj, inst.records, src, rng);
        break;
      }
    }
  } catch (const std::invalid_argument& e) {
    // Parameter validation inside the runners is config-induced.
    throw ConfigError(std::string("config: ") + e.what());
  }
  report.seed = seed;
  return report;
}

std::vector<RunReport> run_simulate(const ExperimentConfig& cfg, const Instance& inst) {
  if (cfg.algorithms.empty())
    throw ConfigError("config.algorithm: required for the simulate command");
  for (Algo algo : cfg.algorithms) validate_for_algorithm(cfg, algo, inst.n());
  std::vector<RunReport> all;
  for (Algo algo : cfg.algorithms) {
    auto runs = run_batch(cfg, algo, inst);
    all.insert(all.end(), std::make_move_iterator(runs.begin()),
               std::make_move_iterator(runs.end()));
  }
  return all;
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg) {
  if (cfg.algorithms.size() != 1)
    throw ConfigError("config.algorithm: sweep needs exactly one algorithm");
  const Algo algo = cfg.algorithms.front();
  if (cfg.sweep.empty()) throw ConfigError("config.sweep: required for the sweep command");
  const bool caco_axes = !cfg.sweep.epsilon.empty() || !cfg.sweep.delta.empty();
  if (caco_axes && algo != Algo::caco)
    throw ConfigError("config.sweep: epsilon/delta axes apply to caco only");
  if (!cfg.sweep.s2.empty() && cfg.stages.size() < 2)
    throw ConfigError("config.sweep.s2: needs at least two stages");

  // A missing axis contributes one pass-through cell.
  auto axis = [](const std::vector<double>& v) {
    return v.empty() ? std::vector<std::optional<double>>{std::nullopt}
                     : [&] {
                         std::vector<std::optional<double>> out;
                         for (double x : v) out.push_back(x);
                         return out;
                       }();
  };
  std::vector<std::optional<int>> k1_axis{std::nullopt};
  if (!cfg.sweep.k1.empty()) {
    k1_axis.clear();
    for (int k1 : cfg.sweep.k1) k1_axis.push_back(k1);
  }

  std::vector<SweepCell> cells;
  for (const auto& eps : axis(cfg.sweep.epsilon)) {
    for (const auto& del : axis(cfg.sweep.delta)) {
      for (const auto& sig : axis(cfg.sweep.sigma)) {
        for (const auto& s2 : axis(cfg.sweep.s2)) {
          for (const auto& k1 : k1_axis) {
            ExperimentConfig cell_cfg = cfg;
            if (eps) cell_cfg.caco.epsilon = *eps;
            if (del) cell_cfg.caco.delta = *del;
            if (sig) cell_cfg.instance.sigma = *sig;
            if (s2) {
              if (*s2 < cell_cfg.stages[1].j)
                throw ConfigError("config.sweep.s2: information gain below stage cost j");
              cell_cfg.stages[1].s = *s2;
            }
            if (k1) cell_cfg.stages[0].survivors = *k1;

            const Instance inst = build_instance(cell_cfg.instance);
            validate_for_algorithm(cell_cfg, algo, inst.n());
            const auto runs = run_batch(cell_cfg, algo, inst);

            SweepCell cell;
            cell.algorithm = algo_name(algo);
            cell.epsilon = algo == Algo::caco ? cell_cfg.caco.epsilon : kNaN;
            cell.delta = algo == Algo::caco ? cell_cfg.caco.delta : kNaN;
            cell.sigma = cell_cfg.instance.sigma;
            cell.s2 = cell_cfg.stages.size() >= 2 ? cell_cfg.stages[1].s : kNaN;
            cell.k1 = cell_cfg.stages[0].survivors;
            cell.agg = aggregate_runs(cell.algorithm, runs);
            cells.push_back(std::move(cell));
          }
        }
      }
    }
  }
  return cells;
}

std::string render_sweep_csv(const std::vector<SweepCell>& cells) {
  std::string out =
      "algorithm,epsilon,delta,sigma,s2,k1,trials,cost_mean,cost_sd,objective_mean,objective_sd\n";
  for (const SweepCell& c : cells) {
    out += c.algorithm + "," + format_or_empty(c.epsilon) + "," + format_or_empty(c.delta) + "," +
           format_double(c.sigma) + "," + format_or_empty(c.s2) + "," +
           (c.k1 < 0 ? std::string() : std::to_string(c.k1)) + "," +
           std::to_string(c.agg.trials) + "," + format_double(c.agg.cost_mean) + "," +
           format_double(c.agg.cost_sd) + "," + format_double(c.agg.objective_mean) + "," +
           format_double(c.agg.objective_sd) + "\n";
  }
  return out;
}

std::string render_sweep_json(const std::vector<SweepCell>& cells) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepCell& c : cells) {
    nlohmann::json obj{{"algorithm", c.algorithm},
                       {"sigma", c.sigma},
                       {"trials", c.agg.trials},
                       {"cost_mean", c.agg.cost_mean},
                       {"cost_sd", c.agg.cost_sd},
                       {"objective_mean", c.agg.objective_mean},
                       {"objective_sd", c.agg.objective_sd}};
    obj["epsilon"] = std::isnan(c.epsilon) ? nlohmann::json() : nlohmann::json(c.epsilon);
    obj["delta"] = std::isnan(c.delta) ? nlohmann::json() : nlohmann::json(c.delta);
    obj["s2"] = std::isnan(c.s2) ? nlohmann::json() : nlohmann::json(c.s2);
    obj["k1"] = c.k1 < 0 ? nlohmann::json() : nlohmann::json(c.k1);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

namespace {

std::string render_hardness_csv(const GapProfile& profile) {
  std::string out = "record,arm_id,value\n";
  for (std::size_t a = 0; a < profile.gaps.size(); ++a)
    out += "gap," + std::to_string(a) + "," + format_double(profile.gaps[a]) + "\n";
  out += "hardness,," + format_double(profile.hardness) + "\n";
  out += "tilde_hardness,," + format_double(profile.tilde_hardness) + "\n";
  out += "degenerate,," + std::string(profile.degenerate ? "true" : "false") + "\n";
  return out;
}

std::string render_hardness_json(const GapProfile& profile) {
  nlohmann::json obj{{"gaps", profile.gaps},
                     {"hardness", profile.hardness},
                     {"tilde_hardness", profile.tilde_hardness},
                     {"degenerate", profile.degenerate}};
  return obj.dump(2) + "\n";
}

struct BoundsRow {
  double meta_sd = 0.0;
  int instance = 0;
  double hardness = 0.0;
  double tilde_hardness = 0.0;
  double caco_bound = kNaN;
  double brutas_bound = kNaN;
};

std::vector<BoundsRow> run_bounds(const ExperimentConfig& cfg) {
  if (cfg.bounds.instances < 1) throw ConfigError("config.bounds: required for the bounds command");
  if (cfg.instance.type != InstanceSpec::Type::gaussian)
    throw ConfigError("config.instance: bounds generates gaussian instances");
  const bool caco_stages =
      std::all_of(cfg.stages.begin(), cfg.stages.end(),
                  [](const StageSpec& st) { return st.survivors >= 1; });
  const bool brutas_stages =
      std::all_of(cfg.stages.begin(), cfg.stages.end(),
                  [](const StageSpec& st) { return st.decisions >= 0 && st.budget > 0.0; });
  if (!caco_stages && !brutas_stages)
    throw ConfigError("config.stages: bounds needs survivor counts or decisions with budgets");

  std::vector<BoundsRow> rows;
  for (double meta_sd : cfg.bounds.meta_sd) {
    for (int i = 0; i < cfg.bounds.instances; ++i) {
      InstanceSpec spec = cfg.instance;
      spec.meta_sd = meta_sd;
      spec.seed = cfg.bounds.seed + static_cast<std::uint64_t>(i);
      const Instance inst = build_instance(spec);
      const Objective obj = build_objective(cfg, inst);
      const auto truths = inst.truths();
      const GapProfile profile = gap_profile(obj, truths, cfg.k);

      BoundsRow row;
      row.meta_sd = meta_sd;
      row.instance = i;
      row.hardness = profile.hardness;
      row.tilde_hardness = profile.tilde_hardness;
      if (caco_stages)
        row.caco_bound = caco_cost_bound(truths, profile.gaps, cfg.stages, cfg.caco.epsilon,
                                         cfg.caco.delta, cfg.instance.sigma);
      if (brutas_stages)
        row.brutas_bound = brutas_error_bound(profile.tilde_hardness, cfg.stages,
                                              cfg.instance.sigma);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string render_bounds_csv(const std::vector<BoundsRow>& rows) {
  std::string out = "meta_sd,instance,hardness,tilde_hardness,caco_cost_bound,brutas_error_bound\n";
  for (const BoundsRow& r : rows) {
    out += format_double(r.meta_sd) + "," + std::to_string(r.instance) + "," +
           format_double(r.hardness) + "," + format_double(r.tilde_hardness) + "," +
           format_or_empty(r.caco_bound) + "," + format_or_empty(r.brutas_bound) + "\n";
  }
  return out;
}

std::string render_bounds_json(const std::vector<BoundsRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const BoundsRow& r : rows) {
    nlohmann::json obj{{"meta_sd", r.meta_sd},
                       {"instance", r.instance},
                       {"hardness", r.hardness},
                       {"tilde_hardness", r.tilde_hardness}};
    obj["caco_cost_bound"] = std::isnan(r.caco_bound) ? nlohmann::json() : nlohmann::json(r.caco_bound);
    obj["brutas_error_bound"] =
        std::isnan(r.brutas_bound) ? nlohmann::json() : nlohmann::json(r.brutas_bound);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

}  // namespace

CommandResult run_command(const ExperimentConfig& cfg, Command cmd) {
  CommandResult result;
  const bool json_out = cfg.output.format == ReportFormat::json;

  switch (cmd) {
    case Command::simulate: {
      const Instance inst = build_instance(cfg.instance);
      const auto runs = run_simulate(cfg, inst);
      result.primary =
          json_out ? render_runs_json(runs, cfg.output.full_trace) : render_runs_csv(runs);
      std::vector<Aggregate> aggs;
      std::size_t offset = 0;
      for (Algo algo : cfg.algorithms) {
        const std::size_t count = static_cast<std::size_t>(cfg.seeds.count());
        std::vector<RunReport> slice(runs.begin() + offset, runs.begin() + offset + count);
        aggs.push_back(aggregate_runs(algo_name(algo), slice));
        offset += count;
      }
      result.summary = render_aggregates_csv(aggs);
      break;
    }
    case Command::sweep: {
      const auto cells = run_sweep(cfg);
      result.primary = json_out ? render_sweep_json(cells) : render_sweep_csv(cells);
      break;
    }
    case Command::hardness: {
      const Instance inst = build_instance(cfg.instance);
      if (!inst.has_truths())
        throw ConfigError("config.instance: hardness needs true utilities on every arm");
      if (cfg.k > inst.n()) throw ConfigError("config.k: exceeds the arm count");
      const Objective obj = build_objective(cfg, inst);
      const GapProfile profile = gap_profile(obj, inst.truths(), cfg.k);
      result.primary = json_out ? render_hardness_json(profile) : render_hardness_csv(profile);
      break;
    }
    case Command::bounds: {
      const auto rows = run_bounds(cfg);
      result.primary = json_out ? render_bounds_json(rows) : render_bounds_csv(rows);
      break;
    }
    case Command::replay: {
      if (cfg.instance.type != InstanceSpec::Type::replay)
        throw ConfigError("config.instance: the replay command needs a replay instance");
      const Instance inst = build_instance(cfg.instance);
      const std::vector<Algo> algos{Algo::caco, Algo::brutas, Algo::uniform, Algo::random,
                                    Algo::swap};
      std::vector<Aggregate> aggs;
      for (Algo algo : algos) {
        validate_for_algorithm(cfg, algo, inst.n());
        aggs.push_back(aggregate_runs(algo_name(algo), run_batch(cfg, algo, inst)));
      }
      result.primary = json_out ? render_aggregates_json(aggs) : render_aggregates_csv(aggs);
      break;
    }
  }

  if (!cfg.output.path.empty()) write_text_file(cfg.output.path, result.primary);
  return result;
}

}  // namespace cohortsel
