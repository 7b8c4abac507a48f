#include "config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cohortsel {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config." + path + ": " + what);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

long as_long(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

std::uint64_t as_u64(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    fail(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Algo parse_algo(const std::string& name, const std::string& path) {
  if (name == "caco") return Algo::caco;
  if (name == "brutas") return Algo::brutas;
  if (name == "uniform") return Algo::uniform;
  if (name == "random") return Algo::random;
  if (name == "swap") return Algo::swap;
  fail(path, "unknown algorithm '" + name + "'");
}

std::vector<StageSpec> parse_stages(const json& j) {
  if (!j.is_array() || j.empty()) fail("stages", "expected a non-empty array");
  std::vector<StageSpec> stages;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "stages[" + std::to_string(i) + "]";
    const json& st = j[i];
    if (!st.is_object()) fail(path, "expected an object");
    check_keys(st, path, {"s", "j", "survivors", "decisions", "budget"});
    StageSpec spec;
    if (st.contains("s")) spec.s = as_double(st["s"], path + ".s");
    if (st.contains("j")) spec.j = as_double(st["j"], path + ".j");
    if (spec.j < 1.0) fail(path + ".j", "pull cost must be >= 1");
    if (spec.s < spec.j) fail(path + ".s", "information gain must be >= cost j");
    if (st.contains("survivors")) {
      spec.survivors = static_cast<int>(as_long(st["survivors"], path + ".survivors"));
      if (spec.survivors < 1) fail(path + ".survivors", "must be >= 1");
    }
    if (st.contains("decisions")) {
      spec.decisions = static_cast<int>(as_long(st["decisions"], path + ".decisions"));
      if (spec.decisions < 0) fail(path + ".decisions", "must be >= 0");
    }
    if (st.contains("budget")) {
      spec.budget = as_double(st["budget"], path + ".budget");
      if (spec.budget <= 0.0) fail(path + ".budget", "must be positive");
    }
    stages.push_back(spec);
  }
  return stages;
}

template <class T, class Conv>
std::vector<T> parse_list(const json& j, const std::string& path, Conv conv) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(conv(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::caco: return "caco";
    case Algo::brutas: return "brutas";
    case Algo::uniform: return "uniform";
    case Algo::random: return "random";
    case Algo::swap: return "swap";
  }
  return "?";
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(root, "", {"algorithm", "objective", "instance", "k", "stages", "caco", "brutas",
                        "swap", "seeds", "sweep", "bounds", "output", "jobs"});

  ExperimentConfig cfg;

  if (root.contains("algorithm")) {
    const json& a = root["algorithm"];
    if (a.is_string()) {
      cfg.algorithms.push_back(parse_algo(a.get<std::string>(), "algorithm"));
    } else if (a.is_array() && !a.empty()) {
      for (std::size_t i = 0; i < a.size(); ++i)
        cfg.algorithms.push_back(
            parse_algo(as_string(a[i], "algorithm"), "algorithm[" + std::to_string(i) + "]"));
    } else {
      fail("algorithm", "expected a name or a non-empty array of names");
    }
  }

  if (root.contains("objective")) {
    const json& o = root["objective"];
    if (!o.is_object()) fail("objective", "expected an object");
    check_keys(o, "objective", {"type"});
    const std::string type = o.contains("type") ? as_string(o["type"], "objective.type") : "topk";
    if (type == "topk") {
      cfg.objective = ObjectiveKind::top_k;
    } else if (type == "diversity") {
      cfg.objective = ObjectiveKind::diversity;
    } else {
      fail("objective.type", "must be 'topk' or 'diversity'");
    }
  }

  if (!root.contains("instance")) throw ConfigError("config.instance: required");
  {
    const json& inst = root["instance"];
    if (!inst.is_object()) fail("instance", "expected an object");
    check_keys(inst, "instance",
               {"type", "n", "meta_mean", "meta_sd", "sigma", "seed", "groups", "path"});
    const std::string type =
        inst.contains("type") ? as_string(inst["type"], "instance.type") : "gaussian";
    if (type == "gaussian") {
      cfg.instance.type = InstanceSpec::Type::gaussian;
      if (!inst.contains("n")) fail("instance.n", "required for gaussian instances");
      cfg.instance.n = static_cast<int>(as_long(inst["n"], "instance.n"));
      if (cfg.instance.n < 1) fail("instance.n", "must be >= 1");
      if (inst.contains("meta_mean"))
        cfg.instance.meta_mean = as_double(inst["meta_mean"], "instance.meta_mean");
      if (inst.contains("meta_sd")) {
        cfg.instance.meta_sd = as_double(inst["meta_sd"], "instance.meta_sd");
        if (cfg.instance.meta_sd < 0.0) fail("instance.meta_sd", "must be >= 0");
      }
      if (inst.contains("seed")) cfg.instance.seed = as_u64(inst["seed"], "instance.seed");
      if (inst.contains("groups")) {
        cfg.instance.groups = static_cast<int>(as_long(inst["groups"], "instance.groups"));
        if (cfg.instance.groups < 0) fail("instance.groups", "must be >= 0");
      }
      if (inst.contains("path")) fail("instance.path", "only valid for replay instances");
    } else if (type == "replay") {
      cfg.instance.type = InstanceSpec::Type::replay;
      if (!inst.contains("path")) fail("instance.path", "required for replay instances");
      cfg.instance.path = as_string(inst["path"], "instance.path");
    } else {
      fail("instance.type", "must be 'gaussian' or 'replay'");
    }
    if (!inst.contains("sigma")) fail("instance.sigma", "required (reward noise scale)");
    cfg.instance.sigma = as_double(inst["sigma"], "instance.sigma");
    if (cfg.instance.sigma < 0.0) fail("instance.sigma", "must be >= 0");
  }

  if (!root.contains("k")) throw ConfigError("config.k: required");
  cfg.k = static_cast<int>(as_long(root["k"], "k"));
  if (cfg.k < 1) fail("k", "must be >= 1");

  if (!root.contains("stages")) throw ConfigError("config.stages: required");
  cfg.stages = parse_stages(root["stages"]);

  if (root.contains("caco")) {
    const json& c = root["caco"];
    if (!c.is_object()) fail("caco", "expected an object");
    check_keys(c, "caco", {"delta", "epsilon", "max_rounds_per_stage", "radius_population"});
    if (c.contains("delta")) cfg.caco.delta = as_double(c["delta"], "caco.delta");
    if (c.contains("epsilon")) cfg.caco.epsilon = as_double(c["epsilon"], "caco.epsilon");
    if (cfg.caco.delta <= 0.0 || cfg.caco.delta >= 1.0) fail("caco.delta", "must lie in (0, 1)");
    if (cfg.caco.epsilon <= 0.0 || cfg.caco.epsilon >= 1.0)
      fail("caco.epsilon", "must lie in (0, 1)");
    if (c.contains("max_rounds_per_stage")) {
      cfg.caco.max_rounds_per_stage = as_long(c["max_rounds_per_stage"], "caco.max_rounds_per_stage");
      if (cfg.caco.max_rounds_per_stage < 0) fail("caco.max_rounds_per_stage", "must be >= 0");
    }
    if (c.contains("radius_population")) {
      const std::string pop = as_string(c["radius_population"], "caco.radius_population");
      if (pop == "stage_active") {
        cfg.caco.radius_population = RadiusPopulation::stage_active;
      } else if (pop == "all_arms") {
        cfg.caco.radius_population = RadiusPopulation::all_arms;
      } else {
        fail("caco.radius_population", "must be 'stage_active' or 'all_arms'");
      }
    }
  }

  if (root.contains("brutas")) {
    const json& b = root["brutas"];
    if (!b.is_object()) fail("brutas", "expected an object");
    check_keys(b, "brutas", {"schedule_variant"});
    if (b.contains("schedule_variant")) {
      const std::string v = as_string(b["schedule_variant"], "brutas.schedule_variant");
      if (v == "csar_consistent") {
        cfg.brutas_schedule = ScheduleVariant::csar_consistent;
      } else if (v == "paper_literal") {
        cfg.brutas_schedule = ScheduleVariant::paper_literal;
      } else {
        fail("brutas.schedule_variant", "must be 'csar_consistent' or 'paper_literal'");
      }
    }
  }

  if (root.contains("swap")) {
    const json& s = root["swap"];
    if (!s.is_object()) fail("swap", "expected an object");
    check_keys(s, "swap", {"threshold_cost", "delta"});
    if (s.contains("threshold_cost")) {
      cfg.swap.threshold_cost = as_double(s["threshold_cost"], "swap.threshold_cost");
      if (cfg.swap.threshold_cost < 0.0) fail("swap.threshold_cost", "must be >= 0");
    }
    if (s.contains("delta")) {
      cfg.swap.delta = as_double(s["delta"], "swap.delta");
      if (cfg.swap.delta <= 0.0 || cfg.swap.delta >= 1.0) fail("swap.delta", "must lie in (0, 1)");
    }
  }

  if (root.contains("seeds")) {
    const json& s = root["seeds"];
    if (!s.is_object()) fail("seeds", "expected an object");
    check_keys(s, "seeds", {"base_seed", "trials", "list"});
    if (s.contains("list")) {
      if (s.contains("base_seed") || s.contains("trials"))
        fail("seeds", "give either list or base_seed/trials, not both");
      cfg.seeds.list = parse_list<std::uint64_t>(s["list"], "seeds.list", as_u64);
      cfg.seeds.use_list = true;
    } else {
      if (s.contains("base_seed")) cfg.seeds.base_seed = as_u64(s["base_seed"], "seeds.base_seed");
      if (s.contains("trials")) {
        cfg.seeds.trials = static_cast<int>(as_long(s["trials"], "seeds.trials"));
        if (cfg.seeds.trials < 1) fail("seeds.trials", "must be >= 1");
      }
    }
  }

  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    if (!s.is_object()) fail("sweep", "expected an object");
    check_keys(s, "sweep", {"epsilon", "delta", "sigma", "s2", "k1"});
    if (s.contains("epsilon"))
      cfg.sweep.epsilon = parse_list<double>(s["epsilon"], "sweep.epsilon", as_double);
    if (s.contains("delta"))
      cfg.sweep.delta = parse_list<double>(s["delta"], "sweep.delta", as_double);
    if (s.contains("sigma"))
      cfg.sweep.sigma = parse_list<double>(s["sigma"], "sweep.sigma", as_double);
    if (s.contains("s2")) cfg.sweep.s2 = parse_list<double>(s["s2"], "sweep.s2", as_double);
    if (s.contains("k1"))
      cfg.sweep.k1 = parse_list<int>(s["k1"], "sweep.k1", [](const json& j, const std::string& p) {
        return static_cast<int>(as_long(j, p));
      });
  }

  if (root.contains("bounds")) {
    const json& b = root["bounds"];
    if (!b.is_object()) fail("bounds", "expected an object");
    check_keys(b, "bounds", {"instances", "seed", "meta_sd"});
    if (!b.contains("instances")) fail("bounds.instances", "required");
    cfg.bounds.instances = static_cast<int>(as_long(b["instances"], "bounds.instances"));
    if (cfg.bounds.instances < 1) fail("bounds.instances", "must be >= 1");
    if (b.contains("seed")) cfg.bounds.seed = as_u64(b["seed"], "bounds.seed");
    if (!b.contains("meta_sd")) fail("bounds.meta_sd", "required");
    cfg.bounds.meta_sd = parse_list<double>(b["meta_sd"], "bounds.meta_sd", as_double);
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    if (!o.is_object()) fail("output", "expected an object");
    check_keys(o, "output", {"path", "format", "full_trace"});
    if (o.contains("path")) cfg.output.path = as_string(o["path"], "output.path");
    if (o.contains("format")) {
      const std::string f = as_string(o["format"], "output.format");
      if (f == "csv") {
        cfg.output.format = ReportFormat::csv;
      } else if (f == "json") {
        cfg.output.format = ReportFormat::json;
      } else {
        fail("output.format", "must be 'csv' or 'json'");
      }
    }
    if (o.contains("full_trace")) {
      if (!o["full_trace"].is_boolean()) fail("output.full_trace", "expected a boolean");
      cfg.output.full_trace = o["full_trace"].get<bool>();
    }
  }

  if (root.contains("jobs")) {
    cfg.jobs = static_cast<int>(as_long(root["jobs"], "jobs"));
    if (cfg.jobs < 1) fail("jobs", "must be >= 1");
  }

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_for_algorithm(const ExperimentConfig& cfg, Algo algo, int n) {
  const auto& stages = cfg.stages;

  auto need_survivor_chain = [&](const char* who) {
    int prev = n;
    for (std::size_t i = 0; i < stages.size(); ++i) {
      if (stages[i].survivors < 1)
        throw ConfigError("config.stages[" + std::to_string(i) + "].survivors: required for " +
                          who);
      if (stages[i].survivors >= prev)
        throw ConfigError("config.stages[" + std::to_string(i) +
                          "].survivors: must decrease strictly from the arm count");
      prev = stages[i].survivors;
    }
    if (stages.back().survivors != cfg.k)
      throw ConfigError("config.stages: last survivor count must equal k");
  };
  auto need_budgets = [&](const char* who) {
    for (std::size_t i = 0; i < stages.size(); ++i) {
      if (stages[i].budget <= 0.0)
        throw ConfigError("config.stages[" + std::to_string(i) + "].budget: required for " + who);
    }
  };

  if (cfg.k > n) throw ConfigError("config.k: exceeds the arm count");

  switch (algo) {
    case Algo::caco:
      need_survivor_chain("caco");
      break;
    case Algo::uniform:
    case Algo::random: {
      need_survivor_chain("the baseline");
      need_budgets("the baseline");
      int active = n;
      for (std::size_t i = 0; i < stages.size(); ++i) {
        if (stages[i].budget < stages[i].j * active)
          throw ConfigError("config.stages[" + std::to_string(i) +
                            "].budget: below one pull per active arm");
        active = stages[i].survivors;
      }
      break;
    }
    case Algo::brutas: {
      long total = 0;
      for (std::size_t i = 0; i < stages.size(); ++i) {
        if (stages[i].decisions < 0)
          throw ConfigError("config.stages[" + std::to_string(i) +
                            "].decisions: required for brutas");
        const long active = n - total;
        if (stages[i].decisions > active)
          throw ConfigError("config.stages[" + std::to_string(i) +
                            "].decisions: exceeds remaining arms");
        if (stages[i].decisions > 0) {
          if (stages[i].budget <= 0.0)
            throw ConfigError("config.stages[" + std::to_string(i) +
                              "].budget: required for brutas");
          if (stages[i].budget / stages[i].j <= static_cast<double>(active))
            throw ConfigError("config.stages[" + std::to_string(i) +
                              "].budget: must afford more than one pull per active arm");
        }
        total += stages[i].decisions;
      }
      if (total != n) throw ConfigError("config.stages: decisions must sum to the arm count");
      break;
    }
    case Algo::swap:
      need_budgets("swap");
      break;
  }

  if (cfg.objective == ObjectiveKind::diversity &&
      cfg.instance.type == InstanceSpec::Type::gaussian && cfg.instance.groups < 1)
    throw ConfigError("config.instance.groups: diversity objective needs groups >= 1");
}

}  // namespace cohortsel
