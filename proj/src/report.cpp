#include "report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "fmt_util.hpp"
#include "json.hpp"

namespace cohortsel {

namespace {

using nlohmann::json;

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::round_cap_hit: return "round_cap_hit";
    case RunStatus::infeasible: return "infeasible";
  }
  return "?";
}

RunStatus status_from(const std::string& name) {
  if (name == "ok") return RunStatus::ok;
  if (name == "round_cap_hit") return RunStatus::round_cap_hit;
  if (name == "infeasible") return RunStatus::infeasible;
  throw std::runtime_error("report: unknown status '" + name + "'");
}

// JSON has no NaN; unknown true objectives travel as null.
json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

std::string render_runs_csv(const std::vector<RunReport>& runs) {
  std::string out =
      "algorithm,seed,total_cost,objective_true,objective_empirical,stage,stage_cost,stage_pulls\n";
  for (const RunReport& run : runs) {
    const std::string prefix = run.algorithm + "," + std::to_string(run.seed) + "," +
                               format_double(run.total_cost) + "," +
                               (std::isnan(run.objective_true) ? std::string()
                                                               : format_double(run.objective_true)) +
                               "," + format_double(run.objective_empirical) + ",";
    long total_pulls = 0;
    for (const StageTrace& st : run.per_stage) {
      out += prefix + std::to_string(st.stage) + "," + format_double(st.cost) + "," +
             std::to_string(st.pulls) + "\n";
      total_pulls += st.pulls;
    }
    out += prefix + "summary," + format_double(run.total_cost) + "," +
           std::to_string(total_pulls) + "\n";
  }
  return out;
}

std::string render_runs_json(const std::vector<RunReport>& runs, bool full_trace) {
  json arr = json::array();
  for (const RunReport& run : runs) {
    json stages = json::array();
    for (const StageTrace& st : run.per_stage) {
      json stage{{"stage", st.stage},
                 {"pulls", st.pulls},
                 {"cost", st.cost},
                 {"accepts", st.accepts},
                 {"rejects", st.rejects}};
      if (full_trace) stage["survivors"] = st.survivors;
      stages.push_back(std::move(stage));
    }
    json obj{{"algorithm", run.algorithm},
             {"seed", run.seed},
             {"status", status_name(run.status)},
             {"note", run.note},
             {"total_cost", run.total_cost},
             {"objective_true", number_or_null(run.objective_true)},
             {"objective_empirical", run.objective_empirical},
             {"cohort", run.cohort},
             {"stages", std::move(stages)}};
    if (full_trace) {
      obj["pull_log"] = run.pull_log;
      json decisions = json::array();
      for (const DecisionRecord& d : run.decisions)
        decisions.push_back(json{{"arm", d.arm}, {"accepted", d.accepted}, {"pull_index", d.pull_index}});
      obj["decisions"] = std::move(decisions);
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::vector<RunReport> parse_runs_json(const std::string& text) {
  const json arr = json::parse(text);
  std::vector<RunReport> runs;
  for (const json& obj : arr) {
    RunReport run;
    run.algorithm = obj.at("algorithm").get<std::string>();
    run.seed = obj.at("seed").get<std::uint64_t>();
    run.status = status_from(obj.at("status").get<std::string>());
    run.note = obj.at("note").get<std::string>();
    run.total_cost = obj.at("total_cost").get<double>();
    run.objective_true = obj.at("objective_true").is_null()
                             ? std::numeric_limits<double>::quiet_NaN()
                             : obj.at("objective_true").get<double>();
    run.objective_empirical = obj.at("objective_empirical").get<double>();
    run.cohort = obj.at("cohort").get<Cohort>();
    for (const json& stage : obj.at("stages")) {
      StageTrace st;
      st.stage = stage.at("stage").get<int>();
      st.pulls = stage.at("pulls").get<long>();
      st.cost = stage.at("cost").get<double>();
      st.accepts = stage.at("accepts").get<int>();
      st.rejects = stage.at("rejects").get<int>();
      if (stage.contains("survivors")) st.survivors = stage.at("survivors").get<Cohort>();
      run.per_stage.push_back(std::move(st));
    }
    if (obj.contains("pull_log")) run.pull_log = obj.at("pull_log").get<std::vector<ArmId>>();
    if (obj.contains("decisions")) {
      for (const json& d : obj.at("decisions")) {
        run.decisions.push_back(DecisionRecord{d.at("arm").get<ArmId>(),
                                               d.at("accepted").get<bool>(),
                                               d.at("pull_index").get<long>()});
      }
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

Aggregate aggregate_runs(const std::string& algorithm, const std::vector<RunReport>& runs) {
  Aggregate agg;
  agg.algorithm = algorithm;
  agg.trials = static_cast<int>(runs.size());
  if (runs.empty()) return agg;
  double cost_sum = 0.0, obj_sum = 0.0;
  for (const RunReport& r : runs) {
    cost_sum += r.total_cost;
    obj_sum += r.objective_value();
  }
  agg.cost_mean = cost_sum / agg.trials;
  agg.objective_mean = obj_sum / agg.trials;
  if (agg.trials > 1) {
    double cost_ss = 0.0, obj_ss = 0.0;
    for (const RunReport& r : runs) {
      cost_ss += (r.total_cost - agg.cost_mean) * (r.total_cost - agg.cost_mean);
      obj_ss += (r.objective_value() - agg.objective_mean) *
                (r.objective_value() - agg.objective_mean);
    }
    agg.cost_sd = std::sqrt(cost_ss / (agg.trials - 1));
    agg.objective_sd = std::sqrt(obj_ss / (agg.trials - 1));
  }
  return agg;
}

std::string render_aggregates_csv(const std::vector<Aggregate>& rows) {
  std::string out = "algorithm,trials,cost_mean,cost_sd,objective_mean,objective_sd\n";
  for (const Aggregate& a : rows) {
    out += a.algorithm + "," + std::to_string(a.trials) + "," + format_double(a.cost_mean) + "," +
           format_double(a.cost_sd) + "," + format_double(a.objective_mean) + "," +
           format_double(a.objective_sd) + "\n";
  }
  return out;
}

std::string render_aggregates_json(const std::vector<Aggregate>& rows) {
  json arr = json::array();
  for (const Aggregate& a : rows) {
    arr.push_back(json{{"algorithm", a.algorithm},
                       {"trials", a.trials},
                       {"cost_mean", a.cost_mean},
                       {"cost_sd", a.cost_sd},
                       {"objective_mean", a.objective_mean},
                       {"objective_sd", a.objective_sd}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace cohortsel
