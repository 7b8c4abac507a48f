#include "cohortsel.h"

#include <exception>
#include <string>

#include "config.hpp"
#include "fmt_util.hpp"
#include "harness.hpp"

#define CSEL_EXPORT __attribute__((visibility("default")))

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& what) { g_last_error = what; }

// Maps an in-flight exception to a status code and records its message.
int capture_error() {
  try {
    throw;
  } catch (const cohortsel::ConfigError& e) {
    set_error(e.what());
    return CSEL_ERR_CONFIG;
  } catch (const std::exception& e) {
    set_error(e.what());
    return CSEL_ERR_RUNTIME;
  } catch (...) {
    set_error("unknown error");
    return CSEL_ERR_RUNTIME;
  }
}

}  // namespace

struct csel_experiment {
  cohortsel::ExperimentConfig config;
  cohortsel::CommandResult result;
  bool has_result = false;
};

extern "C" {

CSEL_EXPORT const char* csel_version(void) { return "cohortsel 1.0.0"; }

CSEL_EXPORT const char* csel_last_error(void) { return g_last_error.c_str(); }

CSEL_EXPORT csel_experiment* csel_experiment_from_json(const char* json_text) {
  if (!json_text) {
    set_error("null config text");
    return nullptr;
  }
  try {
    auto* exp = new csel_experiment;
    exp->config = cohortsel::parse_config(json_text);
    return exp;
  } catch (...) {
    capture_error();
    return nullptr;
  }
}

CSEL_EXPORT csel_experiment* csel_experiment_from_file(const char* path) {
  if (!path) {
    set_error("null config path");
    return nullptr;
  }
  try {
    auto* exp = new csel_experiment;
    exp->config = cohortsel::load_config(path);
    return exp;
  } catch (...) {
    capture_error();
    return nullptr;
  }
}

CSEL_EXPORT void csel_experiment_free(csel_experiment* exp) { delete exp; }

CSEL_EXPORT int csel_experiment_set(csel_experiment* exp, const char* key, const char* value) {
  if (!exp || !key || !value) {
    set_error("null argument");
    return CSEL_ERR_CONFIG;
  }
  const std::string k = key, v = value;
  try {
    if (k == "seeds") {
      long trials;
      if (!cohortsel::parse_long(v, trials) || trials < 1)
        throw cohortsel::ConfigError("seeds override: expected a positive integer");
      exp->config.seeds.trials = static_cast<int>(trials);
      exp->config.seeds.use_list = false;
      exp->config.seeds.list.clear();
    } else if (k == "base_seed") {
      unsigned long long seed;
      if (!cohortsel::parse_u64(v, seed))
        throw cohortsel::ConfigError("base_seed override: expected a nonnegative integer");
      exp->config.seeds.base_seed = seed;
      exp->config.seeds.use_list = false;
      exp->config.seeds.list.clear();
    } else if (k == "out") {
      exp->config.output.path = v;
    } else if (k == "format") {
      if (v == "csv") {
        exp->config.output.format = cohortsel::ReportFormat::csv;
      } else if (v == "json") {
        exp->config.output.format = cohortsel::ReportFormat::json;
      } else {
        throw cohortsel::ConfigError("format override: must be 'csv' or 'json'");
      }
    } else if (k == "jobs") {
      long jobs;
      if (!cohortsel::parse_long(v, jobs) || jobs < 1)
        throw cohortsel::ConfigError("jobs override: expected a positive integer");
      exp->config.jobs = static_cast<int>(jobs);
    } else {
      throw cohortsel::ConfigError("unknown option '" + k + "'");
    }
    return CSEL_OK;
  } catch (...) {
    return capture_error();
  }
}

CSEL_EXPORT int csel_experiment_run(csel_experiment* exp, const char* command) {
  if (!exp || !command) {
    set_error("null argument");
    return CSEL_ERR_CONFIG;
  }
  try {
    const cohortsel::Command cmd = cohortsel::parse_command(command);
    exp->result = cohortsel::run_command(exp->config, cmd);
    exp->has_result = true;
    return CSEL_OK;
  } catch (...) {
    return capture_error();
  }
}

CSEL_EXPORT const char* csel_experiment_result(const csel_experiment* exp) {
  if (!exp || !exp->has_result) return nullptr;
  return exp->result.primary.c_str();
}

CSEL_EXPORT const char* csel_experiment_summary(const csel_experiment* exp) {
  if (!exp || !exp->has_result) return nullptr;
  return exp->result.summary.c_str();
}

}  // extern "C"
