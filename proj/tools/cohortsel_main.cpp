// Command-line front end. Talks to the library exclusively through the C API.

#include <cstdint>
#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "cohortsel.h"

namespace {

struct Options {
  std::string config_path;
  int seeds = 0;
  std::uint64_t base_seed = 0;
  bool base_seed_set = false;
  std::string out;
  std::string format;
  int jobs = 0;
};

int fail(int code) {
  std::cerr << "error: " << csel_last_error() << "\n";
  return code;
}

int run(const std::string& command, const Options& opt) {
  csel_experiment* exp = csel_experiment_from_file(opt.config_path.c_str());
  if (!exp) return fail(CSEL_ERR_CONFIG);

  int rc = CSEL_OK;
  auto set = [&](const char* key, const std::string& value) {
    if (rc == CSEL_OK) rc = csel_experiment_set(exp, key, value.c_str());
  };
  if (opt.seeds > 0) set("seeds", std::to_string(opt.seeds));
  if (opt.base_seed_set) set("base_seed", std::to_string(opt.base_seed));
  if (!opt.out.empty()) set("out", opt.out);
  if (!opt.format.empty()) set("format", opt.format);
  if (opt.jobs > 0) set("jobs", std::to_string(opt.jobs));
  if (rc != CSEL_OK) {
    csel_experiment_free(exp);
    return fail(rc);
  }

  rc = csel_experiment_run(exp, command.c_str());
  if (rc != CSEL_OK) {
    csel_experiment_free(exp);
    return fail(rc);
  }

  const char* summary = csel_experiment_summary(exp);
  if (opt.out.empty()) {
    // Report to stdout; keep the summary out of the data stream.
    std::cout << csel_experiment_result(exp);
    if (summary && *summary) std::cerr << summary;
  } else {
    if (summary && *summary) std::cout << summary;
    std::cout << "wrote " << opt.out << "\n";
  }
  csel_experiment_free(exp);
  return CSEL_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(csel_version()) +
               " - tiered cohort selection via pure-exploration bandits"};
  app.require_subcommand(1);

  Options opt;
  std::string command;
  const std::pair<const char*, const char*> subcommands[] = {
      {"simulate", "run the configured algorithms over seeded trials"},
      {"sweep", "grid over epsilon/delta/sigma/s2/k1 and aggregate per cell"},
      {"hardness", "gap profile and hardness of the configured instance"},
      {"bounds", "tabulate theorem bounds over generated instances"},
      {"replay", "compare all five algorithms on a recorded instance"}};
  for (const auto& [name, description] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", opt.config_path, "JSON experiment config")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seeds", opt.seeds, "override the trial count");
    sub->add_option("--base-seed", opt.base_seed, "override the base seed")
        ->each([&](const std::string&) { opt.base_seed_set = true; });
    sub->add_option("--out", opt.out, "write the report here instead of stdout");
    sub->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", opt.jobs, "run trials on this many threads");
    sub->callback([&, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : CSEL_ERR_CONFIG;
  }
  return run(command, opt);
}
