#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cyclegame/commands.hpp"
#include "cyclegame/errors.hpp"

namespace cli = cyclegame::cli;

namespace {

using Command = std::function<std::vector<std::filesystem::path>(const cli::RunConfig&)>;

struct Options {
  std::string config;
  std::map<std::string, std::string> values;  // flag name -> raw value
  std::vector<std::string> inputs;
};

void add_flags(CLI::App* sub, Options& opts) {
  sub->add_option("--config", opts.config, "flat key=value config file; flags override it");
  const std::pair<const char*, const char*> flags[] = {
      {"a", "treatment values, comma separated"},
      {"model", "theory models T1..T5, logit, replicator, ms-replicator"},
      {"protocol", "ABM protocols S1..S5 or logit"},
      {"noise", "logit noise for the generic logit model/protocol"},
      {"steps", "ODE steps"},
      {"dt", "ODE step size"},
      {"ticks", "ABM ticks"},
      {"seed", "root seed"},
      {"sessions", "surrogate sessions per treatment"},
      {"periods", "periods per surrogate session"},
      {"players", "players per surrogate session"},
      {"window", "surrogate memory window"},
      {"temperature", "surrogate logit temperature"},
      {"perturbation", "linearized orbit offset"},
      {"amplitude", "ODE/manifold orbit offset"},
      {"sweep-min", "sweep lower a"},
      {"sweep-max", "sweep upper a"},
      {"sweep-count", "log-spaced sweep points"},
      {"flag-threshold", "correlation flag threshold"},
      {"write-trajectories", "write trajectory files (true/false)"},
      {"out", "output directory"},
  };
  for (const auto& [name, help] : flags) {
    sub->add_option_function<std::string>(
        std::string("--") + name, [&opts, key = std::string(name)](const std::string& v) { opts.values[key] = v; },
        help);
  }
  sub->add_option_function<std::string>(
         "--logit-convention", [&opts](const std::string& v) { opts.values["logit-convention"] = v; },
         "how logit noise enters the softmax")
      ->check(CLI::IsMember({"temperature", "gain"}));
  sub->add_option_function<std::string>(
         "--origin", [&opts](const std::string& v) { opts.values["origin"] = v; }, "angular momentum origin")
      ->check(CLI::IsMember({"fixed-point", "mean"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigencycle analysis of a cyclic four-strategy population game"};
  app.require_subcommand(1);

  Options opts;
  const std::map<std::string, std::pair<Command, const char*>> commands = {
      {"theory", {cli::cmd_theory, "eigen analysis of the mean-field models"}},
      {"simulate", {cli::cmd_simulate, "ODE, agent-based and surrogate-session runs"}},
      {"ingest", {cli::cmd_ingest, "validate session CSV files and measure them"}},
      {"measure", {cli::cmd_measure, "angular momentum of trajectory CSV files"}},
      {"compare", {cli::cmd_compare, "correlation, regression and t-test report"}},
      {"manifold", {cli::cmd_manifold, "pairwise projections of a finite-amplitude orbit"}},
      {"sweep", {cli::cmd_sweep, "eigencycle sets over a range of a"}},
  };
  std::map<CLI::App*, Command> handlers;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.second);
    add_flags(sub, opts);
    if (name == "ingest" || name == "measure" || name == "compare") {
      sub->add_option("inputs", opts.inputs, "input files")->required();
    }
    handlers[sub] = entry.first;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cli::RunConfig cfg = opts.config.empty() ? cli::RunConfig{} : cli::load_config(opts.config);
    for (const auto& [key, value] : opts.values) cli::apply_setting(cfg, key, value);
    if (!opts.inputs.empty()) cfg.inputs.assign(opts.inputs.begin(), opts.inputs.end());
    for (const auto& [sub, run] : handlers) {
      if (!sub->parsed()) continue;
      for (const auto& path : run(cfg)) std::printf("%s\n", path.string().c_str());
    }
    return 0;
  } catch (const cyclegame::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
