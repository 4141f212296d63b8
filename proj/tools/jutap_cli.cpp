// SPDX-License-Identifier: Apache-2.0
//
// jutap: scenario generation, training, evaluation, oracle and ablation runs.
#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "jutap/runner.hpp"

namespace {

using jutap::json;

int fail(const std::string& command, const char* type, const std::string& message, json details = nullptr) {
  json err = {{"error", {{"command", command}, {"type", type}, {"message", message}}}};
  if (!details.is_null()) err["error"]["details"] = std::move(details);
  std::cerr << err.dump() << "\n";
  return 1;
}

void add_common(CLI::App* cmd, jutap::CommandOptions& o, std::string& method) {
  cmd->add_option("--seed", o.seed, "Run seed (also the scenario seed unless a scenario file is given)");
  cmd->add_option("--config", o.config, "JSON config file; a persisted config.json works")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Run directory to write");
  cmd->add_option("--set", o.overrides, "Override a config key, e.g. trainer.episodes=200")->take_all();
  cmd->add_option("--scenario", o.scenario, "Scenario file from a previous run")->check(CLI::ExistingFile);
  cmd->add_option("--weights", o.weights, "Reward weights w1 w2 w3")->delimiter(',');
  cmd->add_flag("--no-geo", o.no_geo, "Disable the GEO tier");
  cmd->add_option("--episodes", o.episodes, "Training episodes")->check(CLI::PositiveNumber);
  cmd->add_option("--method", method, "dqn, tabular or oracle")->check(CLI::IsMember({"dqn", "tabular", "oracle"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV trajectory planning over a joint terrestrial and GEO network", "jutap"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Print the machine-readable summary instead of the report");

  jutap::CommandOptions opts;
  std::string method;
  struct Entry {
    const char* name;
    const char* help;
    jutap::CommandResult (*run)(const jutap::CommandOptions&);
  };
  const Entry entries[] = {
      {"generate", "Place base stations and build the coverage map", jutap::cmd_generate},
      {"train", "Train a planner and roll it out from START", jutap::cmd_train},
      {"evaluate", "Greedy rollout of a trained run directory", jutap::cmd_evaluate},
      {"oracle", "Exact optimum over the product graph", jutap::cmd_oracle},
      {"ablate", "Integrated against terrestrial-only planning on one scenario", jutap::cmd_ablate},
  };
  for (const auto& e : entries) {
    CLI::App* cmd = app.add_subcommand(e.name, e.help);
    add_common(cmd, opts, method);
    if (std::string(e.name) == "evaluate")
      cmd->add_option("--run-dir", opts.run_dir, "Directory written by train")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name(), "usage", e.what());
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    if (!method.empty()) opts.method = jutap::method_from_string(method);
    for (const auto& e : entries) {
      if (name != e.name) continue;
      const jutap::CommandResult r = e.run(opts);
      std::cout << (as_json ? r.summary.dump(2) + "\n" : r.text);
      return 0;
    }
  } catch (const jutap::NegativeCycleError& e) {
    json cycle = json::array();
    for (const auto& s : e.cycle()) cycle.push_back({s.grid.row, s.grid.col, s.assoc_mode});
    return fail(name, "negative_cycle", e.what(), {{"cycle", cycle}});
  } catch (const jutap::InfeasibleBudgetError& e) {
    return fail(name, "infeasible_budget", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(name, "invalid_config", e.what());
  } catch (const json::exception& e) {
    return fail(name, "invalid_document", e.what());
  } catch (const std::exception& e) {
    return fail(name, "runtime", e.what());
  }
  return fail(name, "usage", "unknown command");
}
