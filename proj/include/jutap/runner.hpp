// SPDX-License-Identifier: Apache-2.0
//
// Command implementations behind the `jutap` executable. Each command resolves an
// effective config (defaults, then the config file, then --set overrides, then dedicated
// flags), writes it into the run directory, and produces its artifacts there.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jutap/oracle.hpp"
#include "jutap/scenario_io.hpp"

namespace jutap {

namespace fs = std::filesystem;

enum class Method { Dqn, Tabular, Oracle };
const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct CommandOptions {
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> config;
  std::optional<fs::path> out;  // defaults to ./run, or the run directory for evaluate
  std::vector<std::string> overrides;  // "dotted.key=value"
  std::optional<fs::path> scenario;
  std::optional<fs::path> run_dir;  // evaluate only
  std::optional<std::array<double, 3>> weights;
  bool no_geo = false;
  std::optional<int> episodes;
  std::optional<Method> method;
};

/// Everything needed to rerun a command: written to config.json in the run directory.
struct EffectiveConfig {
  std::uint64_t seed = 0;
  std::uint64_t scenario_seed = 0;
  std::string method = "dqn";
  ScenarioConfig scenario;
  TrainerConfig trainer;
};

json to_json(const EffectiveConfig& c);

/// Sets `doc[key]` for a dotted key; the key must already exist. The value is parsed as
/// JSON when possible and taken as a string otherwise.
void apply_override(json& doc, const std::string& assignment);

/// Merges defaults, the config file, overrides and flags. When `base` is given (a scenario
/// read from disk) its config and seed replace the defaults.
EffectiveConfig resolve_config(const CommandOptions& opts, const Scenario* base = nullptr);

/// Holds `<dir>/.lock`, created exclusively; a second holder fails.
class RunLock {
 public:
  explicit RunLock(const fs::path& dir);
  ~RunLock();
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  fs::path path_;
};

struct CommandResult {
  json summary;      // machine-readable, also written to the run directory
  std::string text;  // human-readable report for stdout
};

CommandResult cmd_generate(const CommandOptions& opts);
CommandResult cmd_train(const CommandOptions& opts);
CommandResult cmd_evaluate(const CommandOptions& opts);
CommandResult cmd_oracle(const CommandOptions& opts);
CommandResult cmd_ablate(const CommandOptions& opts);

/// Oracle solution with cost decomposition, as written by `oracle`.
json oracle_report(const OracleResult& r, const Scenario& s);

}  // namespace jutap
