// SPDX-License-Identifier: Apache-2.0
//
// Persistence: JSON documents for configs, scenarios and checkpoints; comma-separated
// exports for coverage maps, trajectories and reward curves. Every file carries a
// format version and the seed it was produced with.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "jutap/dqn.hpp"
#include "jutap/environment.hpp"
#include "jutap/run_record.hpp"

namespace jutap {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Throws std::invalid_argument naming the first key of `given` absent from `canonical`.
void check_known_keys(const json& given, const json& canonical, const std::string& path = "");

json to_json(const ScenarioConfig& c);
json to_json(const TrainerConfig& c);

/// Strict readers: every key must be known, missing keys fall back to defaults.
ScenarioConfig scenario_config_from_json(const json& j);
TrainerConfig trainer_config_from_json(const json& j);

json scenario_to_json(const Scenario& s);
/// Rebuilds the coverage map and rejects documents whose stored map disagrees.
Scenario scenario_from_json(const json& j);

json checkpoint_to_json(const DqnAgent& agent, const TrainerConfig& cfg, std::uint64_t scenario_seed);
/// Throws std::invalid_argument on version or layer-shape mismatch.
DqnAgent checkpoint_from_json(const json& j, const TrainerConfig& expected);

json summary_to_json(const TrajectorySummary& s);

void write_coverage_csv(std::ostream& os, const Scenario& s);
void write_trajectory_csv(std::ostream& os, const Trajectory& t, const Scenario& s);
void write_rewards_csv(std::ostream& os, const std::vector<double>& rewards, std::uint64_t seed);

json read_json_file(const std::filesystem::path& p);
void write_json_file(const std::filesystem::path& p, const json& j);
void write_text_file(const std::filesystem::path& p, const std::string& text);
std::string read_text_file(const std::filesystem::path& p);

}  // namespace jutap
