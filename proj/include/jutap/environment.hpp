// SPDX-License-Identifier: Apache-2.0
//
// Scenario generation and the planning MDP.
//
// A state is a grid cell plus the association mode (0 terrestrial, 1 GEO). An action is a
// move in one of eight directions together with the mode to use in the next cell, giving
// 16 actions encoded as (direction - 1) * 2 + mode. Moves that would leave the grid are
// masked out rather than penalized.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jutap/channel_models.hpp"
#include "jutap/energy_model.hpp"
#include "jutap/geo_spatial.hpp"

namespace jutap {

struct RewardWeights {
  double energy = 0.4;      // w1
  double handover = 0.2;    // w2
  double disconnect = 0.4;  // w3
};

struct HandoverCosts {
  double mbs_to_mbs = 1.0;
  double geo_to_mbs = 1.0;
  double mbs_to_geo = 5.0;
  double geo_stay = 0.5;
  double reconnect = -0.5;
};

/// How the disconnectivity indicator is decided.
enum class HoleSemantics {
  Resolved,  // the association chosen for the next cell is below threshold
  Grid,      // the next cell is a hole for every tier that is enabled
};

const char* to_string(HoleSemantics h);
HoleSemantics hole_semantics_from_string(const std::string& s);

struct ScenarioConfig {
  GridSpec grid{};
  int mbs_count = 10;
  double min_separation_m = 500.0;
  int placement_attempts = 100000;
  TerrestrialRadioParams terrestrial{};
  GeoRadioParams geo{};
  double threshold_db = -1.0;  // β
  GridIndex start{0, 0};
  /// Defaults to the top-right cell when unset.
  std::optional<GridIndex> end;
  RewardWeights weights{};
  HandoverCosts handover{};
  double terminal_bonus = 0.0;
  HoleSemantics hole_semantics = HoleSemantics::Resolved;
  PropulsionParams propulsion{};
  EnergyBudget energy{};
  bool geo_enabled = true;

  GridIndex end_cell() const {
    return end.value_or(GridIndex{grid.cells_per_side - 1, grid.cells_per_side - 1});
  }
  void validate() const;
};

struct Scenario {
  std::uint64_t seed = 0;
  ScenarioConfig config;
  std::vector<MbsSite> sites;
  CoverageMap coverage;

  const GridSpec& grid() const { return config.grid; }
  GridIndex start() const { return config.start; }
  GridIndex end() const { return config.end_cell(); }
  int mbs_count() const { return static_cast<int>(sites.size()); }
  double available_energy() const { return jutap::available_energy(config.energy, config.propulsion); }
};

/// Scenario from explicit sites; builds the coverage map.
Scenario make_scenario(const ScenarioConfig& config, std::vector<MbsSite> sites, std::uint64_t seed = 0);

/// Places `mbs_count` sites uniformly with the minimum-separation constraint (rejection
/// sampling), draws heights/profiles and sector rotations, then builds the coverage map.
/// Throws std::runtime_error naming the seed when placement fails within the attempt budget.
Scenario generate_scenario(std::uint64_t seed, const ScenarioConfig& config);

/// Recomputes the coverage map for the current config and sites.
void rebuild_coverage(Scenario& s);

// ---------------------------------------------------------------------------
// MDP types
// ---------------------------------------------------------------------------

inline constexpr int kDirectionCount = 8;
inline constexpr int kActionCount = 16;

/// 1..8 = left, right, up, down, up-right, up-left, down-right, down-left.
/// "up" is north (increasing row).
struct Direction {
  int code = 1;

  int drow() const;
  int dcol() const;
  bool diagonal() const { return code > 4; }
};

struct PlannerAction {
  Direction direction;
  int next_assoc = 0;

  int index() const { return (direction.code - 1) * 2 + next_assoc; }
  static PlannerAction from_index(int a);
};

struct MdpState {
  GridIndex grid;
  int assoc_mode = 0;

  friend bool operator==(const MdpState&, const MdpState&) = default;
};

/// Normalized network input [x, y, mode] with x, y in [0, 1].
Vec3d encode_state(const MdpState& s, const GridSpec& grid);

struct ResolvedAssociation {
  enum class Kind { Mbs, Hole, Geo };
  Kind kind = Kind::Hole;
  int mbs = -1;  // 0-based site index when kind == Mbs

  static ResolvedAssociation hole() { return {Kind::Hole, -1}; }
  static ResolvedAssociation geo() { return {Kind::Geo, -1}; }
  static ResolvedAssociation base_station(int b) { return {Kind::Mbs, b}; }

  bool is_hole() const { return kind == Kind::Hole; }
  /// Association indicator c: b in 1..N_B, N_B + 1 for a hole, N_B + 2 for GEO.
  int indicator(int mbs_count) const;

  friend bool operator==(const ResolvedAssociation&, const ResolvedAssociation&) = default;
};

enum class DoneReason { None, ReachedEnd, StepCap, EnergyExhausted };
const char* to_string(DoneReason r);

struct StepOutcome {
  MdpState next_state;
  ResolvedAssociation association;
  double reward = 0.0;
  double xi = 0.0;     // energy shaping
  double eta = 0.0;    // handover cost
  double delta = 0.0;  // disconnectivity
  double distance_m = 0.0;
  double energy_j = 0.0;
  bool done = false;
  DoneReason done_reason = DoneReason::None;
};

using ActionMask = std::uint16_t;

ActionMask valid_actions(const MdpState& s, const GridSpec& grid);
std::vector<PlannerAction> valid_action_list(const MdpState& s, const GridSpec& grid);
inline bool mask_has(ActionMask m, int a) { return (m >> a) & 1u; }

ResolvedAssociation resolve_association(const GridIndex& g, int assoc_mode, const Scenario& scenario);

double handover_cost(const ResolvedAssociation& prev, const ResolvedAssociation& next, const HandoverCosts& costs = {});

/// Normalized distance between two cell centers; 1 for opposite corners.
double normalized_distance(const GridIndex& a, const GridIndex& b, const GridSpec& grid);

double energy_shaping(Direction m, const GridIndex& next, const Scenario& scenario);

/// Physical leg length for a move from one cell to its neighbour.
double move_distance(Direction m, const GridSpec& grid);

/// One transition. Throws std::invalid_argument if the move leaves the grid.
StepOutcome step(const MdpState& s, const PlannerAction& a, const Scenario& scenario, double energy_remaining_j);

/// Episode bookkeeping on top of step(): step cap and the energy ledger.
class Episode {
 public:
  Episode(const Scenario& scenario, MdpState start, int step_cap);

  const MdpState& state() const { return state_; }
  int steps() const { return steps_; }
  double energy_used() const { return energy_used_; }
  bool done() const { return done_; }

  StepOutcome advance(const PlannerAction& a);

 private:
  const Scenario* scenario_;
  MdpState state_;
  int step_cap_;
  int steps_ = 0;
  double energy_budget_;
  double energy_used_ = 0.0;
  bool done_ = false;
};

}  // namespace jutap
