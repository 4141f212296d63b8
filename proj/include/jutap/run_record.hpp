// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "jutap/environment.hpp"

namespace jutap {

struct TrajectoryStep {
  int t = 0;
  MdpState state;  // state after the move
  int indicator = 0;  // resolved association c
  double xi = 0.0;
  double eta = 0.0;
  double delta = 0.0;
  double reward = 0.0;
  double distance_m = 0.0;
  double cumulative_energy_j = 0.0;
};

struct TrajectorySummary {
  int steps = 0;
  double length_m = 0.0;
  double handover_total = 0.0;
  int hole_steps = 0;
  double energy_j = 0.0;
  double total_reward = 0.0;
  double xi_total = 0.0;
  double delta_total = 0.0;
  bool reached_end = false;
  DoneReason done_reason = DoneReason::None;

  /// Cost of the path in the planning objective, −Σ r.
  double cost() const { return -total_reward; }
};

struct Trajectory {
  MdpState start;
  int start_indicator = 0;
  std::vector<TrajectoryStep> steps;
  TrajectorySummary summary;
};

/// Recomputes the summary from the step log alone.
TrajectorySummary summarize(const std::vector<TrajectoryStep>& steps, DoneReason reason);

using Policy = std::function<PlannerAction(const MdpState&)>;

/// Runs `policy` from `start` until END, the step cap, or energy exhaustion.
Trajectory rollout(const Scenario& scenario, const Policy& policy, MdpState start, int max_steps);

/// Replays a fixed action sequence; stops early if the episode ends.
Trajectory replay(const Scenario& scenario, const std::vector<PlannerAction>& actions, MdpState start);

struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<double> episode_rewards;
  Trajectory trajectory;
  double wall_clock_s = 0.0;
};

}  // namespace jutap
