// SPDX-License-Identifier: Apache-2.0
#include "jutap/tabular_q.hpp"

#include <chrono>

namespace jutap {

QTable::QTable(const GridSpec& grid, double init)
    : grid_(grid), values_(MatXd::Constant(Index(grid.cell_count()) * 2, kActionCount, init)) {}

int QTable::greedy(const MdpState& s, ActionMask valid) const {
  return masked_argmax<double>(values_.row(row(s)).transpose(), valid);
}

TabularResult tabular_q_learning(const Scenario& scenario, const TrainerConfig& cfg) {
  cfg.validate();
  if (scenario.grid().cell_count() < 2) throw std::invalid_argument("train: grid must have at least two cells");
  const GridSpec& grid = scenario.grid();
  const long long entries = 2LL * grid.cell_count() * kActionCount;
  if (entries > cfg.max_table_entries)
    throw std::length_error("tabular_q_learning: table of " + std::to_string(entries) + " entries exceeds limit " +
                            std::to_string(cfg.max_table_entries));
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);
  TabularResult result{QTable(grid), {}};
  QTable& q = result.table;
  result.record.seed = cfg.seed;

  const int end = grid.flat(scenario.end());
  double epsilon = cfg.epsilon_start;
  long long total_steps = 0;
  for (int e = 1; e <= cfg.episodes; ++e) {
    int k = static_cast<int>(rng.below(std::uint64_t(grid.cell_count() - 1)));
    if (k >= end) ++k;
    Episode episode(scenario, {grid.unflat(k), 0}, cfg.step_cap);
    double episode_reward = 0.0;
    while (!episode.done()) {
      const MdpState s = episode.state();
      const ActionMask valid = valid_actions(s, grid);
      int a;
      if (rng.uniform() < epsilon) {
        int pick = static_cast<int>(rng.below(std::popcount(valid)));
        for (a = 0; a < kActionCount; ++a)
          if (mask_has(valid, a) && pick-- == 0) break;
      } else {
        a = q.greedy(s, valid);
      }
      const StepOutcome o = episode.advance(PlannerAction::from_index(a));
      const bool terminal =
          o.done_reason == DoneReason::ReachedEnd || o.done_reason == DoneReason::EnergyExhausted;
      double target = o.reward;
      if (!terminal) {
        const MdpState& n = o.next_state;
        target += cfg.gamma * q.at(n, q.greedy(n, valid_actions(n, grid)));
      }
      q.at(s, a) += cfg.tabular_learning_rate * (target - q.at(s, a));
      episode_reward += o.reward;
      ++total_steps;
      if (cfg.epsilon_schedule == EpsilonSchedule::PerStep) epsilon = cfg.epsilon(total_steps);
    }
    result.record.episode_rewards.push_back(episode_reward);
    if (cfg.epsilon_schedule == EpsilonSchedule::PerEpisode) epsilon = cfg.epsilon(e);
  }
  result.record.trajectory = greedy_rollout(q, scenario, {scenario.start(), 0}, cfg.step_cap);
  result.record.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

Trajectory greedy_rollout(const QTable& table, const Scenario& scenario, MdpState start, int max_steps) {
  const GridSpec& grid = scenario.grid();
  const Policy policy = [&](const MdpState& s) {
    return PlannerAction::from_index(table.greedy(s, valid_actions(s, grid)));
  };
  return rollout(scenario, policy, start, max_steps);
}

}  // namespace jutap
