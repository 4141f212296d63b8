// SPDX-License-Identifier: Apache-2.0
//
// Deep Q-learning with experience replay and a softly tracking target network.
#pragma once

#include <bit>
#include <span>
#include <string>
#include <vector>

#include "jutap/environment.hpp"
#include "jutap/q_network.hpp"
#include "jutap/replay_buffer.hpp"
#include "jutap/rng.hpp"
#include "jutap/run_record.hpp"

namespace jutap {

enum class EpsilonSchedule { PerEpisode, PerStep };
const char* to_string(EpsilonSchedule s);
EpsilonSchedule epsilon_schedule_from_string(const std::string& s);

struct TrainerConfig {
  double gamma = 1.0;
  double tau = 0.005;
  double learning_rate = 1e-3;
  double epsilon_start = 1.0;
  double epsilon_min = 0.1;
  double epsilon_decay = 0.999;  // λ
  EpsilonSchedule epsilon_schedule = EpsilonSchedule::PerEpisode;
  int episodes = 10000;
  int step_cap = 1000;
  int batch_size = 64;
  int buffer_capacity = 50000;
  std::vector<int> hidden{128, 128};
  std::uint64_t seed = 0;
  /// Tabular baseline only.
  double tabular_learning_rate = 0.5;
  long long max_table_entries = 1'000'000;

  /// ε after `k` decay events: max(ε_min, ε0 λ^k).
  double epsilon(long long k) const;
  void validate() const;
};

using Network = QNetwork<float>;

/// Valid-action argmax; ties go to the lowest action index.
template <typename Scalar>
int masked_argmax(const Eigen::Ref<const VecX<Scalar>>& values, ActionMask mask) {
  int best = -1;
  for (int a = 0; a < int(values.size()); ++a)
    if (mask_has(mask, a) && (best < 0 || values[a] > values[best])) best = a;
  if (best < 0) throw std::invalid_argument("masked_argmax: no valid action");
  return best;
}

/// ε-greedy over the valid actions.
template <typename Scalar>
PlannerAction select_action(const QNetwork<Scalar>& net, const MdpState& s, const GridSpec& grid, double epsilon,
                            ActionMask valid, Rng& rng) {
  if (valid == 0) throw std::invalid_argument("select_action: empty valid action set");
  if (rng.uniform() < epsilon) {
    int pick = static_cast<int>(rng.below(std::popcount(valid)));
    for (int a = 0; a < kActionCount; ++a)
      if (mask_has(valid, a) && pick-- == 0) return PlannerAction::from_index(a);
  }
  const VecX<Scalar> q = net.forward(encode_state(s, grid)).col(0);
  return PlannerAction::from_index(masked_argmax<Scalar>(q, valid));
}

/// Input columns for a batch of states.
MatXd encode_states(std::span<const MdpState> states, const GridSpec& grid);

/// y = r for terminal transitions, r + γ max_{a' valid} Q_target(s', a') otherwise.
template <typename Scalar>
VecX<Scalar> td_targets(const QNetwork<Scalar>& target, std::span<const Transition> batch, const GridSpec& grid,
                        double gamma) {
  std::vector<MdpState> next;
  next.reserve(batch.size());
  for (const auto& t : batch) next.push_back(t.next_state);
  const MatX<Scalar> q_next = target.forward(encode_states(next, grid));
  VecX<Scalar> y(Index(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& t = batch[i];
    y[Index(i)] = Scalar(t.reward);
    if (!t.terminal && gamma != 0.0) {
      const int best = masked_argmax<Scalar>(q_next.col(Index(i)), t.next_mask);
      y[Index(i)] += Scalar(gamma) * q_next(best, Index(i));
    }
  }
  return y;
}

/// TD loss and its parameter gradient for `online` against fixed targets from `target`.
template <typename Scalar>
Scalar td_loss_and_gradient(const QNetwork<Scalar>& online, const QNetwork<Scalar>& target,
                            std::span<const Transition> batch, const GridSpec& grid, double gamma,
                            VecX<Scalar>& grad) {
  if (batch.empty()) throw std::invalid_argument("td_update: empty batch");
  std::vector<MdpState> states;
  std::vector<int> actions;
  for (const auto& t : batch) {
    states.push_back(t.state);
    actions.push_back(t.action);
  }
  const VecX<Scalar> y = td_targets(target, batch, grid, gamma);
  return online.loss_and_gradient(encode_states(states, grid), actions, y, grad);
}

/// One optimizer step on the online network; returns the pre-step loss.
template <typename Scalar>
Scalar td_update(QNetwork<Scalar>& online, const QNetwork<Scalar>& target, Adam<Scalar>& optimizer,
                 std::span<const Transition> batch, const GridSpec& grid, double gamma) {
  VecX<Scalar> grad;
  const Scalar loss = td_loss_and_gradient(online, target, batch, grid, gamma, grad);
  if (!std::isfinite(double(loss)) || !grad.allFinite())
    throw std::domain_error("td_update: non-finite loss (" + std::to_string(double(loss)) + ") over batch of " +
                            std::to_string(batch.size()));
  optimizer.step(online.parameters(), grad);
  return loss;
}

/// Online/target pair plus optimizer state: everything a checkpoint holds.
struct DqnAgent {
  Network online;
  Network target;
  Adam<float> optimizer;

  static DqnAgent create(const TrainerConfig& cfg, Rng& rng);
};

struct TrainResult {
  DqnAgent agent;
  RunRecord record;
};

/// Trains from random start cells, then rolls the greedy policy out from the scenario START.
TrainResult train(const Scenario& scenario, const TrainerConfig& cfg);

Trajectory greedy_rollout(const Network& net, const Scenario& scenario, MdpState start, int max_steps);

}  // namespace jutap
