// SPDX-License-Identifier: Apache-2.0
#include "jutap/dqn.hpp"

#include <chrono>
#include <cmath>

namespace jutap {

const char* to_string(EpsilonSchedule s) { return s == EpsilonSchedule::PerEpisode ? "per_episode" : "per_step"; }

EpsilonSchedule epsilon_schedule_from_string(const std::string& s) {
  if (s == "per_episode") return EpsilonSchedule::PerEpisode;
  if (s == "per_step") return EpsilonSchedule::PerStep;
  throw std::invalid_argument("unknown epsilon schedule: " + s);
}

double TrainerConfig::epsilon(long long k) const {
  return std::max(epsilon_min, epsilon_start * std::pow(epsilon_decay, double(k)));
}

void TrainerConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("trainer: gamma must be in (0, 1]");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("trainer: tau must be in (0, 1]");
  if (!(epsilon_min <= epsilon_start)) throw std::invalid_argument("trainer: epsilon_min must not exceed epsilon_start");
  if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0)) throw std::invalid_argument("trainer: epsilon_decay must be in (0, 1]");
  if (learning_rate < 0.0) throw std::invalid_argument("trainer: learning_rate must be non-negative");
  if (episodes < 0 || step_cap < 1 || batch_size < 1 || buffer_capacity < 1)
    throw std::invalid_argument("trainer: counts must be positive");
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("trainer: hidden widths must be positive");
}

MatXd encode_states(std::span<const MdpState> states, const GridSpec& grid) {
  MatXd out(3, Index(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) out.col(Index(i)) = encode_state(states[i], grid);
  return out;
}

DqnAgent DqnAgent::create(const TrainerConfig& cfg, Rng& rng) {
  std::vector<int> widths{3};
  widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
  widths.push_back(kActionCount);
  DqnAgent agent{Network(widths), Network(widths), {}};
  agent.online.initialize(rng);
  agent.target = agent.online;
  agent.optimizer = Adam<float>(agent.online.parameter_count(), cfg.learning_rate);
  return agent;
}

namespace {

MdpState random_start(const Scenario& scenario, Rng& rng) {
  const GridSpec& grid = scenario.grid();
  const int end = grid.flat(scenario.end());
  int k = static_cast<int>(rng.below(std::uint64_t(grid.cell_count() - 1)));
  if (k >= end) ++k;
  return {grid.unflat(k), 0};
}

}  // namespace

TrainResult train(const Scenario& scenario, const TrainerConfig& cfg) {
  cfg.validate();
  if (scenario.grid().cell_count() < 2) throw std::invalid_argument("train: grid must have at least two cells");
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);
  TrainResult result{DqnAgent::create(cfg, rng), {}};
  DqnAgent& agent = result.agent;
  ReplayBuffer buffer(static_cast<std::size_t>(cfg.buffer_capacity));
  const GridSpec& grid = scenario.grid();

  double epsilon = cfg.epsilon_start;
  long long total_steps = 0;
  result.record.seed = cfg.seed;
  result.record.episode_rewards.reserve(std::size_t(cfg.episodes));

  for (int e = 1; e <= cfg.episodes; ++e) {
    Episode episode(scenario, random_start(scenario, rng), cfg.step_cap);
    double episode_reward = 0.0;
    while (!episode.done()) {
      const MdpState s = episode.state();
      const PlannerAction a = select_action(agent.online, s, grid, epsilon, valid_actions(s, grid), rng);
      const StepOutcome o = episode.advance(a);
      // Step-cap truncation still bootstraps; only true terminal states do not.
      const bool terminal =
          o.done_reason == DoneReason::ReachedEnd || o.done_reason == DoneReason::EnergyExhausted;
      buffer.push({s, a.index(), o.reward, o.next_state, valid_actions(o.next_state, grid), terminal});
      if (buffer.size() >= std::size_t(cfg.batch_size)) {
        const auto batch = buffer.sample(std::size_t(cfg.batch_size), rng);
        td_update(agent.online, agent.target, agent.optimizer, std::span<const Transition>(batch), grid, cfg.gamma);
        soft_update(agent.target, agent.online, float(cfg.tau));
      }
      episode_reward += o.reward;
      ++total_steps;
      if (cfg.epsilon_schedule == EpsilonSchedule::PerStep) epsilon = cfg.epsilon(total_steps);
    }
    result.record.episode_rewards.push_back(episode_reward);
    if (cfg.epsilon_schedule == EpsilonSchedule::PerEpisode) epsilon = cfg.epsilon(e);
  }

  result.record.trajectory = greedy_rollout(agent.online, scenario, {scenario.start(), 0}, cfg.step_cap);
  result.record.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

Trajectory greedy_rollout(const Network& net, const Scenario& scenario, MdpState start, int max_steps) {
  const GridSpec& grid = scenario.grid();
  const Policy policy = [&](const MdpState& s) {
    const VecX<float> q = net.forward(encode_state(s, grid)).col(0);
    return PlannerAction::from_index(masked_argmax<float>(q, valid_actions(s, grid)));
  };
  return rollout(scenario, policy, start, max_steps);
}

}  // namespace jutap
