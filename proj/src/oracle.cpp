// SPDX-License-Identifier: Apache-2.0
#include "jutap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace jutap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
  int to;
  int action;
  double cost;
  bool diagonal;
};

struct ProductGraph {
  int node_count = 0;
  std::vector<std::vector<Edge>> out;
};

int node_id(const MdpState& s, const GridSpec& g) { return g.flat(s.grid) * 2 + s.assoc_mode; }
MdpState node_state(int id, const GridSpec& g) { return {g.unflat(id / 2), id % 2}; }

ProductGraph build_graph(const Scenario& scenario) {
  const GridSpec& grid = scenario.grid();
  ProductGraph g;
  g.node_count = grid.cell_count() * 2;
  g.out.resize(std::size_t(g.node_count));
  for (int id = 0; id < g.node_count; ++id) {
    const MdpState s = node_state(id, grid);
    if (s.grid == scenario.end()) continue;  // terminal
    for (const PlannerAction& a : valid_action_list(s, grid)) {
      const StepOutcome o = step(s, a, scenario, kInf);
      g.out[std::size_t(id)].push_back({node_id(o.next_state, grid), a.index(), -o.reward, a.direction.diagonal()});
    }
  }
  return g;
}

std::vector<PlannerAction> trace(int target, const std::vector<int>& pred_node, const std::vector<int>& pred_action) {
  std::vector<PlannerAction> actions;
  for (int v = target; pred_node[std::size_t(v)] >= 0; v = pred_node[std::size_t(v)])
    actions.push_back(PlannerAction::from_index(pred_action[std::size_t(v)]));
  std::reverse(actions.begin(), actions.end());
  return actions;
}

/// Bellman-Ford from `source`; throws NegativeCycleError if a reachable negative cycle exists.
std::vector<PlannerAction> shortest_path(const Scenario& scenario, const ProductGraph& g, int source) {
  const GridSpec& grid = scenario.grid();
  std::vector<double> dist(std::size_t(g.node_count), kInf);
  std::vector<int> pred_node(std::size_t(g.node_count), -1);
  std::vector<int> pred_action(std::size_t(g.node_count), -1);
  dist[std::size_t(source)] = 0.0;

  int relaxed_node = -1;
  for (int round = 0; round < g.node_count; ++round) {
    relaxed_node = -1;
    for (int u = 0; u < g.node_count; ++u) {
      if (dist[std::size_t(u)] == kInf) continue;
      for (const Edge& e : g.out[std::size_t(u)]) {
        const double cand = dist[std::size_t(u)] + e.cost;
        // Relative slack keeps float noise on equal-cost paths from registering as progress.
        if (cand < dist[std::size_t(e.to)] - 1e-12 * (1.0 + std::abs(cand))) {
          dist[std::size_t(e.to)] = cand;
          pred_node[std::size_t(e.to)] = u;
          pred_action[std::size_t(e.to)] = e.action;
          relaxed_node = e.to;
        }
      }
    }
    if (relaxed_node < 0) break;
  }
  if (relaxed_node >= 0) {
    int v = relaxed_node;
    for (int k = 0; k < g.node_count && pred_node[std::size_t(v)] >= 0; ++k) v = pred_node[std::size_t(v)];
    std::vector<MdpState> cycle;
    int w = v;
    do {
      cycle.push_back(node_state(w, grid));
      w = pred_node[std::size_t(w)];
    } while (w >= 0 && w != v && int(cycle.size()) <= g.node_count);
    std::reverse(cycle.begin(), cycle.end());
    std::string message =
        "exact_optimum: negative-cost cycle of length " + std::to_string(cycle.size()) + " reachable from START";
    throw NegativeCycleError(std::move(message), std::move(cycle));
  }

  int best = -1;
  for (int mode = 0; mode < 2; ++mode) {
    const int id = node_id({scenario.end(), mode}, grid);
    if (dist[std::size_t(id)] < kInf && (best < 0 || dist[std::size_t(id)] < dist[std::size_t(best)])) best = id;
  }
  if (best < 0) throw std::runtime_error("exact_optimum: END unreachable");
  return trace(best, pred_node, pred_action);
}

/// Exact search with the energy constraint: nodes are layered by (diagonal, cardinal) move
/// counts, which fix the distance flown. Each layer adds one move, so the layered graph is
/// acyclic and a forward sweep suffices.
std::vector<PlannerAction> budgeted_path(const Scenario& scenario, const ProductGraph& g, int source) {
  const GridSpec& grid = scenario.grid();
  const auto& cfg = scenario.config;
  const double budget = scenario.available_energy();
  const double e_card = trip_energy(cfg.energy.cruise_speed_mps, move_distance(Direction{1}, grid), cfg.propulsion);
  const double e_diag = trip_energy(cfg.energy.cruise_speed_mps, move_distance(Direction{5}, grid), cfg.propulsion);
  const int max_steps = static_cast<int>(std::floor(budget / std::min(e_card, e_diag)));
  const int max_diag = static_cast<int>(std::floor(budget / e_diag));
  const int width = max_diag + 1;
  const std::size_t layer = std::size_t(g.node_count) * std::size_t(width);

  // cost[k][node * width + diag]; predecessor encoded as (prev slot, action).
  std::vector<std::vector<double>> cost(std::size_t(max_steps) + 1, std::vector<double>(layer, kInf));
  std::vector<std::vector<int>> pred_slot(std::size_t(max_steps) + 1, std::vector<int>(layer, -1));
  std::vector<std::vector<signed char>> pred_action(std::size_t(max_steps) + 1, std::vector<signed char>(layer, -1));
  cost[0][std::size_t(source) * width] = 0.0;

  double best = kInf;
  int best_k = -1;
  int best_slot = -1;
  for (int k = 0; k <= max_steps; ++k) {
    for (std::size_t slot = 0; slot < layer; ++slot) {
      const double c = cost[std::size_t(k)][slot];
      if (c == kInf) continue;
      const int node = int(slot / std::size_t(width));
      const int diag = int(slot % std::size_t(width));
      if (node_state(node, grid).grid == scenario.end()) {
        if (c < best) {
          best = c;
          best_k = k;
          best_slot = int(slot);
        }
        continue;
      }
      if (k == max_steps) continue;
      for (const Edge& e : g.out[std::size_t(node)]) {
        const int nd = diag + (e.diagonal ? 1 : 0);
        const int nc = k + 1 - nd;
        if (nd > max_diag || nd * e_diag + nc * e_card > budget) continue;
        const std::size_t to = std::size_t(e.to) * width + std::size_t(nd);
        if (c + e.cost < cost[std::size_t(k) + 1][to]) {
          cost[std::size_t(k) + 1][to] = c + e.cost;
          pred_slot[std::size_t(k) + 1][to] = int(slot);
          pred_action[std::size_t(k) + 1][to] = static_cast<signed char>(e.action);
        }
      }
    }
  }
  if (best_k < 0) throw InfeasibleBudgetError("exact_optimum: no path to END fits the energy budget");

  std::vector<PlannerAction> actions;
  for (int k = best_k, slot = best_slot; k > 0; --k) {
    actions.push_back(PlannerAction::from_index(pred_action[std::size_t(k)][std::size_t(slot)]));
    slot = pred_slot[std::size_t(k)][std::size_t(slot)];
  }
  std::reverse(actions.begin(), actions.end());
  return actions;
}

}  // namespace

double path_cost(const Trajectory& t) { return -t.summary.total_reward; }

OracleResult exact_optimum(const Scenario& scenario) {
  const MdpState start{scenario.start(), 0};
  OracleResult result;
  if (start.grid == scenario.end()) {
    result.trajectory = replay(scenario, {}, start);
    return result;
  }
  const double budget = scenario.available_energy();
  const ProductGraph g = build_graph(scenario);
  const int source = node_id(start, scenario.grid());

  result.actions = shortest_path(scenario, g, source);
  result.trajectory = replay(scenario, result.actions, start);
  if (result.trajectory.summary.energy_j > budget) {
    result.budget_constrained = true;
    result.actions = budgeted_path(scenario, g, source);
    result.trajectory = replay(scenario, result.actions, start);
  }
  result.feasible = result.trajectory.summary.energy_j <= budget;
  result.cost = path_cost(result.trajectory);
  return result;
}

}  // namespace jutap
