// SPDX-License-Identifier: Apache-2.0
//
// Exact planner over the product graph of (cell, association mode) nodes. Edge costs are
// the negated step rewards, so the minimum-cost path from (START, 0) to END is the optimal
// trajectory and association sequence. Reconnect bonuses make some edges negative, so a
// label-correcting method (Bellman-Ford) is used and negative cycles are reported.
#pragma once

#include <stdexcept>
#include <vector>

#include "jutap/environment.hpp"
#include "jutap/run_record.hpp"

namespace jutap {

class NegativeCycleError : public std::runtime_error {
 public:
  NegativeCycleError(const std::string& what, std::vector<MdpState> cycle)
      : std::runtime_error(what), cycle_(std::move(cycle)) {}
  const std::vector<MdpState>& cycle() const { return cycle_; }

 private:
  std::vector<MdpState> cycle_;
};

class InfeasibleBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  double cost = 0.0;
  std::vector<PlannerAction> actions;
  Trajectory trajectory;
  /// Σ leg energy ≤ E_A for the returned path.
  bool feasible = true;
  /// The unconstrained optimum broke the energy budget and the budget-layered search ran.
  bool budget_constrained = false;
};

OracleResult exact_optimum(const Scenario& scenario);

/// Product-graph cost of a trajectory: −Σ r over its steps.
double path_cost(const Trajectory& t);

}  // namespace jutap
