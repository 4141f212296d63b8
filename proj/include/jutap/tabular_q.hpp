// SPDX-License-Identifier: Apache-2.0
//
// One-step tabular Q-learning baseline with the same reward, masking and ε schedule as
// the DQN trainer. Only practical for small grids.
#pragma once

#include "jutap/dqn.hpp"

namespace jutap {

class QTable {
 public:
  QTable() = default;
  QTable(const GridSpec& grid, double init = 0.0);

  int state_count() const { return int(values_.rows()); }
  double& at(const MdpState& s, int a) { return values_(row(s), a); }
  double at(const MdpState& s, int a) const { return values_(row(s), a); }
  const MatXd& values() const { return values_; }

  int greedy(const MdpState& s, ActionMask valid) const;

 private:
  Index row(const MdpState& s) const { return Index(grid_.flat(s.grid)) * 2 + s.assoc_mode; }

  GridSpec grid_;
  MatXd values_;
};

struct TabularResult {
  QTable table;
  RunRecord record;
};

/// Throws std::length_error when the table would exceed cfg.max_table_entries.
TabularResult tabular_q_learning(const Scenario& scenario, const TrainerConfig& cfg);

Trajectory greedy_rollout(const QTable& table, const Scenario& scenario, MdpState start, int max_steps);

}  // namespace jutap
