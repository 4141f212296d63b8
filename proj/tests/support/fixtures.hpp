// SPDX-License-Identifier: Apache-2.0
//
// Scenarios shared by the unit and acceptance tests.
#pragma once

#include "jutap/environment.hpp"

namespace jutap::testing {

inline std::vector<MbsSite> three_sites() {
  return {{{500, 500, 25}, EnvProfile::UrbanMacro, {0, 120, 240}},
          {{2000, 1500, 35}, EnvProfile::RuralMacro, {30, 150, 270}},
          {{2500, 300, 25}, EnvProfile::UrbanMacro, {45, 165, 285}}};
}

/// 5x5 scenario whose coverage map is written by hand: serving MBS (r + c) % 3, a
/// terrestrial hole wherever (5r + c) % 4 == 1 and a GEO outage wherever (r + 2c) % 7 == 0.
inline Scenario hand_built_5x5(RewardWeights w = {}) {
  ScenarioConfig cfg;
  cfg.grid.cells_per_side = 5;
  cfg.mbs_count = 3;
  cfg.weights = w;
  Scenario s = make_scenario(cfg, three_sites(), 0);
  std::vector<CoverageCell> cells;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      CoverageCell cell;
      cell.best_mbs = (r + c) % 3;
      cell.best_sinr_db = (5 * r + c) % 4 == 1 ? -3.0 : 6.0 + r - c;
      cell.geo_snr_db = (r + 2 * c) % 7 == 0 ? -2.0 : 3.1;
      cell.terrestrial_hole = cell.best_sinr_db < cfg.threshold_db;
      cell.global_hole = cell.terrestrial_hole && cell.geo_snr_db < cfg.threshold_db;
      cells.push_back(cell);
    }
  s.coverage = CoverageMap(5, std::move(cells));
  return s;
}

/// Uniformly covered n x n grid served by a single MBS at the center.
inline Scenario single_mbs(int n, RewardWeights w) {
  ScenarioConfig cfg;
  cfg.grid.cells_per_side = n;
  cfg.grid.area_side_m = 120.0 * n;
  cfg.mbs_count = 1;
  cfg.weights = w;
  cfg.threshold_db = -INFINITY;
  const double mid = cfg.grid.area_side_m / 2;
  return make_scenario(cfg, {{{mid, mid, 25}, EnvProfile::UrbanMacro, {0, 120, 240}}}, 0);
}

/// Desk-scale configuration: 10x10 cells over 3 km.
inline ScenarioConfig desk_config(RewardWeights w = {0.4, 0.2, 0.4}) {
  ScenarioConfig cfg;
  cfg.grid.cells_per_side = 10;
  cfg.weights = w;
  return cfg;
}

}  // namespace jutap::testing
