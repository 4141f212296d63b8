// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "../support/fixtures.hpp"
#include "jutap/run_record.hpp"

using namespace jutap;
using jutap::testing::hand_built_5x5;
using jutap::testing::single_mbs;

namespace {

PlannerAction act(int direction, int mode) { return {Direction{direction}, mode}; }

}  // namespace

TEST_SUITE("environment") {

TEST_CASE("action encoding") {
  std::set<int> seen;
  for (int m = 1; m <= 8; ++m)
    for (int c = 0; c < 2; ++c) {
      const PlannerAction a = act(m, c);
      CHECK(a.index() == (m - 1) * 2 + c);
      seen.insert(a.index());
      const PlannerAction b = PlannerAction::from_index(a.index());
      CHECK(b.direction.code == m);
      CHECK(b.next_assoc == c);
    }
  CHECK(seen.size() == 16);
  CHECK_THROWS_AS(PlannerAction::from_index(16), std::out_of_range);
  CHECK_THROWS_AS(PlannerAction::from_index(-1), std::out_of_range);
}

TEST_CASE("direction offsets") {
  // left, right, up, down, up-right, up-left, down-right, down-left; up is +row.
  const int dr[] = {0, 0, 1, -1, 1, 1, -1, -1};
  const int dc[] = {-1, 1, 0, 0, 1, -1, 1, -1};
  for (int m = 1; m <= 8; ++m) {
    CHECK(Direction{m}.drow() == dr[m - 1]);
    CHECK(Direction{m}.dcol() == dc[m - 1]);
    CHECK(Direction{m}.diagonal() == (m > 4));
  }
}

TEST_CASE("valid action counts") {
  const GridSpec g;
  CHECK(valid_action_list({{5, 5}, 0}, g).size() == 16);
  CHECK(valid_action_list({{0, 0}, 0}, g).size() == 6);
  CHECK(valid_action_list({{24, 24}, 1}, g).size() == 6);
  CHECK(valid_action_list({{0, 7}, 0}, g).size() == 10);
  CHECK(valid_action_list({{13, 24}, 0}, g).size() == 10);
  for (const auto& a : valid_action_list({{0, 0}, 0}, g)) {
    CHECK(a.direction.drow() >= 0);
    CHECK(a.direction.dcol() >= 0);
  }
}

TEST_CASE("state encoding") {
  const GridSpec g;
  const Vec3d e = encode_state({{24, 12}, 1}, g);
  CHECK(e.x() == doctest::Approx(0.5));
  CHECK(e.y() == doctest::Approx(1.0));
  CHECK(e.z() == 1.0);
  CHECK(encode_state({{0, 0}, 0}, g).isZero());
}

TEST_CASE("association resolution") {
  const Scenario s = hand_built_5x5();
  const int nb = s.mbs_count();
  // (0,0): covered by MBS 0, GEO outage.
  CHECK(resolve_association({0, 0}, 0, s) == ResolvedAssociation::base_station(0));
  CHECK(resolve_association({0, 0}, 1, s).is_hole());
  // (0,1): terrestrial hole, GEO fine.
  CHECK(resolve_association({0, 1}, 0, s).is_hole());
  CHECK(resolve_association({0, 1}, 1, s) == ResolvedAssociation::geo());
  CHECK(resolve_association({0, 1}, 1, s).indicator(nb) == nb + 2);
  CHECK(resolve_association({0, 1}, 0, s).indicator(nb) == nb + 1);
  CHECK(resolve_association({1, 1}, 0, s).indicator(nb) == 3);

  Scenario no_geo = s;
  no_geo.config.geo_enabled = false;
  CHECK(resolve_association({0, 1}, 1, no_geo).is_hole());
  CHECK(resolve_association({1, 1}, 1, no_geo) == ResolvedAssociation::base_station(2));
}

TEST_CASE("GEO rescues terrestrial holes under default radio settings") {
  const Scenario s = generate_scenario(3, jutap::testing::desk_config());
  int holes = 0;
  for (int k = 0; k < s.grid().cell_count(); ++k) {
    const GridIndex g = s.grid().unflat(k);
    if (!s.coverage.at(g).terrestrial_hole) continue;
    ++holes;
    CHECK(resolve_association(g, 0, s).is_hole());
    CHECK(resolve_association(g, 1, s) == ResolvedAssociation::geo());
    CHECK(s.coverage.at(g).geo_snr_db == doctest::Approx(3.1).epsilon(0.02));
  }
  CHECK(holes > 0);
  CHECK(s.coverage.global_hole_count() == 0);
}

TEST_CASE("handover table") {
  using RA = ResolvedAssociation;
  const RA mbs3 = RA::base_station(3), mbs7 = RA::base_station(7), geo = RA::geo(), hole = RA::hole();
  CHECK(handover_cost(mbs3, mbs7) == 1.0);
  CHECK(handover_cost(mbs3, mbs3) == 0.0);
  CHECK(handover_cost(geo, mbs3) == 1.0);
  CHECK(handover_cost(mbs3, geo) == 5.0);
  CHECK(handover_cost(geo, geo) == 0.5);
  CHECK(handover_cost(hole, geo) == -0.5);
  CHECK(handover_cost(hole, mbs3) == -0.5);
  CHECK(handover_cost(mbs3, hole) == 0.0);
  CHECK(handover_cost(geo, hole) == 0.0);
  CHECK(handover_cost(hole, hole) == 0.0);
}

TEST_CASE("energy shaping") {
  const Scenario s = hand_built_5x5();
  CHECK(energy_shaping(Direction{2}, s.end(), s) == -1.0);
  CHECK(energy_shaping(Direction{5}, s.end(), s) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(energy_shaping(Direction{1}, {0, 0}, s) == doctest::Approx(-2.0));
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      CHECK(energy_shaping(Direction{3}, {r, c}, s) >= -2.0 - 1e-12);
      CHECK(energy_shaping(Direction{6}, {r, c}, s) <= -1.0 / std::sqrt(2.0) + 1e-12);
    }
}

TEST_CASE("step decomposition and displacement") {
  const Scenario s = hand_built_5x5({0.4, 0.2, 0.4});
  const double budget = s.available_energy();
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c)
      for (int m : {0, 1})
        for (const auto& a : valid_action_list({{r, c}, m}, s.grid())) {
          const StepOutcome o = step({{r, c}, m}, a, s, budget);
          CHECK(o.reward + (-0.4 * o.xi + 0.2 * o.eta + 0.4 * o.delta) == 0.0);
          CHECK(o.distance_m == doctest::Approx(a.direction.diagonal() ? 600 * std::sqrt(2.0) : 600.0));
          CHECK(o.energy_j == trip_energy(30.0, o.distance_m, s.config.propulsion));
        }
  CHECK_THROWS_AS(step({{0, 0}, 0}, act(1, 0), s, budget), std::invalid_argument);
  CHECK_THROWS_AS(step({{2, 2}, 0}, act(9, 0), s, budget), std::invalid_argument);
}

TEST_CASE("diagonal covered move without handover") {
  const Scenario s = hand_built_5x5({0.4, 0.2, 0.4});
  // (1,2) -> (2,1): both served by MBS 0, neither a hole.
  const StepOutcome o = step({{1, 2}, 0}, act(6, 0), s, s.available_energy());
  CHECK(o.eta == 0.0);
  CHECK(o.delta == 0.0);
  const double dnorm = std::hypot(2.0, 3.0) / (4 * std::sqrt(2.0));
  CHECK(o.reward == doctest::Approx(0.4 * (-1.0 / std::sqrt(2.0) - dnorm)));
}

TEST_CASE("energy-only weights ignore the association bit") {
  const Scenario s = hand_built_5x5({1.0, 0.0, 0.0});
  for (int m = 1; m <= 8; ++m) {
    const MdpState st{{2, 2}, 0};
    CHECK(step(st, act(m, 0), s, 1e9).reward == step(st, act(m, 1), s, 1e9).reward);
  }
}

TEST_CASE("a three-step episode against a hand recomputation") {
  const Scenario s = hand_built_5x5({0.4, 0.2, 0.4});
  Episode ep(s, {{0, 0}, 0}, 100);
  const StepOutcome a = ep.advance(act(5, 1));  // to (1,1), GEO ((1+2)%7 != 0)
  CHECK(a.association == ResolvedAssociation::geo());
  CHECK(a.eta == 5.0);
  CHECK(a.delta == 0.0);
  CHECK(a.xi == doctest::Approx(-1 / std::sqrt(2.0) - std::hypot(3, 3) / (4 * std::sqrt(2.0))));
  const StepOutcome b = ep.advance(act(3, 0));  // to (2,1): 5*2+1 = 11 -> covered by MBS 0
  CHECK(b.association == ResolvedAssociation::base_station(0));
  CHECK(b.eta == 1.0);
  CHECK(b.xi == doctest::Approx(-1 - std::hypot(2, 3) / (4 * std::sqrt(2.0))));
  const StepOutcome c = ep.advance(act(1, 0));  // to (2,0): 5*2+0 = 10 -> covered by MBS 2
  CHECK(c.association == ResolvedAssociation::base_station(2));
  CHECK(c.eta == 1.0);
  const StepOutcome d = ep.advance(act(4, 0));  // to (1,0): 5 % 4 == 1 -> hole
  CHECK(d.association.is_hole());
  CHECK(d.delta == 1.0);
  CHECK(d.eta == 0.0);
  const StepOutcome e = ep.advance(act(3, 1));  // to (2,0) on GEO: reconnect
  CHECK(e.association == ResolvedAssociation::geo());
  CHECK(e.eta == -0.5);
  double total = 0;
  for (const StepOutcome* o : {&a, &b, &c, &d, &e}) total += 0.4 * o->xi - 0.2 * o->eta - 0.4 * o->delta;
  CHECK(total == doctest::Approx(a.reward + b.reward + c.reward + d.reward + e.reward));
  CHECK(ep.steps() == 5);
  CHECK_FALSE(ep.done());
}

TEST_CASE("grid hole semantics") {
  Scenario s = hand_built_5x5();
  s.config.hole_semantics = HoleSemantics::Grid;
  // (0,1) is a terrestrial hole but GEO is fine: not a global hole.
  CHECK(step({{0, 0}, 0}, act(2, 0), s, 1e9).delta == 0.0);
  s.config.geo_enabled = false;
  CHECK(step({{0, 0}, 0}, act(2, 1), s, 1e9).delta == 1.0);
  CHECK(hole_semantics_from_string("grid") == HoleSemantics::Grid);
  CHECK_THROWS_AS(hole_semantics_from_string("cells"), std::invalid_argument);
}

TEST_CASE("geo disabled stores the mode as terrestrial") {
  Scenario s = hand_built_5x5();
  s.config.geo_enabled = false;
  const StepOutcome o = step({{0, 0}, 0}, act(3, 1), s, 1e9);
  CHECK(o.next_state.assoc_mode == 0);
}

TEST_CASE("termination") {
  const Scenario s = hand_built_5x5();
  SUBCASE("reaching END") {
    const StepOutcome o = step({{3, 3}, 0}, act(5, 0), s, 1e9);
    CHECK(o.done);
    CHECK(o.done_reason == DoneReason::ReachedEnd);
  }
  SUBCASE("terminal bonus") {
    Scenario t = s;
    t.config.terminal_bonus = 2.5;
    CHECK(step({{3, 3}, 0}, act(5, 0), t, 1e9).reward == step({{3, 3}, 0}, act(5, 0), s, 1e9).reward + 2.5);
  }
  SUBCASE("step cap") {
    Episode ep(s, {{0, 0}, 0}, 2);
    ep.advance(act(2, 0));
    const StepOutcome o = ep.advance(act(1, 0));
    CHECK(o.done_reason == DoneReason::StepCap);
    CHECK_THROWS_AS(ep.advance(act(2, 0)), std::logic_error);
  }
  SUBCASE("energy exhaustion takes priority") {
    const double leg = trip_energy(30.0, 600.0, s.config.propulsion);
    const StepOutcome o = step({{4, 3}, 0}, act(2, 0), s, leg * 0.5);
    CHECK(o.done_reason == DoneReason::EnergyExhausted);
  }
  SUBCASE("energy ledger across an episode") {
    Scenario t = s;
    const double leg = trip_energy(30.0, 600.0, t.config.propulsion);
    t.config.energy.capacity_j = t.config.energy.reserve_j +
                                 2 * trip_energy(30.0, t.config.energy.climb_distance_m, t.config.propulsion) +
                                 2.5 * leg;
    Episode ep(t, {{0, 0}, 0}, 100);
    double prev = 0;
    int n = 0;
    while (!ep.done()) {
      const StepOutcome o = ep.advance(act(2, 0));
      CHECK(ep.energy_used() >= prev);
      prev = ep.energy_used();
      ++n;
      if (o.done) CHECK(o.done_reason == DoneReason::EnergyExhausted);
    }
    CHECK(n == 3);
  }
  SUBCASE("starting at END") {
    Episode ep(s, {s.end(), 0}, 100);
    CHECK(ep.done());
  }
}

TEST_CASE("path length accounting") {
  ScenarioConfig cfg;
  cfg.threshold_db = -INFINITY;
  const Scenario s = make_scenario(cfg, jutap::testing::three_sites(), 0);
  std::vector<PlannerAction> diag(24, act(5, 0));
  const Trajectory t = replay(s, diag, {{0, 0}, 0});
  CHECK(t.summary.reached_end);
  CHECK(t.summary.length_m == doctest::Approx(4072.935059634514).epsilon(1e-12));
  std::vector<PlannerAction> mixed(20, act(5, 0));
  for (int k = 0; k < 4; ++k) mixed.push_back(act(2, 0));
  for (int k = 0; k < 4; ++k) mixed.push_back(act(3, 0));
  const Trajectory u = replay(s, mixed, {{0, 0}, 0});
  CHECK(u.summary.reached_end);
  CHECK(u.summary.length_m == doctest::Approx(4354.112549695428).epsilon(1e-12));
  CHECK(u.summary.energy_j == doctest::Approx(trip_energy(30, u.summary.length_m, s.config.propulsion)).epsilon(1e-12));
}

TEST_CASE("trajectory summary is recomputable from the step log") {
  const Scenario s = hand_built_5x5();
  const std::vector<PlannerAction> acts{act(5, 1), act(3, 0), act(1, 0), act(4, 0), act(3, 1), act(7, 0)};
  const Trajectory t = replay(s, acts, {{0, 0}, 0});
  const TrajectorySummary again = summarize(t.steps, t.summary.done_reason);
  CHECK(again.handover_total == t.summary.handover_total);
  CHECK(again.length_m == t.summary.length_m);
  CHECK(again.hole_steps == t.summary.hole_steps);
  CHECK(t.summary.hole_steps == 1);
  CHECK(t.summary.handover_total == doctest::Approx(5 + 1 + 1 + 0 - 0.5 + 1));
}

TEST_CASE("scenario generation") {
  const ScenarioConfig cfg = jutap::testing::desk_config();
  const Scenario a = generate_scenario(7, cfg);
  const Scenario b = generate_scenario(7, cfg);
  CHECK(a.coverage == b.coverage);
  REQUIRE(a.sites.size() == 10);
  for (std::size_t i = 0; i < a.sites.size(); ++i) {
    CHECK(a.sites[i].position == b.sites[i].position);
    CHECK(a.sites[i].position.z() == antenna_height(a.sites[i].profile));
    const auto& az = a.sites[i].sector_azimuths_deg;
    CHECK(az[1] - az[0] == doctest::Approx(120.0));
    CHECK(az[2] - az[1] == doctest::Approx(120.0));
    CHECK(az[0] >= 0.0);
    CHECK(az[0] < 120.0);
    CHECK(a.sites[i].position.x() >= 0.0);
    CHECK(a.sites[i].position.y() <= 3000.0);
    for (std::size_t k = i + 1; k < a.sites.size(); ++k)
      CHECK((a.sites[i].position - a.sites[k].position).head<2>().norm() >= 500.0);
  }
  const Scenario c = generate_scenario(8, cfg);
  CHECK_FALSE(c.sites[0].position == a.sites[0].position);
}

TEST_CASE("scenario generation failure names the seed") {
  ScenarioConfig cfg;
  cfg.mbs_count = 40;
  cfg.placement_attempts = 5000;
  try {
    generate_scenario(1234, cfg);
    FAIL("expected placement failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("seed 1234") != std::string::npos);
  }
}

TEST_CASE("single MBS at the center serves every cell") {
  const Scenario s = single_mbs(5, {});
  for (const auto& c : s.coverage.cells()) CHECK(c.best_mbs == 0);
}

TEST_CASE("config validation") {
  ScenarioConfig cfg;
  cfg.weights.handover = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.mbs_count = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.start = {25, 0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  CHECK(cfg.end_cell() == GridIndex{24, 24});
}

}  // TEST_SUITE
