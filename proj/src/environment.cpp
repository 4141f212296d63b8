// SPDX-License-Identifier: Apache-2.0
#include "jutap/environment.hpp"

#include <cmath>
#include <stdexcept>

#include "jutap/rng.hpp"

namespace jutap {

const char* to_string(HoleSemantics h) { return h == HoleSemantics::Resolved ? "resolved" : "grid"; }

HoleSemantics hole_semantics_from_string(const std::string& s) {
  if (s == "resolved") return HoleSemantics::Resolved;
  if (s == "grid") return HoleSemantics::Grid;
  throw std::invalid_argument("unknown hole semantics: " + s);
}

const char* to_string(DoneReason r) {
  switch (r) {
    case DoneReason::ReachedEnd: return "reached_end";
    case DoneReason::StepCap: return "step_cap";
    case DoneReason::EnergyExhausted: return "energy_exhausted";
    case DoneReason::None: break;
  }
  return "none";
}

void ScenarioConfig::validate() const {
  grid.validate();
  terrestrial.validate();
  geo.validate();
  propulsion.validate();
  energy.validate();
  if (mbs_count < 1) throw std::invalid_argument("scenario: mbs_count must be >= 1");
  if (min_separation_m < 0.0) throw std::invalid_argument("scenario: min_separation_m must be >= 0");
  if (!grid.contains(start) || !grid.contains(end_cell()))
    throw std::invalid_argument("scenario: start/end outside grid");
  if (weights.energy < 0.0 || weights.handover < 0.0 || weights.disconnect < 0.0)
    throw std::invalid_argument("scenario: weights must be non-negative");
}

Scenario make_scenario(const ScenarioConfig& config, std::vector<MbsSite> sites, std::uint64_t seed) {
  Scenario s{seed, config, std::move(sites), {}};
  rebuild_coverage(s);
  return s;
}

void rebuild_coverage(Scenario& s) {
  s.coverage =
      build_coverage_map(s.config.grid, s.sites, s.config.terrestrial, s.config.geo, s.config.threshold_db);
}

Scenario generate_scenario(std::uint64_t seed, const ScenarioConfig& config) {
  config.validate();
  Rng rng(seed);
  const double side = config.grid.area_side_m;
  const double min_sq = config.min_separation_m * config.min_separation_m;
  std::vector<MbsSite> sites;
  int attempts = 0;
  while (static_cast<int>(sites.size()) < config.mbs_count) {
    if (++attempts > config.placement_attempts)
      throw std::runtime_error("generate_scenario: could not place " + std::to_string(config.mbs_count) +
                               " sites with " + std::to_string(config.min_separation_m) +
                               " m separation (seed " + std::to_string(seed) + ")");
    const double x = rng.uniform(0.0, side);
    const double y = rng.uniform(0.0, side);
    bool ok = true;
    for (const auto& other : sites) {
      const double dx = other.position.x() - x;
      const double dy = other.position.y() - y;
      if (dx * dx + dy * dy < min_sq) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    MbsSite site;
    site.profile = rng.bernoulli(0.5) ? EnvProfile::UrbanMacro : EnvProfile::RuralMacro;
    site.position = {x, y, antenna_height(site.profile)};
    const double rotation = rng.uniform(0.0, 120.0);
    for (int k = 0; k < 3; ++k) site.sector_azimuths_deg[k] = rotation + 120.0 * k;
    sites.push_back(site);
  }
  return make_scenario(config, std::move(sites), seed);
}

// ---------------------------------------------------------------------------

namespace {
constexpr int kDrow[kDirectionCount] = {0, 0, 1, -1, 1, 1, -1, -1};
constexpr int kDcol[kDirectionCount] = {-1, 1, 0, 0, 1, -1, 1, -1};
}  // namespace

int Direction::drow() const { return kDrow[code - 1]; }
int Direction::dcol() const { return kDcol[code - 1]; }

PlannerAction PlannerAction::from_index(int a) {
  if (a < 0 || a >= kActionCount) throw std::out_of_range("PlannerAction: index outside [0, 16)");
  return {Direction{a / 2 + 1}, a % 2};
}

Vec3d encode_state(const MdpState& s, const GridSpec& grid) {
  const double span = grid.cells_per_side > 1 ? grid.cells_per_side - 1 : 1;
  return {s.grid.col / span, s.grid.row / span, static_cast<double>(s.assoc_mode)};
}

int ResolvedAssociation::indicator(int mbs_count) const {
  switch (kind) {
    case Kind::Mbs: return mbs + 1;
    case Kind::Hole: return mbs_count + 1;
    case Kind::Geo: return mbs_count + 2;
  }
  return mbs_count + 1;
}

ActionMask valid_actions(const MdpState& s, const GridSpec& grid) {
  ActionMask mask = 0;
  for (int code = 1; code <= kDirectionCount; ++code) {
    const Direction m{code};
    if (grid.contains({s.grid.row + m.drow(), s.grid.col + m.dcol()})) mask |= ActionMask(0b11u << ((code - 1) * 2));
  }
  return mask;
}

std::vector<PlannerAction> valid_action_list(const MdpState& s, const GridSpec& grid) {
  std::vector<PlannerAction> out;
  const ActionMask mask = valid_actions(s, grid);
  for (int a = 0; a < kActionCount; ++a)
    if (mask_has(mask, a)) out.push_back(PlannerAction::from_index(a));
  return out;
}

ResolvedAssociation resolve_association(const GridIndex& g, int assoc_mode, const Scenario& scenario) {
  const CoverageCell& cell = scenario.coverage.at(g);
  const double beta = scenario.config.threshold_db;
  // Without the satellite tier the mode bit has nothing to select.
  if (assoc_mode == 1 && scenario.config.geo_enabled)
    return cell.geo_snr_db >= beta ? ResolvedAssociation::geo() : ResolvedAssociation::hole();
  if (cell.best_mbs && cell.best_sinr_db >= beta) return ResolvedAssociation::base_station(*cell.best_mbs);
  return ResolvedAssociation::hole();
}

double handover_cost(const ResolvedAssociation& prev, const ResolvedAssociation& next, const HandoverCosts& costs) {
  using K = ResolvedAssociation::Kind;
  if (next.is_hole()) return 0.0;
  if (prev.is_hole()) return costs.reconnect;
  if (prev.kind == K::Mbs && next.kind == K::Mbs) return prev.mbs == next.mbs ? 0.0 : costs.mbs_to_mbs;
  if (prev.kind == K::Geo && next.kind == K::Mbs) return costs.geo_to_mbs;
  if (prev.kind == K::Mbs && next.kind == K::Geo) return costs.mbs_to_geo;
  return costs.geo_stay;
}

double normalized_distance(const GridIndex& a, const GridIndex& b, const GridSpec& grid) {
  if (grid.cells_per_side < 2) return 0.0;
  const double span = (grid.cells_per_side - 1) * std::sqrt(2.0);
  return std::hypot(a.row - b.row, a.col - b.col) / span;
}

double energy_shaping(Direction m, const GridIndex& next, const Scenario& scenario) {
  const double base = m.diagonal() ? -1.0 / std::sqrt(2.0) : -1.0;
  return base - normalized_distance(next, scenario.end(), scenario.grid());
}

double move_distance(Direction m, const GridSpec& grid) {
  return m.diagonal() ? grid.cell_size() * std::sqrt(2.0) : grid.cell_size();
}

StepOutcome step(const MdpState& s, const PlannerAction& a, const Scenario& scenario, double energy_remaining_j) {
  const GridSpec& grid = scenario.grid();
  const Direction m = a.direction;
  if (m.code < 1 || m.code > kDirectionCount || (a.next_assoc != 0 && a.next_assoc != 1))
    throw std::invalid_argument("step: malformed action");
  const GridIndex next{s.grid.row + m.drow(), s.grid.col + m.dcol()};
  if (!grid.contains(next)) throw std::invalid_argument("step: action leaves the grid");

  const auto& cfg = scenario.config;
  StepOutcome out;
  out.next_state = {next, cfg.geo_enabled ? a.next_assoc : 0};
  out.association = resolve_association(next, out.next_state.assoc_mode, scenario);
  const ResolvedAssociation prev = resolve_association(s.grid, s.assoc_mode, scenario);

  out.xi = energy_shaping(m, next, scenario);
  out.eta = handover_cost(prev, out.association, cfg.handover);
  if (cfg.hole_semantics == HoleSemantics::Resolved) {
    out.delta = out.association.is_hole() ? 1.0 : 0.0;
  } else {
    const CoverageCell& cell = scenario.coverage.at(next);
    out.delta = (cfg.geo_enabled ? cell.global_hole : cell.terrestrial_hole) ? 1.0 : 0.0;
  }
  out.reward = cfg.weights.energy * out.xi - cfg.weights.handover * out.eta - cfg.weights.disconnect * out.delta;

  out.distance_m = move_distance(m, grid);
  out.energy_j = trip_energy(cfg.energy.cruise_speed_mps, out.distance_m, cfg.propulsion);
  if (out.energy_j > energy_remaining_j) {
    out.done = true;
    out.done_reason = DoneReason::EnergyExhausted;
  } else if (next == scenario.end()) {
    out.done = true;
    out.done_reason = DoneReason::ReachedEnd;
    out.reward += cfg.terminal_bonus;
  }
  return out;
}

Episode::Episode(const Scenario& scenario, MdpState start, int step_cap)
    : scenario_(&scenario),
      state_(start),
      step_cap_(step_cap),
      energy_budget_(scenario.available_energy()),
      done_(start.grid == scenario.end()) {}

StepOutcome Episode::advance(const PlannerAction& a) {
  if (done_) throw std::logic_error("Episode::advance: episode already finished");
  StepOutcome out = step(state_, a, *scenario_, energy_budget_ - energy_used_);
  energy_used_ += out.energy_j;
  state_ = out.next_state;
  ++steps_;
  if (!out.done && steps_ >= step_cap_) {
    out.done = true;
    out.done_reason = DoneReason::StepCap;
  }
  done_ = out.done;
  return out;
}

}  // namespace jutap
