// SPDX-License-Identifier: Apache-2.0
#include "jutap/run_record.hpp"

namespace jutap {

TrajectorySummary summarize(const std::vector<TrajectoryStep>& steps, DoneReason reason) {
  TrajectorySummary s;
  s.steps = static_cast<int>(steps.size());
  for (const auto& st : steps) {
    s.length_m += st.distance_m;
    s.handover_total += st.eta;
    s.hole_steps += st.delta > 0.0 ? 1 : 0;
    s.total_reward += st.reward;
    s.xi_total += st.xi;
    s.delta_total += st.delta;
  }
  s.energy_j = steps.empty() ? 0.0 : steps.back().cumulative_energy_j;
  s.done_reason = reason;
  s.reached_end = reason == DoneReason::ReachedEnd;
  return s;
}

namespace {

TrajectoryStep record(const StepOutcome& o, int t, double cumulative_energy, int mbs_count) {
  return {t,      o.next_state, o.association.indicator(mbs_count), o.xi, o.eta, o.delta, o.reward,
          o.distance_m, cumulative_energy};
}

}  // namespace

Trajectory rollout(const Scenario& scenario, const Policy& policy, MdpState start, int max_steps) {
  Trajectory traj;
  traj.start = start;
  traj.start_indicator = resolve_association(start.grid, start.assoc_mode, scenario).indicator(scenario.mbs_count());
  DoneReason reason = start.grid == scenario.end() ? DoneReason::ReachedEnd : DoneReason::None;
  if (reason == DoneReason::None && max_steps > 0) {
    Episode ep(scenario, start, max_steps);
    while (!ep.done()) {
      const StepOutcome o = ep.advance(policy(ep.state()));
      traj.steps.push_back(record(o, ep.steps(), ep.energy_used(), scenario.mbs_count()));
      reason = o.done_reason;
    }
  }
  traj.summary = summarize(traj.steps, reason);
  return traj;
}

Trajectory replay(const Scenario& scenario, const std::vector<PlannerAction>& actions, MdpState start) {
  std::size_t next = 0;
  const Policy policy = [&](const MdpState&) { return actions.at(next++); };
  return rollout(scenario, policy, start, static_cast<int>(actions.size()));
}

}  // namespace jutap
