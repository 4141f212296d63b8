// SPDX-License-Identifier: Apache-2.0
#include "jutap/energy_model.hpp"

#include <cmath>
#include <stdexcept>

namespace jutap {

void PropulsionParams::validate() const {
  const double all[] = {blade_profile_power_w, induced_power_w,    tip_speed_mps,  mean_induced_velocity_mps,
                        fuselage_drag_ratio,   air_density,        rotor_solidity, rotor_disc_area_m2};
  for (double v : all)
    if (!(v > 0.0)) throw std::invalid_argument("propulsion: all parameters must be strictly positive");
}

void EnergyBudget::validate() const {
  if (!(capacity_j > reserve_j) || reserve_j < 0.0)
    throw std::invalid_argument("energy budget: require capacity > reserve >= 0");
  if (!(cruise_speed_mps > 0.0)) throw std::invalid_argument("energy budget: cruise speed must be positive");
  if (climb_distance_m < 0.0) throw std::invalid_argument("energy budget: climb distance must be non-negative");
}

double propulsion_power(double v, const PropulsionParams& p) {
  if (v < 0.0) throw std::domain_error("propulsion_power: negative speed");
  const double v2 = v * v;
  const double v0sq = p.mean_induced_velocity_mps * p.mean_induced_velocity_mps;
  const double blade = p.blade_profile_power_w * (1.0 + 3.0 * v2 / (p.tip_speed_mps * p.tip_speed_mps));
  // sqrt(1 + x^2) - x with x = v^2 / (2 v0^2), written to avoid cancellation at high speed.
  const double x = v2 / (2.0 * v0sq);
  const double induced = p.induced_power_w * std::sqrt(1.0 / (std::sqrt(1.0 + x * x) + x));
  const double parasite =
      0.5 * p.fuselage_drag_ratio * p.air_density * p.rotor_solidity * p.rotor_disc_area_m2 * v2 * v;
  return blade + induced + parasite;
}

double trip_energy(double v, double d, const PropulsionParams& p) {
  if (d < 0.0) throw std::domain_error("trip_energy: negative distance");
  if (d == 0.0) return 0.0;
  if (!(v > 0.0)) throw std::domain_error("trip_energy: non-positive speed with positive distance");
  return propulsion_power(v, p) * d / v;
}

double available_energy(const EnergyBudget& b, const PropulsionParams& p) {
  b.validate();
  const double left = b.capacity_j - b.reserve_j - 2.0 * trip_energy(b.cruise_speed_mps, b.climb_distance_m, p);
  if (!(left > 0.0)) throw std::domain_error("available_energy: mission infeasible, no energy left for the route");
  return left;
}

}  // namespace jutap
