// SPDX-License-Identifier: Apache-2.0
//
// Rotary-wing propulsion power and the mission energy budget.
#pragma once

namespace jutap {

struct PropulsionParams {
  double blade_profile_power_w = 79.86;  // P0
  double induced_power_w = 88.63;        // Pi
  double tip_speed_mps = 120.0;
  double mean_induced_velocity_mps = 4.03;  // v0, hover
  double fuselage_drag_ratio = 0.6;
  double air_density = 1.225;
  double rotor_solidity = 0.05;
  double rotor_disc_area_m2 = 0.503;

  void validate() const;
};

struct EnergyBudget {
  double capacity_j = 500e3;
  double reserve_j = 50e3;
  double cruise_speed_mps = 30.0;
  double climb_distance_m = 150.0;

  void validate() const;
};

/// Forward-flight power at speed v: blade profile + induced + parasite terms.
double propulsion_power(double speed_mps, const PropulsionParams& p);

/// Energy to fly `distance_m` at constant `speed_mps` (power times traversal time).
double trip_energy(double speed_mps, double distance_m, const PropulsionParams& p);

/// Energy left for the horizontal leg after reserve, climb and descent.
/// Throws std::domain_error when nothing is left.
double available_energy(const EnergyBudget& b, const PropulsionParams& p);

}  // namespace jutap
