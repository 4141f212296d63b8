// SPDX-License-Identifier: Apache-2.0
#include "jutap/geo_spatial.hpp"

#include <string>

namespace jutap {

Vec3d geodetic_to_ecef(const GeodeticPoint& p) {
  return geodetic_to_ecef<double>(p.latitude_deg, p.longitude_deg, p.altitude_m);
}

GeodeticPoint ecef_to_geodetic(const Vec3d& r) {
  using namespace wgs84;
  const double p = std::hypot(r.x(), r.y());
  const double lon = std::atan2(r.y(), r.x());
  const double ep2 = (kSemiMajor * kSemiMajor - kSemiMinor * kSemiMinor) / (kSemiMinor * kSemiMinor);

  double lat;
  double alt;
  if (p < 1e-9) {
    lat = r.z() >= 0 ? kPi / 2 : -kPi / 2;
    alt = std::abs(r.z()) - kSemiMinor;
    return {rad2deg(lat), rad2deg(lon), alt};
  }
  const double beta = std::atan2(kSemiMajor * r.z(), kSemiMinor * p);
  lat = std::atan2(r.z() + ep2 * kSemiMinor * std::pow(std::sin(beta), 3),
                   p - kEccentricitySq * kSemiMajor * std::pow(std::cos(beta), 3));
  for (int i = 0; i < 5; ++i) {
    const double s = std::sin(lat);
    const double n = kSemiMajor / std::sqrt(1.0 - kEccentricitySq * s * s);
    alt = p / std::cos(lat) - n;
    lat = std::atan2(r.z(), p * (1.0 - kEccentricitySq * n / (n + alt)));
  }
  const double s = std::sin(lat);
  const double n = kSemiMajor / std::sqrt(1.0 - kEccentricitySq * s * s);
  // Height via the normal-projection form; stable at all latitudes.
  alt = p * std::cos(lat) + r.z() * s - kSemiMajor * kSemiMajor / n;
  return {rad2deg(lat), rad2deg(lon), alt};
}

Eigen::Matrix3d enu_to_ecef_rotation(const GeodeticPoint& origin) {
  const double lat = deg2rad(origin.latitude_deg);
  const double lon = deg2rad(origin.longitude_deg);
  Eigen::Matrix3d r;
  r << -std::sin(lon), -std::sin(lat) * std::cos(lon), std::cos(lat) * std::cos(lon),  //
      std::cos(lon), -std::sin(lat) * std::sin(lon), std::cos(lat) * std::sin(lon),    //
      0.0, std::cos(lat), std::sin(lat);
  return r;
}

Vec3d enu_to_ecef(const Vec3d& enu, const GeodeticPoint& origin) {
  return geodetic_to_ecef(origin) + enu_to_ecef_rotation(origin) * enu;
}

void GridSpec::validate() const {
  if (!(area_side_m > 0.0)) throw std::invalid_argument("grid: area_side_m must be positive");
  if (cells_per_side < 1) throw std::invalid_argument("grid: cells_per_side must be >= 1");
  if (!(uav_altitude_m >= 0.0 && uav_altitude_m < 300.0))
    throw std::invalid_argument("grid: uav_altitude_m must be in [0, 300)");
  if (!origin.valid()) throw std::invalid_argument("grid: origin out of range");
}

Vec3d grid_center(const GridIndex& g, const GridSpec& spec) {
  if (!spec.contains(g))
    throw std::out_of_range("grid_center: index (" + std::to_string(g.row) + "," + std::to_string(g.col) +
                            ") outside grid");
  const double cell = spec.cell_size();
  return {(g.col + 0.5) * cell, (g.row + 0.5) * cell, spec.uav_altitude_m};
}

}  // namespace jutap
