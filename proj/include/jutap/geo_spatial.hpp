// SPDX-License-Identifier: Apache-2.0
//
// Coordinate frames, grid discretization and look-angle geometry.
//
// Three frames are in play:
//  - geodetic (WGS-84 latitude/longitude/altitude, degrees and meters),
//  - ECEF (meters), used for all satellite geometry,
//  - a local east-north-up plane anchored at the region's south-west
//    corner, in which the planning grid and the base stations live.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Geometry>

#include "jutap/types.hpp"

namespace jutap {

namespace wgs84 {
inline constexpr double kSemiMajor = 6378137.0;
inline constexpr double kFlattening = 1.0 / 298.257223563;
inline constexpr double kSemiMinor = kSemiMajor * (1.0 - kFlattening);
inline constexpr double kEccentricitySq = kFlattening * (2.0 - kFlattening);
}  // namespace wgs84

inline constexpr double kGeoAltitude = 35786.0e3;

struct GeodeticPoint {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double altitude_m = 0.0;

  bool valid() const {
    return latitude_deg >= -90.0 && latitude_deg <= 90.0 && longitude_deg >= -180.0 &&
           longitude_deg <= 180.0 && std::isfinite(altitude_m);
  }
};

/// Geostationary slot: on the equator at the given longitude.
inline GeodeticPoint geostationary(double longitude_deg) {
  return {0.0, longitude_deg, kGeoAltitude};
}

template <typename Scalar>
Vec3<Scalar> geodetic_to_ecef(Scalar lat_deg, Scalar lon_deg, Scalar alt_m) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const Scalar lat = deg2rad(lat_deg);
  const Scalar lon = deg2rad(lon_deg);
  const Scalar s = sin(lat);
  const Scalar n = Scalar(wgs84::kSemiMajor) / sqrt(Scalar(1) - Scalar(wgs84::kEccentricitySq) * s * s);
  return {(n + alt_m) * cos(lat) * cos(lon), (n + alt_m) * cos(lat) * sin(lon),
          (n * (Scalar(1) - Scalar(wgs84::kEccentricitySq)) + alt_m) * s};
}

Vec3d geodetic_to_ecef(const GeodeticPoint& p);

/// Inverse conversion (Bowring initial guess refined by Newton iterations).
GeodeticPoint ecef_to_geodetic(const Vec3d& r);

/// Rotation taking local east-north-up components to ECEF components.
Eigen::Matrix3d enu_to_ecef_rotation(const GeodeticPoint& origin);

Vec3d enu_to_ecef(const Vec3d& enu, const GeodeticPoint& origin);

struct GridIndex {
  int row = 0;
  int col = 0;

  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

struct GridSpec {
  double area_side_m = 3000.0;
  int cells_per_side = 25;
  double uav_altitude_m = 150.0;
  /// Geodetic point of the south-west corner of the region.
  GeodeticPoint origin{45.4, -75.7, 0.0};

  double cell_size() const { return area_side_m / cells_per_side; }
  int cell_count() const { return cells_per_side * cells_per_side; }

  bool contains(const GridIndex& g) const {
    return g.row >= 0 && g.row < cells_per_side && g.col >= 0 && g.col < cells_per_side;
  }

  int flat(const GridIndex& g) const { return g.row * cells_per_side + g.col; }
  GridIndex unflat(int k) const { return {k / cells_per_side, k % cells_per_side}; }

  /// Throws std::invalid_argument if the spec is not usable.
  void validate() const;
};

/// Local ENU position of a cell center at flight altitude. Column runs east, row runs north.
Vec3d grid_center(const GridIndex& g, const GridSpec& spec);

/// Zenith/azimuth angles of a target as seen from a sector panel.
struct PanelAngles {
  double theta_deg;  // 0 = panel normal ("up"), 90 = broadside
  double phi_deg;    // relative to boresight, in (-180, 180]
};

/// Look angles from `from` to `to` in the frame of a panel whose boresight points at
/// `boresight_azimuth_deg` (counter-clockwise from east) and is tilted down by `downtilt_deg`.
/// A target straight along the panel normal has undefined azimuth; 0 is returned.
template <typename Scalar>
PanelAngles elevation_azimuth(const Vec3<Scalar>& from, const Vec3<Scalar>& to,
                              Scalar boresight_azimuth_deg, Scalar downtilt_deg) {
  using std::atan2;
  using std::sqrt;
  const Vec3<Scalar> d = to - from;
  const Scalar norm = d.norm();
  if (!(norm > Scalar(0))) throw std::invalid_argument("elevation_azimuth: coincident points");

  const Scalar az = deg2rad(boresight_azimuth_deg);
  const Scalar tilt = deg2rad(downtilt_deg);
  const Vec3<Scalar> boresight(std::cos(az) * std::cos(tilt), std::sin(az) * std::cos(tilt), -std::sin(tilt));
  const Vec3<Scalar> lateral(-std::sin(az), std::cos(az), Scalar(0));
  const Vec3<Scalar> normal(std::cos(az) * std::sin(tilt), std::sin(az) * std::sin(tilt), std::cos(tilt));

  const Scalar px = d.dot(boresight);
  const Scalar py = d.dot(lateral);
  const Scalar pz = d.dot(normal);
  // atan2 of the in-plane radius keeps accuracy near the poles where acos would not.
  const Scalar theta = rad2deg(atan2(sqrt(px * px + py * py), pz));
  Scalar phi = (px == Scalar(0) && py == Scalar(0)) ? Scalar(0) : rad2deg(atan2(py, px));
  if (phi <= Scalar(-180)) phi += Scalar(360);
  return {double(theta), double(phi)};
}

/// Angle at the satellite between the beam-center ray and the target ray, degrees.
template <typename Scalar>
Scalar off_boresight_angle(const Vec3<Scalar>& sat, const Vec3<Scalar>& beam_center,
                           const Vec3<Scalar>& target) {
  using std::atan2;
  const Vec3<Scalar> u = beam_center - sat;
  const Vec3<Scalar> v = target - sat;
  if (!(u.norm() > Scalar(0)) || !(v.norm() > Scalar(0)))
    throw std::invalid_argument("off_boresight_angle: degenerate ray");
  return rad2deg(atan2(u.cross(v).norm(), u.dot(v)));
}

}  // namespace jutap
