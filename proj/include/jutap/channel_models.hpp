// SPDX-License-Identifier: Apache-2.0
//
// Link budgets for the two tiers:
//  - terrestrial: aerial-UE LoS pathloss, tri-sector uniform planar arrays, SINR with
//    co-channel interference from every other site,
//  - GEO: free-space plus fixed secondary losses, parabolic main-lobe beam gain, SNR.
#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "jutap/geo_spatial.hpp"

namespace jutap {

enum class EnvProfile { UrbanMacro, RuralMacro };

const char* to_string(EnvProfile p);
EnvProfile env_profile_from_string(const std::string& s);

/// Antenna heights tied to each deployment profile.
inline double antenna_height(EnvProfile p) { return p == EnvProfile::UrbanMacro ? 25.0 : 35.0; }

struct ElementPattern {
  double max_gain_dbi = 8.0;
  double beamwidth_h_deg = 65.0;
  double beamwidth_v_deg = 65.0;
  double front_to_back_db = 30.0;  // A_m
  double side_lobe_limit_db = 30.0;  // SLA_v
};

struct TerrestrialRadioParams {
  double carrier_freq_hz = 2.545e9;
  double tx_power_dbm = 43.0;
  double bandwidth_hz = 10e6;
  double noise_psd_dbm_hz = -173.9;
  int array_v = 8;
  int array_h = 8;
  double element_spacing_wl = 0.5;
  double downtilt_deg = 10.0;
  /// Electrical steering relative to the (already tilted) panel broadside.
  double electrical_tilt_deg = 0.0;
  double electrical_scan_deg = 0.0;
  ElementPattern element{};
  double uav_rx_gain_dbi = 0.0;

  double noise_dbm() const;
  void validate() const;
};

struct GeoRadioParams {
  double carrier_freq_hz = 2.1e9;
  double tx_power_dbm = 30.0;
  double bandwidth_hz = 250e3;
  double noise_psd_dbm_hz = -173.9;
  double max_beam_gain_dbi = 51.0;
  /// Angle w in G(θ) = G_max − 12 (θ / w)²; gain is 3 dB down at w / 2.
  double beam_rolloff_width_deg = 0.8;
  double atmospheric_loss_db = 0.5;
  double scintillation_loss_db = 0.5;
  double polarization_loss_db = 3.0;
  double uav_rx_gain_dbi = 0.0;
  GeodeticPoint satellite = geostationary(-111.1);
  GeodeticPoint beam_center{50.0, -70.0, 0.0};

  double noise_dbm() const;
  void validate() const;
};

struct MbsSite {
  Vec3d position;  // local ENU; z is the antenna height
  EnvProfile profile = EnvProfile::UrbanMacro;
  std::array<double, 3> sector_azimuths_deg{0.0, 120.0, 240.0};
};

// ---------------------------------------------------------------------------
// Antenna patterns
// ---------------------------------------------------------------------------

/// Single-element pattern in dBi; theta is the zenith angle in the panel frame.
double element_pattern(double theta_deg, double phi_deg, const ElementPattern& e = {});

/// Squared magnitude of the weighted array factor, normalized so that the steered
/// direction yields N_A.
double array_factor(double theta_deg, double phi_deg, const TerrestrialRadioParams& p);

/// Composite panel gain in dBi (element pattern plus array factor).
double array_gain(double theta_deg, double phi_deg, const TerrestrialRadioParams& p);

/// Panel-frame direction the steering weights point at.
PanelAngles steered_direction(const TerrestrialRadioParams& p);

// ---------------------------------------------------------------------------
// Propagation
// ---------------------------------------------------------------------------

/// LoS aerial-UE pathloss as a function of 3D distance, dB.
double los_pathloss_db(double d3d_m, double h_ut_m, EnvProfile profile, double carrier_hz);

/// Same, from horizontal distance and the two heights. Throws std::domain_error outside
/// the 22.5 m < h_ut <= 300 m validity band.
double terrestrial_pathloss(double d2d_m, double h_ut_m, double h_bs_m, EnvProfile profile,
                            double carrier_hz);

double free_space_pathloss_db(double distance_m, double carrier_hz);

double geo_beam_gain_db(double off_boresight_deg, const GeoRadioParams& p);

// ---------------------------------------------------------------------------
// Link evaluation
// ---------------------------------------------------------------------------

/// Received power (mW, linear) from the best sector of `site` at `uav`.
double received_power_mw(const MbsSite& site, const Vec3d& uav, const TerrestrialRadioParams& p);

/// SINR of site `b` (0-based) at `uav`, dB.
double sinr_db(const std::vector<MbsSite>& sites, std::size_t b, const Vec3d& uav,
               const TerrestrialRadioParams& p);

struct GeoLink {
  Vec3d satellite_ecef;
  Vec3d beam_center_ecef;
  GeodeticPoint origin;
};

GeoLink make_geo_link(const GeoRadioParams& p, const GeodeticPoint& origin);

double geo_snr_db(const Vec3d& uav_enu, const GeoLink& link, const GeoRadioParams& p);

// ---------------------------------------------------------------------------
// Coverage map
// ---------------------------------------------------------------------------

struct CoverageCell {
  std::optional<int> best_mbs;  // 0-based site index
  double best_sinr_db = -std::numeric_limits<double>::infinity();
  double geo_snr_db = -std::numeric_limits<double>::infinity();
  bool terrestrial_hole = true;
  bool global_hole = true;

  friend bool operator==(const CoverageCell&, const CoverageCell&) = default;
};

class CoverageMap {
 public:
  CoverageMap() = default;
  CoverageMap(int cells_per_side, std::vector<CoverageCell> cells);

  int cells_per_side() const { return n_; }
  const CoverageCell& at(const GridIndex& g) const { return cells_.at(g.row * n_ + g.col); }
  const std::vector<CoverageCell>& cells() const { return cells_; }

  int terrestrial_hole_count() const;
  int global_hole_count() const;

  friend bool operator==(const CoverageMap&, const CoverageMap&) = default;

 private:
  int n_ = 0;
  std::vector<CoverageCell> cells_;
};

CoverageMap build_coverage_map(const GridSpec& grid, const std::vector<MbsSite>& sites,
                               const TerrestrialRadioParams& terrestrial, const GeoRadioParams& geo,
                               double threshold_db);

}  // namespace jutap
