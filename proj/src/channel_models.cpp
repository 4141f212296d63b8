// SPDX-License-Identifier: Apache-2.0
#include "jutap/channel_models.hpp"

#include <algorithm>
#include <complex>
#include <stdexcept>

namespace jutap {

const char* to_string(EnvProfile p) { return p == EnvProfile::UrbanMacro ? "urban_macro" : "rural_macro"; }

EnvProfile env_profile_from_string(const std::string& s) {
  if (s == "urban_macro") return EnvProfile::UrbanMacro;
  if (s == "rural_macro") return EnvProfile::RuralMacro;
  throw std::invalid_argument("unknown env profile: " + s);
}

double TerrestrialRadioParams::noise_dbm() const { return noise_psd_dbm_hz + linear_to_db(bandwidth_hz); }

void TerrestrialRadioParams::validate() const {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("terrestrial: bandwidth must be positive");
  if (array_v < 1 || array_h < 1) throw std::invalid_argument("terrestrial: array dimensions must be >= 1");
  if (!std::isfinite(tx_power_dbm) || !std::isfinite(noise_psd_dbm_hz))
    throw std::invalid_argument("terrestrial: powers must be finite");
  if (!(carrier_freq_hz > 0.0)) throw std::invalid_argument("terrestrial: carrier must be positive");
}

double GeoRadioParams::noise_dbm() const { return noise_psd_dbm_hz + linear_to_db(bandwidth_hz); }

void GeoRadioParams::validate() const {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("geo: bandwidth must be positive");
  if (atmospheric_loss_db < 0.0 || scintillation_loss_db < 0.0 || polarization_loss_db < 0.0)
    throw std::invalid_argument("geo: losses must be non-negative");
  if (!std::isfinite(max_beam_gain_dbi)) throw std::invalid_argument("geo: max beam gain must be finite");
  if (!(beam_rolloff_width_deg > 0.0)) throw std::invalid_argument("geo: beam roll-off width must be positive");
  if (!satellite.valid() || !beam_center.valid()) throw std::invalid_argument("geo: invalid geodetic point");
}

double element_pattern(double theta_deg, double phi_deg, const ElementPattern& e) {
  const double horizontal = -std::min(12.0 * std::pow(phi_deg / e.beamwidth_h_deg, 2), e.front_to_back_db);
  const double vertical =
      -std::min(12.0 * std::pow((theta_deg - 90.0) / e.beamwidth_v_deg, 2), e.side_lobe_limit_db);
  return e.max_gain_dbi - std::min(-(horizontal + vertical), e.front_to_back_db);
}

double array_factor(double theta_deg, double phi_deg, const TerrestrialRadioParams& p) {
  const double theta = deg2rad(theta_deg);
  const double phi = deg2rad(phi_deg);
  const double tilt = deg2rad(p.electrical_tilt_deg);
  const double scan = deg2rad(p.electrical_scan_deg);
  const double d = p.element_spacing_wl;
  // Per-row and per-column phase increments of v·w; the 2D sum separates.
  const double dv = 2.0 * kPi * d * (std::cos(theta) + std::sin(tilt));
  const double dh = 2.0 * kPi * d * (std::sin(theta) * std::sin(phi) - std::cos(tilt) * std::sin(scan));
  std::complex<double> sum_v = 0.0;
  std::complex<double> sum_h = 0.0;
  for (int n = 0; n < p.array_v; ++n) sum_v += std::polar(1.0, n * dv);
  for (int m = 0; m < p.array_h; ++m) sum_h += std::polar(1.0, m * dh);
  return std::norm(sum_v * sum_h) / (p.array_v * p.array_h);
}

double array_gain(double theta_deg, double phi_deg, const TerrestrialRadioParams& p) {
  return element_pattern(theta_deg, phi_deg, p.element) + linear_to_db(array_factor(theta_deg, phi_deg, p));
}

PanelAngles steered_direction(const TerrestrialRadioParams& p) {
  return {90.0 + p.electrical_tilt_deg, p.electrical_scan_deg};
}

double los_pathloss_db(double d3d_m, double h_ut_m, EnvProfile profile, double carrier_hz) {
  const double fc_ghz = carrier_hz / 1e9;
  if (profile == EnvProfile::UrbanMacro) return 28.0 + 22.0 * std::log10(d3d_m) + 20.0 * std::log10(fc_ghz);
  const double slope = std::max(23.9 - 1.8 * std::log10(h_ut_m), 20.0);
  return slope * std::log10(d3d_m) + 20.0 * std::log10(40.0 * kPi * fc_ghz / 3.0);
}

double terrestrial_pathloss(double d2d_m, double h_ut_m, double h_bs_m, EnvProfile profile, double carrier_hz) {
  if (!(h_ut_m > 22.5 && h_ut_m <= 300.0))
    throw std::domain_error("terrestrial_pathloss: UAV altitude outside (22.5, 300] m");
  if (d2d_m < 0.0) throw std::domain_error("terrestrial_pathloss: negative distance");
  const double d3d = std::hypot(d2d_m, h_ut_m - h_bs_m);
  return los_pathloss_db(d3d, h_ut_m, profile, carrier_hz);
}

double free_space_pathloss_db(double distance_m, double carrier_hz) {
  return 20.0 * std::log10(4.0 * kPi * distance_m * carrier_hz / kSpeedOfLight);
}

double geo_beam_gain_db(double off_boresight_deg, const GeoRadioParams& p) {
  return p.max_beam_gain_dbi - 12.0 * std::pow(off_boresight_deg / p.beam_rolloff_width_deg, 2);
}

double received_power_mw(const MbsSite& site, const Vec3d& uav, const TerrestrialRadioParams& p) {
  double best_gain = 0.0;
  for (double az : site.sector_azimuths_deg) {
    const PanelAngles a = elevation_azimuth<double>(site.position, uav, az, p.downtilt_deg);
    best_gain = std::max(best_gain, db_to_linear(element_pattern(a.theta_deg, a.phi_deg, p.element)) *
                                        array_factor(a.theta_deg, a.phi_deg, p));
  }
  const double d2d = std::hypot(uav.x() - site.position.x(), uav.y() - site.position.y());
  const double loss_db = terrestrial_pathloss(d2d, uav.z(), site.position.z(), site.profile, p.carrier_freq_hz);
  return db_to_linear(p.tx_power_dbm + p.uav_rx_gain_dbi - loss_db) * best_gain;
}

double sinr_db(const std::vector<MbsSite>& sites, std::size_t b, const Vec3d& uav, const TerrestrialRadioParams& p) {
  if (b >= sites.size()) throw std::out_of_range("sinr_db: invalid MBS id");
  double signal = 0.0;
  double interference = 0.0;
  for (std::size_t j = 0; j < sites.size(); ++j) {
    const double rx = received_power_mw(sites[j], uav, p);
    (j == b ? signal : interference) += rx;
  }
  return linear_to_db(signal / (interference + db_to_linear(p.noise_dbm())));
}

GeoLink make_geo_link(const GeoRadioParams& p, const GeodeticPoint& origin) {
  return {geodetic_to_ecef(p.satellite), geodetic_to_ecef(p.beam_center), origin};
}

double geo_snr_db(const Vec3d& uav_enu, const GeoLink& link, const GeoRadioParams& p) {
  const Vec3d uav = enu_to_ecef(uav_enu, link.origin);
  const double off = off_boresight_angle<double>(link.satellite_ecef, link.beam_center_ecef, uav);
  const double loss = free_space_pathloss_db((uav - link.satellite_ecef).norm(), p.carrier_freq_hz) +
                      p.atmospheric_loss_db + p.scintillation_loss_db + p.polarization_loss_db;
  return p.tx_power_dbm + geo_beam_gain_db(off, p) + p.uav_rx_gain_dbi - loss - p.noise_dbm();
}

CoverageMap::CoverageMap(int cells_per_side, std::vector<CoverageCell> cells)
    : n_(cells_per_side), cells_(std::move(cells)) {
  if (cells_.size() != static_cast<std::size_t>(n_) * n_)
    throw std::invalid_argument("CoverageMap: cell count does not match grid");
}

int CoverageMap::terrestrial_hole_count() const {
  return static_cast<int>(std::count_if(cells_.begin(), cells_.end(), [](const auto& c) { return c.terrestrial_hole; }));
}

int CoverageMap::global_hole_count() const {
  return static_cast<int>(std::count_if(cells_.begin(), cells_.end(), [](const auto& c) { return c.global_hole; }));
}

CoverageMap build_coverage_map(const GridSpec& grid, const std::vector<MbsSite>& sites,
                               const TerrestrialRadioParams& terrestrial, const GeoRadioParams& geo,
                               double threshold_db) {
  const GeoLink link = make_geo_link(geo, grid.origin);
  const double noise_mw = db_to_linear(terrestrial.noise_dbm());
  std::vector<CoverageCell> cells(grid.cell_count());
  std::vector<double> rx(sites.size());
  for (int k = 0; k < grid.cell_count(); ++k) {
    const Vec3d uav = grid_center(grid.unflat(k), grid);
    CoverageCell& cell = cells[k];
    for (std::size_t j = 0; j < sites.size(); ++j) rx[j] = received_power_mw(sites[j], uav, terrestrial);
    for (std::size_t j = 0; j < sites.size(); ++j) {
      double interference = 0.0;
      for (std::size_t i = 0; i < sites.size(); ++i)
        if (i != j) interference += rx[i];
      const double sinr = linear_to_db(rx[j] / (interference + noise_mw));
      if (!cell.best_mbs || sinr > cell.best_sinr_db) {
        cell.best_mbs = static_cast<int>(j);
        cell.best_sinr_db = sinr;
      }
    }
    cell.geo_snr_db = geo_snr_db(uav, link, geo);
    cell.terrestrial_hole = !cell.best_mbs || cell.best_sinr_db < threshold_db;
    cell.global_hole = cell.terrestrial_hole && cell.geo_snr_db < threshold_db;
  }
  return CoverageMap(grid.cells_per_side, std::move(cells));
}

}  // namespace jutap
