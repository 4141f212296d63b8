// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "jutap/channel_models.hpp"

using namespace jutap;

namespace {

std::vector<MbsSite> three_sites() {
  return {{{500, 500, 25}, EnvProfile::UrbanMacro, {0, 120, 240}},
          {{2000, 1500, 35}, EnvProfile::RuralMacro, {30, 150, 270}},
          {{2500, 300, 25}, EnvProfile::UrbanMacro, {45, 165, 285}}};
}

GridSpec five_by_five() {
  GridSpec g;
  g.cells_per_side = 5;
  return g;
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("element pattern definition points") {
  CHECK(element_pattern(90, 0) == doctest::Approx(8.0));
  CHECK(element_pattern(90, 65) == doctest::Approx(-4.0));
  CHECK(element_pattern(0, 180) == doctest::Approx(-22.0));
  CHECK(element_pattern(90 + 65, 0) == doctest::Approx(-4.0));
}

TEST_CASE("array gain matches a direct phasor sum") {
  TerrestrialRadioParams p;
  p.electrical_tilt_deg = 10.0;
  CHECK(array_gain(60, 30, p) == doctest::Approx(-14.233861698608962).epsilon(1e-10));
  CHECK(array_gain(100, 0, p) == doctest::Approx(25.777776071199817).epsilon(1e-10));
}

TEST_CASE("array peak is the element maximum plus 10 log10 N_A") {
  TerrestrialRadioParams p;
  const PanelAngles s = steered_direction(p);
  CHECK(array_gain(s.theta_deg, s.phi_deg, p) - element_pattern(s.theta_deg, s.phi_deg) ==
        doctest::Approx(10 * std::log10(64.0)).epsilon(1e-12));
  CHECK(array_gain(s.theta_deg, s.phi_deg, p) == doctest::Approx(8.0 + 18.0618).epsilon(1e-5));
  for (double etilt : {-5.0, 7.0, 20.0}) {
    p.electrical_tilt_deg = etilt;
    p.electrical_scan_deg = etilt / 2;
    const PanelAngles q = steered_direction(p);
    CHECK(10 * std::log10(array_factor(q.theta_deg, q.phi_deg, p)) == doctest::Approx(10 * std::log10(64.0)));
  }
}

TEST_CASE("a 1x1 array reduces to the element pattern") {
  TerrestrialRadioParams p;
  p.array_v = p.array_h = 1;
  for (double th : {0.0, 45.0, 90.0, 135.0})
    for (double ph : {-170.0, -30.0, 0.0, 60.0, 180.0})
      CHECK(array_gain(th, ph, p) == doctest::Approx(element_pattern(th, ph)));
}

TEST_CASE("aerial pathloss formulas") {
  CHECK(los_pathloss_db(1000, 150, EnvProfile::UrbanMacro, 2.545e9) == doctest::Approx(102.11375573345555).epsilon(1e-12));
  CHECK(los_pathloss_db(2000, 150, EnvProfile::UrbanMacro, 2.545e9) -
            los_pathloss_db(1000, 150, EnvProfile::UrbanMacro, 2.545e9) ==
        doctest::Approx(22 * std::log10(2.0)));
  // The rural slope floor binds at 150 m.
  CHECK(los_pathloss_db(2000, 150, EnvProfile::RuralMacro, 2.545e9) -
            los_pathloss_db(1000, 150, EnvProfile::RuralMacro, 2.545e9) ==
        doctest::Approx(20 * std::log10(2.0)));
  CHECK(los_pathloss_db(2000, 30, EnvProfile::RuralMacro, 2.545e9) -
            los_pathloss_db(1000, 30, EnvProfile::RuralMacro, 2.545e9) ==
        doctest::Approx((23.9 - 1.8 * std::log10(30.0)) * std::log10(2.0)));
}

TEST_CASE("terrestrial pathloss is nondecreasing in distance and checks its band") {
  for (EnvProfile prof : {EnvProfile::UrbanMacro, EnvProfile::RuralMacro}) {
    double prev = -INFINITY;
    for (double d = 0; d < 5000; d += 37.5) {
      const double pl = terrestrial_pathloss(d, 150, antenna_height(prof), prof, 2.545e9);
      CHECK(pl >= prev);
      prev = pl;
    }
    CHECK_THROWS_AS(terrestrial_pathloss(100, 22.5, 25, prof, 2.545e9), std::domain_error);
    CHECK_THROWS_AS(terrestrial_pathloss(100, 300.5, 25, prof, 2.545e9), std::domain_error);
    CHECK_THROWS_AS(terrestrial_pathloss(-1, 150, 25, prof, 2.545e9), std::domain_error);
    CHECK_NOTHROW(terrestrial_pathloss(100, 300.0, 25, prof, 2.545e9));
  }
}

TEST_CASE("free-space pathloss and GEO beam gain") {
  CHECK(free_space_pathloss_db(38000e3, 2.1e9) == doctest::Approx(190.48784104889796).epsilon(1e-12));
  GeoRadioParams g;
  CHECK(geo_beam_gain_db(0.0, g) == doctest::Approx(51.0));
  CHECK(geo_beam_gain_db(g.beam_rolloff_width_deg, g) == doctest::Approx(39.0));
  CHECK(geo_beam_gain_db(g.beam_rolloff_width_deg / 2, g) == doctest::Approx(48.0));
}

TEST_CASE("GEO SNR matches reference and is nearly uniform") {
  const GeoRadioParams g;
  const GridSpec grid;
  const GeoLink link = make_geo_link(g, grid.origin);
  CHECK(geo_snr_db({60, 60, 150}, link, g) == doctest::Approx(3.0736958789991036).epsilon(1e-9));
  CHECK(geo_snr_db({1500, 1500, 150}, link, g) == doctest::Approx(3.0934752512433192).epsilon(1e-9));
  double lo = INFINITY, hi = -INFINITY;
  for (int r = 0; r < grid.cells_per_side; ++r)
    for (int c = 0; c < grid.cells_per_side; ++c) {
      const double s = geo_snr_db(grid_center({r, c}, grid), link, g);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  CHECK(hi - lo < 0.1);
}

TEST_CASE("SINR for a three-site layout matches an end-to-end reference") {
  const auto sites = three_sites();
  const TerrestrialRadioParams p;
  const Vec3d uav = grid_center({1, 2}, five_by_five());
  CHECK(uav.x() == doctest::Approx(1500.0));
  CHECK(uav.y() == doctest::Approx(900.0));
  CHECK(sinr_db(sites, 0, uav, p) == doctest::Approx(1.4170466535217106).epsilon(1e-9));
  CHECK(sinr_db(sites, 1, uav, p) == doctest::Approx(-2.6608679493080873).epsilon(1e-9));
  CHECK(sinr_db(sites, 2, uav, p) == doctest::Approx(-11.405960478340125).epsilon(1e-9));
  CHECK_THROWS_AS(sinr_db(sites, 3, uav, p), std::out_of_range);
}

TEST_CASE("single site SINR is the SNR and rises dB for dB with transmit power") {
  const std::vector<MbsSite> one{three_sites()[0]};
  TerrestrialRadioParams p;
  const Vec3d uav{1200, 900, 150};
  const double snr = linear_to_db(received_power_mw(one[0], uav, p)) - p.noise_dbm();
  CHECK(sinr_db(one, 0, uav, p) == doctest::Approx(snr));
  const double before = sinr_db(one, 0, uav, p);
  p.tx_power_dbm += 7.0;
  CHECK(sinr_db(one, 0, uav, p) - before == doctest::Approx(7.0));
}

TEST_CASE("co-located identical sites give SINR at most 0 dB") {
  const MbsSite s = three_sites()[0];
  const std::vector<MbsSite> twin{s, s};
  TerrestrialRadioParams p;
  const double sinr = sinr_db(twin, 0, {900, 800, 150}, p);
  CHECK(sinr <= 0.0);
  p.noise_psd_dbm_hz = -300;
  CHECK(sinr_db(twin, 1, {900, 800, 150}, p) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("interference-limited SINR barely moves with common transmit power") {
  auto sites = three_sites();
  TerrestrialRadioParams p;
  const Vec3d uav{1500, 900, 150};
  const double before = sinr_db(sites, 0, uav, p);
  p.tx_power_dbm += 10.0;
  const double after = sinr_db(sites, 0, uav, p);
  CHECK(after >= before);
  CHECK(after - before < 0.01);
}

TEST_CASE("coverage map agrees with per-cell recomputation") {
  const GridSpec grid = five_by_five();
  const auto sites = three_sites();
  const TerrestrialRadioParams t;
  const GeoRadioParams g;
  const CoverageMap map = build_coverage_map(grid, sites, t, g, -1.0);
  const GeoLink link = make_geo_link(g, grid.origin);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      const Vec3d uav = grid_center({r, c}, grid);
      int best = 0;
      for (int b = 1; b < 3; ++b)
        if (sinr_db(sites, b, uav, t) > sinr_db(sites, best, uav, t)) best = b;
      const CoverageCell& cell = map.at({r, c});
      REQUIRE(cell.best_mbs);
      CHECK(*cell.best_mbs == best);
      CHECK(cell.best_sinr_db == doctest::Approx(sinr_db(sites, best, uav, t)).epsilon(1e-12));
      CHECK(cell.geo_snr_db == doctest::Approx(geo_snr_db(uav, link, g)).epsilon(1e-12));
      CHECK(cell.terrestrial_hole == (cell.best_sinr_db < -1.0));
      CHECK(cell.global_hole == (cell.terrestrial_hole && cell.geo_snr_db < -1.0));
      CHECK((!cell.global_hole || cell.terrestrial_hole));
    }
}

TEST_CASE("coverage thresholds at the extremes") {
  const GridSpec grid = five_by_five();
  const auto sites = three_sites();
  const CoverageMap none = build_coverage_map(grid, sites, {}, {}, -INFINITY);
  CHECK(none.terrestrial_hole_count() == 0);
  CHECK(none.global_hole_count() == 0);
  const CoverageMap all = build_coverage_map(grid, sites, {}, {}, INFINITY);
  CHECK(all.terrestrial_hole_count() == 25);
  CHECK(all.global_hole_count() == 25);
  const CoverageMap empty = build_coverage_map(grid, {}, {}, {}, -1.0);
  CHECK(empty.terrestrial_hole_count() == 25);
  CHECK_FALSE(empty.at({0, 0}).best_mbs.has_value());
}

TEST_CASE("best MBS is invariant to a common dB offset on every link") {
  const GridSpec grid = five_by_five();
  const auto sites = three_sites();
  TerrestrialRadioParams t;
  const CoverageMap a = build_coverage_map(grid, sites, t, {}, -1.0);
  for (double offset : {-30.0, 12.5}) {
    TerrestrialRadioParams u = t;
    u.tx_power_dbm += offset;
    const CoverageMap b = build_coverage_map(grid, sites, u, {}, -1.0);
    for (int k = 0; k < 25; ++k) CHECK(a.cells()[k].best_mbs == b.cells()[k].best_mbs);
  }
}

TEST_CASE("parameter validation") {
  TerrestrialRadioParams t;
  t.bandwidth_hz = 0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t = {};
  t.array_h = 0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  GeoRadioParams g;
  g.polarization_loss_db = -1;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  CHECK(env_profile_from_string(to_string(EnvProfile::RuralMacro)) == EnvProfile::RuralMacro);
  CHECK_THROWS_AS(env_profile_from_string("suburban"), std::invalid_argument);
}

}  // TEST_SUITE
