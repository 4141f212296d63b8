// SPDX-License-Identifier: Apache-2.0
#include "jutap/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace jutap {

namespace {

json point_to_json(const GeodeticPoint& p) {
  return {{"latitude_deg", p.latitude_deg}, {"longitude_deg", p.longitude_deg}, {"altitude_m", p.altitude_m}};
}

GeodeticPoint point_from_json(const json& j) {
  return {j.at("latitude_deg").get<double>(), j.at("longitude_deg").get<double>(), j.at("altitude_m").get<double>()};
}

json cell_to_json(const GridIndex& g) { return json::array({g.row, g.col}); }
GridIndex cell_from_json(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

// JSON has no infinities; they are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number_from(const json& j, double if_null) { return j.is_null() ? if_null : j.get<double>(); }

json with_defaults(const json& defaults, const json& given) {
  check_known_keys(given, defaults);
  json merged = defaults;
  merged.merge_patch(given);
  return merged;
}

}  // namespace

void check_known_keys(const json& given, const json& canonical, const std::string& path) {
  if (!given.is_object()) return;
  for (auto it = given.begin(); it != given.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!canonical.is_object() || !canonical.contains(it.key())) throw std::invalid_argument("unknown config key: " + key);
    if (it.value().is_object()) check_known_keys(it.value(), canonical.at(it.key()), key);
  }
}

json to_json(const ScenarioConfig& c) {
  const auto& t = c.terrestrial;
  const auto& g = c.geo;
  const auto& p = c.propulsion;
  const auto& e = c.energy;
  json end = c.end ? cell_to_json(*c.end) : json(nullptr);
  return {
      {"grid",
       {{"area_side_m", c.grid.area_side_m},
        {"cells_per_side", c.grid.cells_per_side},
        {"uav_altitude_m", c.grid.uav_altitude_m},
        {"origin", point_to_json(c.grid.origin)}}},
      {"deployment",
       {{"mbs_count", c.mbs_count}, {"min_separation_m", c.min_separation_m}, {"placement_attempts", c.placement_attempts}}},
      {"terrestrial",
       {{"carrier_freq_hz", t.carrier_freq_hz},
        {"tx_power_dbm", t.tx_power_dbm},
        {"bandwidth_hz", t.bandwidth_hz},
        {"noise_psd_dbm_hz", t.noise_psd_dbm_hz},
        {"array_v", t.array_v},
        {"array_h", t.array_h},
        {"element_spacing_wl", t.element_spacing_wl},
        {"downtilt_deg", t.downtilt_deg},
        {"electrical_tilt_deg", t.electrical_tilt_deg},
        {"electrical_scan_deg", t.electrical_scan_deg},
        {"element_max_gain_dbi", t.element.max_gain_dbi},
        {"element_beamwidth_h_deg", t.element.beamwidth_h_deg},
        {"element_beamwidth_v_deg", t.element.beamwidth_v_deg},
        {"element_front_to_back_db", t.element.front_to_back_db},
        {"element_side_lobe_limit_db", t.element.side_lobe_limit_db},
        {"uav_rx_gain_dbi", t.uav_rx_gain_dbi}}},
      {"geo",
       {{"carrier_freq_hz", g.carrier_freq_hz},
        {"tx_power_dbm", g.tx_power_dbm},
        {"bandwidth_hz", g.bandwidth_hz},
        {"noise_psd_dbm_hz", g.noise_psd_dbm_hz},
        {"max_beam_gain_dbi", g.max_beam_gain_dbi},
        {"beam_rolloff_width_deg", g.beam_rolloff_width_deg},
        {"atmospheric_loss_db", g.atmospheric_loss_db},
        {"scintillation_loss_db", g.scintillation_loss_db},
        {"polarization_loss_db", g.polarization_loss_db},
        {"uav_rx_gain_dbi", g.uav_rx_gain_dbi},
        {"satellite", point_to_json(g.satellite)},
        {"beam_center", point_to_json(g.beam_center)}}},
      {"reward",
       {{"threshold_db", c.threshold_db},
        {"start", cell_to_json(c.start)},
        {"end", end},
        {"weights", {{"energy", c.weights.energy}, {"handover", c.weights.handover}, {"disconnect", c.weights.disconnect}}},
        {"handover",
         {{"mbs_to_mbs", c.handover.mbs_to_mbs},
          {"geo_to_mbs", c.handover.geo_to_mbs},
          {"mbs_to_geo", c.handover.mbs_to_geo},
          {"geo_stay", c.handover.geo_stay},
          {"reconnect", c.handover.reconnect}}},
        {"terminal_bonus", c.terminal_bonus},
        {"hole_semantics", to_string(c.hole_semantics)}}},
      {"energy",
       {{"blade_profile_power_w", p.blade_profile_power_w},
        {"induced_power_w", p.induced_power_w},
        {"tip_speed_mps", p.tip_speed_mps},
        {"mean_induced_velocity_mps", p.mean_induced_velocity_mps},
        {"fuselage_drag_ratio", p.fuselage_drag_ratio},
        {"air_density", p.air_density},
        {"rotor_solidity", p.rotor_solidity},
        {"rotor_disc_area_m2", p.rotor_disc_area_m2},
        {"capacity_j", e.capacity_j},
        {"reserve_j", e.reserve_j},
        {"cruise_speed_mps", e.cruise_speed_mps},
        {"climb_distance_m", e.climb_distance_m}}},
      {"geo_enabled", c.geo_enabled},
  };
}

ScenarioConfig scenario_config_from_json(const json& given) {
  const json j = with_defaults(to_json(ScenarioConfig{}), given);
  ScenarioConfig c;
  const json& grid = j.at("grid");
  c.grid.area_side_m = grid.at("area_side_m");
  c.grid.cells_per_side = grid.at("cells_per_side");
  c.grid.uav_altitude_m = grid.at("uav_altitude_m");
  c.grid.origin = point_from_json(grid.at("origin"));

  const json& dep = j.at("deployment");
  c.mbs_count = dep.at("mbs_count");
  c.min_separation_m = dep.at("min_separation_m");
  c.placement_attempts = dep.at("placement_attempts");

  const json& t = j.at("terrestrial");
  auto& tp = c.terrestrial;
  tp.carrier_freq_hz = t.at("carrier_freq_hz");
  tp.tx_power_dbm = t.at("tx_power_dbm");
  tp.bandwidth_hz = t.at("bandwidth_hz");
  tp.noise_psd_dbm_hz = t.at("noise_psd_dbm_hz");
  tp.array_v = t.at("array_v");
  tp.array_h = t.at("array_h");
  tp.element_spacing_wl = t.at("element_spacing_wl");
  tp.downtilt_deg = t.at("downtilt_deg");
  tp.electrical_tilt_deg = t.at("electrical_tilt_deg");
  tp.electrical_scan_deg = t.at("electrical_scan_deg");
  tp.element.max_gain_dbi = t.at("element_max_gain_dbi");
  tp.element.beamwidth_h_deg = t.at("element_beamwidth_h_deg");
  tp.element.beamwidth_v_deg = t.at("element_beamwidth_v_deg");
  tp.element.front_to_back_db = t.at("element_front_to_back_db");
  tp.element.side_lobe_limit_db = t.at("element_side_lobe_limit_db");
  tp.uav_rx_gain_dbi = t.at("uav_rx_gain_dbi");

  const json& g = j.at("geo");
  auto& gp = c.geo;
  gp.carrier_freq_hz = g.at("carrier_freq_hz");
  gp.tx_power_dbm = g.at("tx_power_dbm");
  gp.bandwidth_hz = g.at("bandwidth_hz");
  gp.noise_psd_dbm_hz = g.at("noise_psd_dbm_hz");
  gp.max_beam_gain_dbi = g.at("max_beam_gain_dbi");
  gp.beam_rolloff_width_deg = g.at("beam_rolloff_width_deg");
  gp.atmospheric_loss_db = g.at("atmospheric_loss_db");
  gp.scintillation_loss_db = g.at("scintillation_loss_db");
  gp.polarization_loss_db = g.at("polarization_loss_db");
  gp.uav_rx_gain_dbi = g.at("uav_rx_gain_dbi");
  gp.satellite = point_from_json(g.at("satellite"));
  gp.beam_center = point_from_json(g.at("beam_center"));

  const json& r = j.at("reward");
  c.threshold_db = r.at("threshold_db");
  c.start = cell_from_json(r.at("start"));
  if (r.contains("end") && !r.at("end").is_null()) c.end = cell_from_json(r.at("end"));
  c.weights = {r.at("weights").at("energy"), r.at("weights").at("handover"), r.at("weights").at("disconnect")};
  const json& h = r.at("handover");
  c.handover = {h.at("mbs_to_mbs"), h.at("geo_to_mbs"), h.at("mbs_to_geo"), h.at("geo_stay"), h.at("reconnect")};
  c.terminal_bonus = r.at("terminal_bonus");
  c.hole_semantics = hole_semantics_from_string(r.at("hole_semantics"));

  const json& e = j.at("energy");
  auto& p = c.propulsion;
  p.blade_profile_power_w = e.at("blade_profile_power_w");
  p.induced_power_w = e.at("induced_power_w");
  p.tip_speed_mps = e.at("tip_speed_mps");
  p.mean_induced_velocity_mps = e.at("mean_induced_velocity_mps");
  p.fuselage_drag_ratio = e.at("fuselage_drag_ratio");
  p.air_density = e.at("air_density");
  p.rotor_solidity = e.at("rotor_solidity");
  p.rotor_disc_area_m2 = e.at("rotor_disc_area_m2");
  c.energy = {e.at("capacity_j"), e.at("reserve_j"), e.at("cruise_speed_mps"), e.at("climb_distance_m")};

  c.geo_enabled = j.at("geo_enabled");
  return c;
}

json to_json(const TrainerConfig& c) {
  return {{"gamma", c.gamma},
          {"tau", c.tau},
          {"learning_rate", c.learning_rate},
          {"epsilon_start", c.epsilon_start},
          {"epsilon_min", c.epsilon_min},
          {"epsilon_decay", c.epsilon_decay},
          {"epsilon_schedule", to_string(c.epsilon_schedule)},
          {"episodes", c.episodes},
          {"step_cap", c.step_cap},
          {"batch_size", c.batch_size},
          {"buffer_capacity", c.buffer_capacity},
          {"hidden", c.hidden},
          {"seed", c.seed},
          {"tabular_learning_rate", c.tabular_learning_rate},
          {"max_table_entries", c.max_table_entries}};
}

TrainerConfig trainer_config_from_json(const json& given) {
  const json j = with_defaults(to_json(TrainerConfig{}), given);
  TrainerConfig c;
  c.gamma = j.at("gamma");
  c.tau = j.at("tau");
  c.learning_rate = j.at("learning_rate");
  c.epsilon_start = j.at("epsilon_start");
  c.epsilon_min = j.at("epsilon_min");
  c.epsilon_decay = j.at("epsilon_decay");
  c.epsilon_schedule = epsilon_schedule_from_string(j.at("epsilon_schedule"));
  c.episodes = j.at("episodes");
  c.step_cap = j.at("step_cap");
  c.batch_size = j.at("batch_size");
  c.buffer_capacity = j.at("buffer_capacity");
  c.hidden = j.at("hidden").get<std::vector<int>>();
  c.seed = j.at("seed");
  c.tabular_learning_rate = j.at("tabular_learning_rate");
  c.max_table_entries = j.at("max_table_entries");
  return c;
}

json scenario_to_json(const Scenario& s) {
  json sites = json::array();
  for (const auto& site : s.sites)
    sites.push_back({{"x_m", site.position.x()},
                     {"y_m", site.position.y()},
                     {"z_m", site.position.z()},
                     {"profile", to_string(site.profile)},
                     {"sector_azimuths_deg", site.sector_azimuths_deg}});
  json cells = json::array();
  const int n = s.coverage.cells_per_side();
  for (int k = 0; k < n * n; ++k) {
    const CoverageCell& c = s.coverage.cells()[std::size_t(k)];
    cells.push_back({{"row", k / n},
                     {"col", k % n},
                     {"best_mbs", c.best_mbs ? json(*c.best_mbs + 1) : json(nullptr)},
                     {"best_sinr_db", number(c.best_sinr_db)},
                     {"geo_snr_db", number(c.geo_snr_db)},
                     {"terrestrial_hole", c.terrestrial_hole},
                     {"global_hole", c.global_hole}});
  }
  return {{"format_version", kFormatVersion}, {"kind", "scenario"}, {"seed", s.seed}, {"config", to_json(s.config)},
          {"sites", sites},                   {"coverage", cells}};
}

Scenario scenario_from_json(const json& j) {
  if (j.at("format_version").get<int>() != kFormatVersion)
    throw std::invalid_argument("scenario: unsupported format_version " + j.at("format_version").dump());
  if (j.at("kind") != "scenario") throw std::invalid_argument("scenario: document kind is not 'scenario'");
  std::vector<MbsSite> sites;
  for (const auto& js : j.at("sites")) {
    MbsSite site;
    site.position = Vec3d(js.at("x_m").get<double>(), js.at("y_m").get<double>(), js.at("z_m").get<double>());
    site.profile = env_profile_from_string(js.at("profile"));
    site.sector_azimuths_deg = js.at("sector_azimuths_deg").get<std::array<double, 3>>();
    sites.push_back(site);
  }
  Scenario s = make_scenario(scenario_config_from_json(j.at("config")), std::move(sites), j.at("seed").get<std::uint64_t>());

  const json& cells = j.at("coverage");
  const int n = s.coverage.cells_per_side();
  if (cells.size() != std::size_t(n) * std::size_t(n)) throw std::invalid_argument("scenario: coverage size mismatch");
  for (const auto& jc : cells) {
    const CoverageCell& c = s.coverage.at({jc.at("row"), jc.at("col")});
    const bool same = (jc.at("best_mbs").is_null() ? !c.best_mbs : (c.best_mbs && *c.best_mbs + 1 == jc.at("best_mbs"))) &&
                      number_from(jc.at("best_sinr_db"), -INFINITY) == c.best_sinr_db &&
                      number_from(jc.at("geo_snr_db"), -INFINITY) == c.geo_snr_db &&
                      jc.at("terrestrial_hole") == c.terrestrial_hole && jc.at("global_hole") == c.global_hole;
    if (!same)
      throw std::invalid_argument("scenario: stored coverage map disagrees with sites at cell (" +
                                  jc.at("row").dump() + "," + jc.at("col").dump() + ")");
  }
  return s;
}

namespace {

template <typename Vec>
json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Index k = 0; k < v.size(); ++k) a.push_back(double(v[k]));
  return a;
}

VecX<float> vec_from_json(const json& a, Index expected, const char* what) {
  if (Index(a.size()) != expected)
    throw std::invalid_argument(std::string("checkpoint: ") + what + " has " + std::to_string(a.size()) +
                                " values, expected " + std::to_string(expected));
  VecX<float> v(expected);
  for (Index k = 0; k < expected; ++k) v[k] = a.at(std::size_t(k)).get<float>();
  return v;
}

}  // namespace

json checkpoint_to_json(const DqnAgent& a, const TrainerConfig& cfg, std::uint64_t scenario_seed) {
  return {{"format_version", kFormatVersion},
          {"kind", "checkpoint"},
          {"seed", cfg.seed},
          {"scenario_seed", scenario_seed},
          {"widths", a.online.widths()},
          {"trainer", to_json(cfg)},
          {"online", vec_to_json(a.online.parameters())},
          {"target", vec_to_json(a.target.parameters())},
          {"optimizer",
           {{"learning_rate", a.optimizer.learning_rate()},
            {"steps", a.optimizer.steps()},
            {"first_moment", vec_to_json(a.optimizer.first_moment())},
            {"second_moment", vec_to_json(a.optimizer.second_moment())}}}};
}

DqnAgent checkpoint_from_json(const json& j, const TrainerConfig& expected) {
  if (j.at("format_version").get<int>() != kFormatVersion)
    throw std::invalid_argument("checkpoint: unsupported format_version " + j.at("format_version").dump());
  if (j.at("kind") != "checkpoint") throw std::invalid_argument("checkpoint: document kind is not 'checkpoint'");
  std::vector<int> widths{3};
  widths.insert(widths.end(), expected.hidden.begin(), expected.hidden.end());
  widths.push_back(kActionCount);
  const auto stored = j.at("widths").get<std::vector<int>>();
  if (stored != widths) throw std::invalid_argument("checkpoint: layer shapes do not match the configured network");

  DqnAgent a{Network(widths), Network(widths), {}};
  const Index n = a.online.parameter_count();
  a.online.parameters() = vec_from_json(j.at("online"), n, "online parameters");
  a.target.parameters() = vec_from_json(j.at("target"), n, "target parameters");
  const json& opt = j.at("optimizer");
  a.optimizer = Adam<float>(n, opt.at("learning_rate").get<double>());
  a.optimizer.restore(opt.at("steps").get<long long>(), vec_from_json(opt.at("first_moment"), n, "first moment"),
                      vec_from_json(opt.at("second_moment"), n, "second moment"));
  return a;
}

json summary_to_json(const TrajectorySummary& s) {
  return {{"steps", s.steps},
          {"length_m", s.length_m},
          {"handover_total", s.handover_total},
          {"hole_steps", s.hole_steps},
          {"energy_j", s.energy_j},
          {"total_reward", s.total_reward},
          {"cost", s.cost()},
          {"xi_total", s.xi_total},
          {"delta_total", s.delta_total},
          {"reached_end", s.reached_end},
          {"done_reason", to_string(s.done_reason)}};
}

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void csv_preamble(std::ostream& os, const char* kind, std::uint64_t seed) {
  os << "# format_version=" << kFormatVersion << " kind=" << kind << " seed=" << seed << "\n";
}

}  // namespace

void write_coverage_csv(std::ostream& os, const Scenario& s) {
  csv_preamble(os, "coverage", s.seed);
  os << "row,col,best_mbs,best_sinr_db,geo_snr_db,terrestrial_hole,global_hole\n";
  const int n = s.coverage.cells_per_side();
  for (int k = 0; k < n * n; ++k) {
    const CoverageCell& c = s.coverage.cells()[std::size_t(k)];
    os << k / n << ',' << k % n << ',' << (c.best_mbs ? std::to_string(*c.best_mbs + 1) : std::string()) << ','
       << fmt(c.best_sinr_db) << ',' << fmt(c.geo_snr_db) << ',' << int(c.terrestrial_hole) << ','
       << int(c.global_hole) << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t, const Scenario& s) {
  csv_preamble(os, "trajectory", s.seed);
  os << "t,row,col,x_m,y_m,assoc_mode,association,xi,eta,delta,reward,cumulative_energy_j\n";
  auto row = [&](int step, const MdpState& st, int indicator, double xi, double eta, double delta, double r, double e) {
    const Vec3d c = grid_center(st.grid, s.grid());
    os << step << ',' << st.grid.row << ',' << st.grid.col << ',' << fmt(c.x()) << ',' << fmt(c.y()) << ','
       << st.assoc_mode << ',' << indicator << ',' << fmt(xi) << ',' << fmt(eta) << ',' << fmt(delta) << ','
       << fmt(r) << ',' << fmt(e) << '\n';
  };
  row(0, t.start, t.start_indicator, 0, 0, 0, 0, 0);
  for (const auto& st : t.steps) row(st.t, st.state, st.indicator, st.xi, st.eta, st.delta, st.reward, st.cumulative_energy_j);
}

void write_rewards_csv(std::ostream& os, const std::vector<double>& rewards, std::uint64_t seed) {
  csv_preamble(os, "rewards", seed);
  os << "episode,total_reward\n";
  for (std::size_t e = 0; e < rewards.size(); ++e) os << e + 1 << ',' << fmt(rewards[e]) << '\n';
}

json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("cannot parse " + p.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

void write_json_file(const std::filesystem::path& p, const json& j) { write_text_file(p, j.dump(2) + "\n"); }

std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace jutap
