// SPDX-License-Identifier: Apache-2.0
#include "jutap/runner.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "jutap/dqn.hpp"
#include "jutap/oracle.hpp"
#include "jutap/tabular_q.hpp"

namespace jutap {

const char* to_string(Method m) {
  switch (m) {
    case Method::Dqn: return "dqn";
    case Method::Tabular: return "tabular";
    case Method::Oracle: return "oracle";
  }
  return "dqn";
}

Method method_from_string(const std::string& s) {
  if (s == "dqn") return Method::Dqn;
  if (s == "tabular") return Method::Tabular;
  if (s == "oracle") return Method::Oracle;
  throw std::invalid_argument("unknown method '" + s + "' (expected dqn, tabular or oracle)");
}

json to_json(const EffectiveConfig& c) {
  return {{"format_version", kFormatVersion}, {"kind", "config"},        {"seed", c.seed},
          {"scenario_seed", c.scenario_seed}, {"method", c.method},      {"scenario", to_json(c.scenario)},
          {"trainer", to_json(c.trainer)}};
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  std::string pointer;
  std::istringstream parts(key);
  for (std::string part; std::getline(parts, part, '.');) pointer += "/" + part;
  const json::json_pointer ptr(pointer);
  if (!doc.contains(ptr)) throw std::invalid_argument("unknown config key: " + key);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  doc[ptr] = value;
}

EffectiveConfig resolve_config(const CommandOptions& opts, const Scenario* base) {
  EffectiveConfig defaults;
  if (base) defaults.scenario = base->config;
  json doc = to_json(defaults);
  doc["scenario_seed"] = nullptr;

  if (opts.config) {
    json file = read_json_file(*opts.config);
    if (!file.is_object()) throw std::invalid_argument(opts.config->string() + ": config must be a JSON object");
    // The bookkeeping keys of a persisted config are accepted and checked, not merged.
    if (file.contains("format_version") && file.at("format_version") != kFormatVersion)
      throw std::invalid_argument(opts.config->string() + ": unsupported format_version");
    file.erase("format_version");
    file.erase("kind");
    check_known_keys(file, doc);
    doc.merge_patch(file);
  }
  for (const auto& o : opts.overrides) apply_override(doc, o);

  if (opts.seed) doc["seed"] = *opts.seed;
  if (opts.weights)
    doc["scenario"]["reward"]["weights"] = {
        {"energy", (*opts.weights)[0]}, {"handover", (*opts.weights)[1]}, {"disconnect", (*opts.weights)[2]}};
  if (opts.no_geo) doc["scenario"]["geo_enabled"] = false;
  if (opts.episodes) doc["trainer"]["episodes"] = *opts.episodes;
  if (opts.method) doc["method"] = to_string(*opts.method);

  EffectiveConfig c;
  c.seed = doc.at("seed").get<std::uint64_t>();
  if (base)
    c.scenario_seed = base->seed;
  else if (doc.contains("scenario_seed") && !doc.at("scenario_seed").is_null())
    c.scenario_seed = doc.at("scenario_seed").get<std::uint64_t>();
  else
    c.scenario_seed = c.seed;
  c.method = to_string(method_from_string(doc.at("method").get<std::string>()));
  c.scenario = scenario_config_from_json(doc.value("scenario", json::object()));
  c.trainer = trainer_config_from_json(doc.value("trainer", json::object()));
  c.trainer.seed = c.seed;
  c.scenario.validate();
  c.trainer.validate();
  return c;
}

RunLock::RunLock(const fs::path& dir) : path_(dir / ".lock") {
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST)
      throw std::runtime_error("run directory " + dir.string() + " is locked by another run (" + path_.string() + ")");
    throw std::runtime_error("cannot create " + path_.string() + ": " + std::strerror(errno));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

RunLock::~RunLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

namespace {

fs::path out_dir(const CommandOptions& opts, const fs::path& fallback = "run") {
  fs::path dir = opts.out.value_or(fallback);
  fs::create_directories(dir);
  return dir;
}

struct Loaded {
  EffectiveConfig config;
  Scenario scenario;
};

/// Scenario from --scenario (re-derived if the effective config differs) or generated.
Loaded load_or_generate(const CommandOptions& opts) {
  if (opts.scenario) {
    const Scenario base = scenario_from_json(read_json_file(*opts.scenario));
    EffectiveConfig cfg = resolve_config(opts, &base);
    if (to_json(cfg.scenario) == to_json(base.config)) return {cfg, base};
    return {cfg, make_scenario(cfg.scenario, base.sites, base.seed)};
  }
  EffectiveConfig cfg = resolve_config(opts);
  Scenario s = generate_scenario(cfg.scenario_seed, cfg.scenario);
  return {cfg, std::move(s)};
}

template <typename Writer>
std::string to_text(Writer&& w) {
  std::ostringstream os;
  w(os);
  return os.str();
}

void write_scenario_files(const fs::path& dir, const EffectiveConfig& cfg, const Scenario& s) {
  write_json_file(dir / "config.json", to_json(cfg));
  write_json_file(dir / "scenario.json", scenario_to_json(s));
  write_text_file(dir / "coverage.csv", to_text([&](std::ostream& os) { write_coverage_csv(os, s); }));
}

json header(const char* kind, const EffectiveConfig& cfg) {
  return {{"format_version", kFormatVersion}, {"kind", kind}, {"seed", cfg.seed}, {"scenario_seed", cfg.scenario_seed}};
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string describe(const TrajectorySummary& s) {
  return "length " + fixed(s.length_m, 2) + " m, steps " + std::to_string(s.steps) + ", handover total " +
         fixed(s.handover_total, 2) + ", hole steps " + std::to_string(s.hole_steps) + ", energy " +
         fixed(s.energy_j, 1) + " J, reward " + fixed(s.total_reward, 4) + ", " + to_string(s.done_reason);
}

QTable qtable_from_json(const json& j, const GridSpec& grid) {
  if (j.at("format_version") != kFormatVersion || j.at("kind") != "qtable")
    throw std::invalid_argument("qtable: unsupported document");
  QTable t(grid);
  const json& rows = j.at("values");
  if (Index(rows.size()) != t.values().rows()) throw std::invalid_argument("qtable: state count does not match the grid");
  for (int k = 0; k < int(rows.size()); ++k) {
    const MdpState s{grid.unflat(k / 2), k % 2};
    if (rows[std::size_t(k)].size() != std::size_t(kActionCount)) throw std::invalid_argument("qtable: bad row width");
    for (int a = 0; a < kActionCount; ++a) t.at(s, a) = rows[std::size_t(k)][std::size_t(a)].get<double>();
  }
  return t;
}

json qtable_to_json(const QTable& t, const EffectiveConfig& cfg) {
  json rows = json::array();
  for (Index r = 0; r < t.values().rows(); ++r) {
    json row = json::array();
    for (Index a = 0; a < t.values().cols(); ++a) row.push_back(t.values()(r, a));
    rows.push_back(std::move(row));
  }
  json j = header("qtable", cfg);
  j["values"] = std::move(rows);
  return j;
}

struct Learned {
  RunRecord record;
  std::optional<DqnAgent> agent;
  std::optional<QTable> table;
};

Learned learn(const Scenario& s, const EffectiveConfig& cfg) {
  switch (method_from_string(cfg.method)) {
    case Method::Dqn: {
      TrainResult r = train(s, cfg.trainer);
      return {std::move(r.record), std::move(r.agent), std::nullopt};
    }
    case Method::Tabular: {
      TabularResult r = tabular_q_learning(s, cfg.trainer);
      return {std::move(r.record), std::nullopt, std::move(r.table)};
    }
    case Method::Oracle: break;
  }
  throw std::invalid_argument("train: method must be dqn or tabular");
}

}  // namespace

json oracle_report(const OracleResult& r, const Scenario& s) {
  const TrajectorySummary& sum = r.trajectory.summary;
  double eta = 0.0;
  for (const auto& st : r.trajectory.steps) eta += st.eta;
  const auto& w = s.config.weights;
  json actions = json::array();
  for (const auto& a : r.actions) actions.push_back(a.index());
  return {{"cost", r.cost},
          {"feasible", r.feasible},
          {"budget_constrained", r.budget_constrained},
          {"available_energy_j", s.available_energy()},
          {"decomposition",
           {{"xi_total", sum.xi_total},
            {"eta_total", eta},
            {"delta_total", sum.delta_total},
            {"energy_term", w.energy * sum.xi_total},
            {"handover_term", -w.handover * eta},
            {"disconnect_term", -w.disconnect * sum.delta_total}}},
          {"summary", summary_to_json(sum)},
          {"actions", actions}};
}

CommandResult cmd_generate(const CommandOptions& opts) {
  const fs::path dir = out_dir(opts);
  RunLock lock(dir);
  auto [cfg, s] = load_or_generate(opts);
  write_scenario_files(dir, cfg, s);

  double lo = INFINITY, hi = -INFINITY, min_sep = INFINITY;
  for (const auto& c : s.coverage.cells()) {
    lo = std::min(lo, c.geo_snr_db);
    hi = std::max(hi, c.geo_snr_db);
  }
  for (std::size_t i = 0; i < s.sites.size(); ++i)
    for (std::size_t k = i + 1; k < s.sites.size(); ++k)
      min_sep = std::min(min_sep, (s.sites[i].position - s.sites[k].position).head<2>().norm());

  json sum = header("generate_summary", cfg);
  sum["mbs_count"] = s.mbs_count();
  sum["terrestrial_holes"] = s.coverage.terrestrial_hole_count();
  sum["global_holes"] = s.coverage.global_hole_count();
  sum["geo_enabled"] = s.config.geo_enabled;
  sum["geo_snr_db"] = {{"min", lo}, {"max", hi}};
  sum["min_site_separation_m"] = std::isfinite(min_sep) ? json(min_sep) : json(nullptr);
  write_json_file(dir / "summary.json", sum);

  std::string text = "scenario seed " + std::to_string(s.seed) + ": " + std::to_string(s.mbs_count()) +
                     " MBS, terrestrial holes " + std::to_string(s.coverage.terrestrial_hole_count()) +
                     ", global holes " + std::to_string(s.coverage.global_hole_count()) + ", GEO SNR " +
                     fixed(lo, 2) + ".." + fixed(hi, 2) + " dB" + (s.config.geo_enabled ? "" : " (GEO disabled)") +
                     "\nwrote " + dir.string() + "\n";
  return {sum, text};
}

CommandResult cmd_train(const CommandOptions& opts) {
  const fs::path dir = out_dir(opts);
  RunLock lock(dir);
  auto [cfg, s] = load_or_generate(opts);
  if (cfg.method == "oracle") throw std::invalid_argument("train: method must be dqn or tabular");
  write_scenario_files(dir, cfg, s);

  Learned l = learn(s, cfg);
  write_text_file(dir / "rewards.csv",
                  to_text([&](std::ostream& os) { write_rewards_csv(os, l.record.episode_rewards, cfg.seed); }));
  write_text_file(dir / "trajectory.csv",
                  to_text([&](std::ostream& os) { write_trajectory_csv(os, l.record.trajectory, s); }));
  if (l.agent) write_json_file(dir / "checkpoint.json", checkpoint_to_json(*l.agent, cfg.trainer, s.seed));
  if (l.table) write_json_file(dir / "qtable.json", qtable_to_json(*l.table, cfg));

  json sum = header("train_summary", cfg);
  sum["method"] = cfg.method;
  sum["episodes"] = l.record.episode_rewards.size();
  sum["trajectory"] = summary_to_json(l.record.trajectory.summary);
  sum["wall_clock_s"] = l.record.wall_clock_s;
  write_json_file(dir / "summary.json", sum);

  std::string text = cfg.method + " trained " + std::to_string(l.record.episode_rewards.size()) + " episodes in " +
                     fixed(l.record.wall_clock_s, 1) + " s\ngreedy from START: " +
                     describe(l.record.trajectory.summary) + "\nwrote " + dir.string() + "\n";
  return {sum, text};
}

CommandResult cmd_evaluate(const CommandOptions& opts) {
  if (!opts.run_dir) throw std::invalid_argument("evaluate: --run-dir is required");
  const fs::path run = *opts.run_dir;
  CommandOptions o = opts;
  if (!o.config) o.config = run / "config.json";
  if (!o.scenario) o.scenario = run / "scenario.json";
  const fs::path dir = out_dir(o, run);
  RunLock lock(dir);
  auto [cfg, s] = load_or_generate(o);

  const MdpState start{s.start(), 0};
  const int cap = cfg.trainer.step_cap;
  Trajectory t;
  std::string method;
  if (fs::exists(run / "checkpoint.json")) {
    method = "dqn";
    const DqnAgent agent = checkpoint_from_json(read_json_file(run / "checkpoint.json"), cfg.trainer);
    t = greedy_rollout(agent.online, s, start, cap);
  } else if (fs::exists(run / "qtable.json")) {
    method = "tabular";
    t = greedy_rollout(qtable_from_json(read_json_file(run / "qtable.json"), s.grid()), s, start, cap);
  } else {
    throw std::runtime_error("evaluate: no checkpoint.json or qtable.json in " + run.string());
  }
  write_text_file(dir / "evaluation_trajectory.csv", to_text([&](std::ostream& os) { write_trajectory_csv(os, t, s); }));

  const double v = s.config.energy.cruise_speed_mps;
  json sum = header("evaluation", cfg);
  sum["method"] = method;
  sum["summary"] = summary_to_json(t.summary);
  sum["energy_closed_form_j"] = propulsion_power(v, s.config.propulsion) * t.summary.length_m / v;
  write_json_file(dir / "evaluation.json", sum);
  return {sum, method + " greedy from START: " + describe(t.summary) + "\nwrote " + dir.string() + "\n"};
}

CommandResult cmd_oracle(const CommandOptions& opts) {
  const fs::path dir = out_dir(opts);
  RunLock lock(dir);
  auto [cfg, s] = load_or_generate(opts);
  write_scenario_files(dir, cfg, s);
  const OracleResult r = exact_optimum(s);
  write_text_file(dir / "oracle_trajectory.csv",
                  to_text([&](std::ostream& os) { write_trajectory_csv(os, r.trajectory, s); }));
  json sum = header("oracle", cfg);
  sum.update(oracle_report(r, s));
  write_json_file(dir / "oracle.json", sum);
  const json& d = sum["decomposition"];
  std::string text = "oracle cost " + fixed(r.cost, 6) + (r.feasible ? "" : " (infeasible)") + "\n" +
                     describe(r.trajectory.summary) + "\nsum xi " + fixed(d["xi_total"], 4) + ", sum eta " +
                     fixed(d["eta_total"], 2) + ", sum delta " + fixed(d["delta_total"], 0) + "\nwrote " +
                     dir.string() + "\n";
  return {sum, text};
}

CommandResult cmd_ablate(const CommandOptions& opts) {
  const fs::path dir = out_dir(opts);
  RunLock lock(dir);
  CommandOptions o = opts;
  if (!o.method) o.method = Method::Oracle;
  auto [cfg, base] = load_or_generate(o);

  json sum = header("ablation", cfg);
  sum["method"] = cfg.method;
  std::string text = "variant      length_m  hole_steps  handover  energy_j    reward\n";
  for (const bool geo : {true, false}) {
    const char* name = geo ? "integrated" : "standalone";
    ScenarioConfig sc = base.config;
    sc.geo_enabled = geo;
    const Scenario s = make_scenario(sc, base.sites, base.seed);
    Trajectory t;
    if (cfg.method == "oracle") {
      t = exact_optimum(s).trajectory;
    } else {
      Learned l = learn(s, cfg);
      write_text_file(dir / ("rewards_" + std::string(name) + ".csv"),
                      to_text([&](std::ostream& os) { write_rewards_csv(os, l.record.episode_rewards, cfg.seed); }));
      t = std::move(l.record.trajectory);
    }
    if (geo) write_scenario_files(dir, cfg, s);
    write_text_file(dir / ("trajectory_" + std::string(name) + ".csv"),
                    to_text([&](std::ostream& os) { write_trajectory_csv(os, t, s); }));
    sum[name] = summary_to_json(t.summary);
    std::ostringstream row;
    row << std::left << std::setw(11) << name << std::right << std::fixed << std::setprecision(2) << std::setw(10)
        << t.summary.length_m << std::setw(12) << t.summary.hole_steps << std::setw(10) << t.summary.handover_total
        << std::setprecision(1) << std::setw(10) << t.summary.energy_j << std::setprecision(4) << std::setw(10)
        << t.summary.total_reward << "\n";
    text += row.str();
  }
  write_json_file(dir / "ablation.json", sum);
  return {sum, text + "wrote " + dir.string() + "\n"};
}

}  // namespace jutap
