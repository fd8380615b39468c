#include "impmatch/config.hpp"

#include <algorithm>
#include <initializer_list>
#include <string_view>

#include "impmatch/errors.hpp"
#include "json.hpp"

namespace impmatch {
namespace {

using json = nlohmann::ordered_json;

void require_object(const json& j, std::string_view where) {
  if (!j.is_object()) throw ValidationError(std::string(where) + ": expected a JSON object");
}

// Config sections are strict: a misspelled gain name must not be ignored.
void allow_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> keys) {
  require_object(j, where);
  for (const auto& [key, _] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ValidationError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

double number(const json& j, std::string_view where, std::string_view key) {
  const auto& v = j.at(std::string(key));
  if (!v.is_number()) {
    throw ValidationError(std::string(where) + "." + std::string(key) + ": expected a number");
  }
  return v.get<double>();
}

void read_number(const json& j, std::string_view where, std::string_view key, double& out) {
  if (j.contains(std::string(key))) out = number(j, where, key);
}

void read_count(const json& j, std::string_view where, std::string_view key, std::size_t& out) {
  const std::string k(key);
  if (!j.contains(k)) return;
  if (!j[k].is_number_unsigned()) {
    throw ValidationError(std::string(where) + "." + k + ": expected a non-negative integer");
  }
  out = j[k].get<std::size_t>();
}

void read_pair(const json& j, std::string_view where, std::string_view key,
               std::pair<double, double>& out) {
  const std::string k(key);
  if (!j.contains(k)) return;
  const auto& v = j[k];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ValidationError(std::string(where) + "." + k + ": expected [min, max]");
  }
  out = {v[0].get<double>(), v[1].get<double>()};
}

json params_to_json(const ActuatorParams& p) {
  json j;
  j["link_inertia"] = p.link_inertia;
  j["viscous_friction"] = p.viscous_friction;
  j["rotor_inertia"] = p.rotor_inertia;
  j["gear_ratio"] = p.gear_ratio;
  j["torque_limit"] = p.torque_limit ? json(*p.torque_limit) : json(nullptr);
  j["dry_friction"] = p.dry_friction;
  if (p.voltage_model) {
    j["voltage_model"] = {{"torque_constant", p.voltage_model->torque_constant},
                          {"winding_resistance", p.voltage_model->winding_resistance},
                          {"bus_voltage", p.voltage_model->bus_voltage}};
  } else {
    j["voltage_model"] = nullptr;
  }
  return j;
}

ActuatorParams params_from_json(const json& j) {
  constexpr std::string_view where = "actuator_sim.params";
  allow_keys(j, where, {"link_inertia", "viscous_friction", "rotor_inertia", "gear_ratio",
                        "torque_limit", "dry_friction", "voltage_model"});
  ActuatorParams p;
  read_number(j, where, "link_inertia", p.link_inertia);
  read_number(j, where, "viscous_friction", p.viscous_friction);
  read_number(j, where, "rotor_inertia", p.rotor_inertia);
  read_number(j, where, "gear_ratio", p.gear_ratio);
  read_number(j, where, "dry_friction", p.dry_friction);
  if (j.contains("torque_limit") && !j["torque_limit"].is_null()) {
    p.torque_limit = number(j, where, "torque_limit");
  }
  if (j.contains("voltage_model") && !j["voltage_model"].is_null()) {
    const auto& v = j["voltage_model"];
    constexpr std::string_view vw = "actuator_sim.params.voltage_model";
    allow_keys(v, vw, {"torque_constant", "winding_resistance", "bus_voltage"});
    for (auto key : {"torque_constant", "winding_resistance", "bus_voltage"}) {
      if (!v.contains(key)) throw ValidationError(std::string(vw) + ": missing " + key);
    }
    p.voltage_model = VoltageModel{number(v, vw, "torque_constant"),
                                   number(v, vw, "winding_resistance"),
                                   number(v, vw, "bus_voltage")};
  }
  p.validate();
  return p;
}

json gains_to_json(const PDGains& g) { return {{"kp", g.kp}, {"kd", g.kd}}; }

PDGains gains_from_json_value(const json& j, std::string_view where) {
  allow_keys(j, where, {"kp", "kd"});
  PDGains g;
  read_number(j, where, "kp", g.kp);
  read_number(j, where, "kd", g.kd);
  g.validate();
  return g;
}

json sim_to_json(const SimConfig& s) {
  json j;
  j["inner_loop_rate"] = s.inner_loop_rate;
  j["log_rate"] = s.log_rate;
  j["integrator"] = "semi_implicit_euler";
  j["initial_state"] = {{"position", s.initial_state.position},
                        {"velocity", s.initial_state.velocity}};
  j["measurement_noise_std"] = s.measurement_noise_std;
  j["velocity_feedforward"] = s.velocity_feedforward;
  return j;
}

SimConfig sim_from_json(const json& j) {
  constexpr std::string_view where = "actuator_sim.sim";
  allow_keys(j, where, {"inner_loop_rate", "log_rate", "integrator", "initial_state",
                        "measurement_noise_std", "velocity_feedforward"});
  SimConfig s;
  read_number(j, where, "inner_loop_rate", s.inner_loop_rate);
  read_number(j, where, "log_rate", s.log_rate);
  read_number(j, where, "measurement_noise_std", s.measurement_noise_std);
  if (j.contains("integrator") && j["integrator"] != "semi_implicit_euler") {
    throw ValidationError("actuator_sim.sim.integrator: only semi_implicit_euler is supported");
  }
  if (j.contains("initial_state")) {
    const auto& st = j["initial_state"];
    allow_keys(st, "actuator_sim.sim.initial_state", {"position", "velocity"});
    read_number(st, "actuator_sim.sim.initial_state", "position", s.initial_state.position);
    read_number(st, "actuator_sim.sim.initial_state", "velocity", s.initial_state.velocity);
  }
  if (j.contains("velocity_feedforward")) {
    if (!j["velocity_feedforward"].is_boolean()) {
      throw ValidationError("actuator_sim.sim.velocity_feedforward: expected a boolean");
    }
    s.velocity_feedforward = j["velocity_feedforward"].get<bool>();
  }
  s.validate();
  return s;
}

json chirp_to_json(const ChirpSpec& c) {
  json j;
  j["f_start"] = c.f_start;
  j["f_end"] = c.f_end;
  j["amplitude"] = c.amplitude;
  j["duration"] = c.duration;
  j["sweep_law"] = c.sweep_law == SweepLaw::kLinear ? "linear" : "logarithmic";
  return j;
}

ChirpSpec chirp_from_json_value(const json& j) {
  constexpr std::string_view where = "excitation.chirp";
  allow_keys(j, where, {"f_start", "f_end", "amplitude", "duration", "sweep_law"});
  ChirpSpec c;
  read_number(j, where, "f_start", c.f_start);
  read_number(j, where, "f_end", c.f_end);
  read_number(j, where, "amplitude", c.amplitude);
  read_number(j, where, "duration", c.duration);
  if (j.contains("sweep_law")) {
    const auto& law = j["sweep_law"];
    if (law == "linear") {
      c.sweep_law = SweepLaw::kLinear;
    } else if (law == "logarithmic") {
      c.sweep_law = SweepLaw::kLogarithmic;
    } else {
      throw ValidationError("excitation.chirp.sweep_law: expected linear or logarithmic");
    }
  }
  c.validate();
  return c;
}

json band_to_json(const FrequencyBand& b) { return {{"f_low", b.f_low}, {"f_high", b.f_high}}; }

json grid_to_json(const GainGrid& g) {
  json j;
  j["kp_range"] = {g.kp_range.first, g.kp_range.second};
  j["kd_range"] = {g.kd_range.first, g.kd_range.second};
  j["kp_count"] = g.kp_count;
  j["kd_count"] = g.kd_count;
  return j;
}

std::string_view mode_name(MatchMode mode) {
  return mode == MatchMode::kAnalytic ? "analytic" : "simulated";
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

void PipelineConfig::validate() const {
  params.validate();
  gains.validate();
  sim.validate();
  chirp.validate();
  band.validate();
  grid.validate();
  if (!(welch.window_seconds > 0.0) ||
      !(welch.overlap_fraction >= 0.0 && welch.overlap_fraction < 1.0)) {
    throw ValidationError("freq_analysis.welch: window_seconds > 0 and overlap_fraction in [0, 1)");
  }
  if (!(bode_grid.f_min > 0.0 && bode_grid.f_max > bode_grid.f_min) || bode_grid.points < 2) {
    throw ValidationError("freq_analysis.bode_grid: require 0 < f_min < f_max and points >= 2");
  }
  if (!(range_step.kp > 0.0 && range_step.kd > 0.0)) {
    throw ValidationError("matcher.range_step: steps must be positive");
  }
  if (!(margin_factor >= 1.0)) throw ValidationError("matcher.margin_factor must be >= 1");
}

PipelineConfig parse_config(const std::string& json_text) {
  const json root = parse_text(json_text);
  allow_keys(root, "config", {"actuator_sim", "excitation", "freq_analysis", "matcher"});
  PipelineConfig cfg;

  try {
    if (root.contains("actuator_sim")) {
      const auto& s = root["actuator_sim"];
      allow_keys(s, "actuator_sim", {"params", "gains", "sim"});
      if (s.contains("params")) cfg.params = params_from_json(s["params"]);
      if (s.contains("gains")) cfg.gains = gains_from_json_value(s["gains"], "actuator_sim.gains");
      if (s.contains("sim")) cfg.sim = sim_from_json(s["sim"]);
    }
    if (root.contains("excitation")) {
      const auto& s = root["excitation"];
      allow_keys(s, "excitation", {"chirp"});
      if (s.contains("chirp")) cfg.chirp = chirp_from_json_value(s["chirp"]);
    }
    if (root.contains("freq_analysis")) {
      const auto& s = root["freq_analysis"];
      allow_keys(s, "freq_analysis", {"band", "welch", "bode_grid"});
      if (s.contains("band")) {
        allow_keys(s["band"], "freq_analysis.band", {"f_low", "f_high"});
        read_number(s["band"], "freq_analysis.band", "f_low", cfg.band.f_low);
        read_number(s["band"], "freq_analysis.band", "f_high", cfg.band.f_high);
      }
      if (s.contains("welch")) {
        allow_keys(s["welch"], "freq_analysis.welch", {"window_seconds", "overlap_fraction"});
        read_number(s["welch"], "freq_analysis.welch", "window_seconds", cfg.welch.window_seconds);
        read_number(s["welch"], "freq_analysis.welch", "overlap_fraction",
                    cfg.welch.overlap_fraction);
      }
      if (s.contains("bode_grid")) {
        allow_keys(s["bode_grid"], "freq_analysis.bode_grid", {"f_min", "f_max", "points"});
        read_number(s["bode_grid"], "freq_analysis.bode_grid", "f_min", cfg.bode_grid.f_min);
        read_number(s["bode_grid"], "freq_analysis.bode_grid", "f_max", cfg.bode_grid.f_max);
        read_count(s["bode_grid"], "freq_analysis.bode_grid", "points", cfg.bode_grid.points);
      }
    }
    if (root.contains("matcher")) {
      const auto& s = root["matcher"];
      allow_keys(s, "matcher", {"grid", "mode", "range_step", "margin_factor"});
      if (s.contains("grid")) {
        const auto& g = s["grid"];
        allow_keys(g, "matcher.grid", {"kp_range", "kd_range", "kp_count", "kd_count"});
        read_pair(g, "matcher.grid", "kp_range", cfg.grid.kp_range);
        read_pair(g, "matcher.grid", "kd_range", cfg.grid.kd_range);
        read_count(g, "matcher.grid", "kp_count", cfg.grid.kp_count);
        read_count(g, "matcher.grid", "kd_count", cfg.grid.kd_count);
      }
      if (s.contains("mode")) {
        if (s["mode"] == "analytic") {
          cfg.mode = MatchMode::kAnalytic;
        } else if (s["mode"] == "simulated") {
          cfg.mode = MatchMode::kSimulated;
        } else {
          throw ValidationError("matcher.mode: expected analytic or simulated");
        }
      }
      if (s.contains("range_step")) {
        allow_keys(s["range_step"], "matcher.range_step", {"kp", "kd"});
        read_number(s["range_step"], "matcher.range_step", "kp", cfg.range_step.kp);
        read_number(s["range_step"], "matcher.range_step", "kd", cfg.range_step.kd);
      }
      read_number(s, "matcher", "margin_factor", cfg.margin_factor);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }

  cfg.validate();
  return cfg;
}

std::string dump_config(const PipelineConfig& c) {
  json root;
  root["actuator_sim"] = {{"params", params_to_json(c.params)},
                          {"gains", gains_to_json(c.gains)},
                          {"sim", sim_to_json(c.sim)}};
  root["excitation"] = {{"chirp", chirp_to_json(c.chirp)}};
  root["freq_analysis"] = {
      {"band", band_to_json(c.band)},
      {"welch", {{"window_seconds", c.welch.window_seconds},
                 {"overlap_fraction", c.welch.overlap_fraction}}},
      {"bode_grid",
       {{"f_min", c.bode_grid.f_min}, {"f_max", c.bode_grid.f_max}, {"points", c.bode_grid.points}}}};
  root["matcher"] = {{"grid", grid_to_json(c.grid)},
                     {"mode", mode_name(c.mode)},
                     {"range_step", {{"kp", c.range_step.kp}, {"kd", c.range_step.kd}}},
                     {"margin_factor", c.margin_factor}};
  return root.dump(2) + "\n";
}

std::string to_json(const ActuatorParams& params) { return params_to_json(params).dump(2); }
std::string to_json(const PDGains& gains) { return gains_to_json(gains).dump(2); }
std::string to_json(const SimConfig& sim) { return sim_to_json(sim).dump(2); }
std::string to_json(const ChirpSpec& chirp) { return chirp_to_json(chirp).dump(2); }

ActuatorParams actuator_params_from_json(const std::string& text) {
  return params_from_json(parse_text(text));
}
PDGains gains_from_json(const std::string& text) {
  return gains_from_json_value(parse_text(text), "gains");
}
SimConfig sim_config_from_json(const std::string& text) { return sim_from_json(parse_text(text)); }
ChirpSpec chirp_from_json(const std::string& text) { return chirp_from_json_value(parse_text(text)); }

std::string match_summary_json(const MatchResult& result, MatchMode mode) {
  json j;
  j["best_gains"] = gains_to_json(result.best_gains);
  j["best_error"] = result.best_error;
  j["best_cell"] = {{"kp_index", result.best_cell / result.grid.kd_count},
                    {"kd_index", result.best_cell % result.grid.kd_count}};
  j["band"] = band_to_json(result.band);
  j["grid"] = grid_to_json(result.grid);
  j["mode"] = mode_name(mode);
  return j.dump(2) + "\n";
}

PDGains best_gains_from_summary(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object() || !j.contains("best_gains")) {
    throw ValidationError("summary: missing best_gains");
  }
  try {
    return gains_from_json_value(j["best_gains"], "summary.best_gains");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("summary: ") + e.what());
  }
}

std::string ranges_json(const GainRanges& ranges, const std::vector<CoverageGap>& gaps) {
  auto range = [](const RandomizationRange& r) {
    json j;
    j["nominal"] = r.nominal;
    j["half_range"] = r.half_range;
    j["margin_factor"] = r.margin_factor;
    j["step"] = r.step;
    j["uniform"] = {-r.half_range, r.half_range};
    return j;
  };
  json j;
  j["domain_randomization"] = {{"stiffness", range(ranges.kp)}, {"damping", range(ranges.kd)}};
  json uncovered = json::array();
  for (const auto& g : gaps) {
    uncovered.push_back({{"index", g.index},
                         {"component", g.component},
                         {"value", g.value},
                         {"lower", g.lower},
                         {"upper", g.upper}});
  }
  j["coverage"] = {{"all_covered", gaps.empty()}, {"uncovered", uncovered}};
  return j.dump(2) + "\n";
}

}  // namespace impmatch
