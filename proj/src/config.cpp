#include "librot/io/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "librot/errors.hpp"
#include "librot/version.hpp"

namespace librot::io {

namespace {

using nlohmann::json;

using UnitTable = std::map<std::string, double>;

const UnitTable kLength{{"m", 1.0},     {"mm", 1e-3}, {"um", 1e-6},
                        {"nm", 1e-9},   {"pm", 1e-12}};
const UnitTable kPressure{{"Pa", 1.0}, {"mbar", 100.0}, {"Torr", 133.322}, {"torr", 133.322}};
const UnitTable kFrequency{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
const UnitTable kField{{"T", 1.0}, {"mT", 1e-3}, {"uT", 1e-6}, {"G", 1e-4}};
const UnitTable kCharge{{"C", 1.0}, {"e", 1.602176634e-19}};
const UnitTable kTemperature{{"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}, {"nK", 1e-9}};
const UnitTable kTime{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};
const UnitTable kMass{{"kg", 1.0}, {"g", 1e-3}, {"amu", 1.66053906660e-27}};
const UnitTable kVoltage{{"V", 1.0}, {"kV", 1e3}, {"mV", 1e-3}};
const UnitTable kNone{};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at '" + path + "': " + what);
}

double parse_number(const std::string& text, const std::string& path) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) fail(path, "not a number: '" + text + "'");
  return v;
}

/// A quantity is either a plain number (SI) or a string "value unit".
double quantity(const json& j, const std::string& path, const UnitTable& units) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto space = s.find_last_of(" \t");
    if (space == std::string::npos)
      fail(path, "expected \"<value> <unit>\", got '" + s + "'");
    const std::string value = s.substr(0, space);
    std::string unit = s.substr(space + 1);
    const auto it = units.find(unit);
    if (it == units.end()) fail(path, "unsupported unit '" + unit + "'");
    return parse_number(value, path) * it->second;
  }
  fail(path, "expected a number or a \"value unit\" string");
}

double get_quantity(const json& obj, const std::string& key, const std::string& section,
                    const UnitTable& units, double fallback) {
  if (!obj.contains(key)) return fallback;
  return quantity(obj.at(key), section + "." + key, units);
}

double get_positive(const json& obj, const std::string& key, const std::string& section,
                    const UnitTable& units, double fallback) {
  const double v = get_quantity(obj, key, section, units, fallback);
  if (!(v > 0.0)) fail(section + "." + key, "must be positive");
  return v;
}

long long get_integer(const json& obj, const std::string& key, const std::string& section,
                      long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& j = obj.at(key);
  if (!j.is_number_integer()) fail(section + "." + key, "expected an integer");
  return j.get<long long>();
}

bool get_bool(const json& obj, const std::string& key, const std::string& section,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& j = obj.at(key);
  if (!j.is_boolean()) fail(section + "." + key, "expected a boolean");
  return j.get<bool>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& section,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& j = obj.at(key);
  if (!j.is_string()) fail(section + "." + key, "expected a string");
  return j.get<std::string>();
}

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(section, "expected an object");
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      fail(section + "." + item.key(), "unknown key");
}

Vec3 get_vec3(const json& obj, const std::string& key, const std::string& section,
              const UnitTable& units, const Vec3& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& j = obj.at(key);
  if (!j.is_array() || j.size() != 3) fail(section + "." + key, "expected an array of 3");
  Vec3 v;
  for (int i = 0; i < 3; ++i) v[i] = quantity(j[i], section + "." + key, units);
  return v;
}

int mode_index(const std::string& name, const std::string& path) {
  if (name == "alpha") return 0;
  if (name == "beta") return 1;
  if (name == "gamma") return 2;
  fail(path, "unknown mode '" + name + "' (expected alpha, beta, or gamma)");
}

std::array<bool, 3> get_modes(const json& obj, const std::string& key,
                              const std::string& section, std::array<bool, 3> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& j = obj.at(key);
  if (!j.is_array()) fail(section + "." + key, "expected an array of mode names");
  std::array<bool, 3> out{false, false, false};
  for (const auto& item : j) {
    if (!item.is_string()) fail(section + "." + key, "expected mode names");
    out[mode_index(item.get<std::string>(), section + "." + key)] = true;
  }
  return out;
}

void parse_particle(const json& j, RunConfig& cfg) {
  check_keys(j, "particle", {"shape", "density", "charge", "charge_offset"});
  if (j.contains("shape")) {
    const json& s = j.at("shape");
    check_keys(s, "particle.shape", {"type", "a", "b", "L", "c"});
    const std::string type = get_string(s, "type", "particle.shape", "cylindroid");
    if (type == "cylindroid") {
      Cylindroid c;
      c.a = get_positive(s, "a", "particle.shape", kLength, 30e-9);
      c.b = get_positive(s, "b", "particle.shape", kLength, 30e-9);
      c.L = get_positive(s, "L", "particle.shape", kLength, 100e-9);
      if (s.contains("c")) fail("particle.shape.c", "not a cylindroid parameter");
      cfg.particle.geometry = c;
    } else if (type == "box") {
      Box b;
      b.a = get_positive(s, "a", "particle.shape", kLength, 30e-9);
      b.b = get_positive(s, "b", "particle.shape", kLength, 30e-9);
      b.c = get_positive(s, "c", "particle.shape", kLength, 50e-9);
      if (s.contains("L")) fail("particle.shape.L", "not a box parameter");
      cfg.particle.geometry = b;
    } else {
      fail("particle.shape.type", "expected 'cylindroid' or 'box'");
    }
  }
  cfg.particle.density = get_positive(j, "density", "particle", kNone, cfg.particle.density);
  cfg.particle.charge = get_quantity(j, "charge", "particle", kCharge, cfg.particle.charge);
  cfg.particle.charge_offset =
      get_vec3(j, "charge_offset", "particle", kLength, cfg.particle.charge_offset);
}

void parse_trap(const json& j, RunConfig& cfg) {
  check_keys(j, "trap", {"U_DC", "U_AC", "f_AC", "l0", "kappa"});
  cfg.trap.U_DC = get_quantity(j, "U_DC", "trap", kVoltage, cfg.trap.U_DC);
  cfg.trap.U_AC = get_quantity(j, "U_AC", "trap", kVoltage, cfg.trap.U_AC);
  const double f_default = cfg.trap.Omega_AC / (2 * constants::pi);
  cfg.trap.Omega_AC = 2 * constants::pi * get_positive(j, "f_AC", "trap", kFrequency, f_default);
  cfg.trap.l0 = get_positive(j, "l0", "trap", kLength, cfg.trap.l0);
  cfg.trap.kappa = get_vec3(j, "kappa", "trap", kNone, cfg.trap.kappa);
  try {
    cfg.trap.validate();
  } catch (const std::exception& e) {
    fail("trap", e.what());
  }
}

void parse_gas(const json& j, RunConfig& cfg) {
  check_keys(j, "gas", {"pressure", "T", "alpha_c", "m_g", "T_s"});
  cfg.gas.P = get_quantity(j, "pressure", "gas", kPressure, cfg.gas.P);
  cfg.gas.T_gas = get_positive(j, "T", "gas", kTemperature, cfg.gas.T_gas);
  cfg.gas.alpha_c = get_quantity(j, "alpha_c", "gas", kNone, cfg.gas.alpha_c);
  cfg.gas.m_g = get_positive(j, "m_g", "gas", kMass, cfg.gas.m_g);
  cfg.gas.T_s = get_positive(j, "T_s", "gas", kTemperature, cfg.gas.T_gas);
  try {
    cfg.gas.validate();
  } catch (const std::exception& e) {
    fail("gas", e.what());
  }
}

void parse_feedback(const json& j, RunConfig& cfg) {
  check_keys(j, "feedback",
             {"window", "delta", "band", "min_cycles", "modes", "prominence",
              "invert_phase", "all_hot"});
  cfg.feedback.window = get_positive(j, "window", "feedback", kTime, cfg.feedback.window);
  cfg.feedback.delta = get_quantity(j, "delta", "feedback", kNone, cfg.feedback.delta);
  cfg.feedback.band_halfwidth =
      get_quantity(j, "band", "feedback", kNone, cfg.feedback.band_halfwidth);
  cfg.feedback.min_cycles = static_cast<int>(
      get_integer(j, "min_cycles", "feedback", cfg.feedback.min_cycles));
  cfg.feedback.modes = get_modes(j, "modes", "feedback", cfg.feedback.modes);
  cfg.feedback.prominence_min =
      get_quantity(j, "prominence", "feedback", kNone, cfg.feedback.prominence_min);
  cfg.feedback.invert_phase =
      get_bool(j, "invert_phase", "feedback", cfg.feedback.invert_phase);
  cfg.feedback_all_hot = get_bool(j, "all_hot", "feedback", cfg.feedback_all_hot);
  try {
    cfg.feedback.validate();
  } catch (const std::exception& e) {
    fail("feedback", e.what());
  }
}

void parse_sim(const json& j, RunConfig& cfg) {
  check_keys(j, "sim",
             {"dt_per_period", "t_end", "seed", "initial_offset", "excite", "noise",
              "record_stride"});
  cfg.sim.dt_per_period =
      static_cast<int>(get_integer(j, "dt_per_period", "sim", cfg.sim.dt_per_period));
  if (cfg.sim.dt_per_period < 50) fail("sim.dt_per_period", "must be at least 50");
  cfg.sim.t_end = get_positive(j, "t_end", "sim", kTime, cfg.sim.t_end);
  const long long seed = get_integer(j, "seed", "sim", static_cast<long long>(cfg.sim.seed));
  if (seed < 0) fail("sim.seed", "must be non-negative");
  cfg.sim.seed = static_cast<std::uint64_t>(seed);
  cfg.sim.initial_offset =
      get_quantity(j, "initial_offset", "sim", kNone, cfg.sim.initial_offset);
  cfg.sim.excite = get_modes(j, "excite", "sim", cfg.sim.excite);
  cfg.sim.noise = get_bool(j, "noise", "sim", cfg.sim.noise);
  cfg.sim.record_stride =
      static_cast<int>(get_integer(j, "record_stride", "sim", cfg.sim.record_stride));
  if (cfg.sim.record_stride < 1) fail("sim.record_stride", "must be at least 1");
}

void parse_interferometer(const json& j, RunConfig& cfg) {
  check_keys(j, "interferometer",
             {"M", "a_minus", "g_par", "Tp", "B", "mu", "I_axis", "n_max", "grid"});
  auto& ic = cfg.interferometer;
  ic.M = get_positive(j, "M", "interferometer", kMass, ic.M);
  ic.a_minus = get_quantity(j, "a_minus", "interferometer", kNone, ic.a_minus);
  ic.g_par = get_quantity(j, "g_par", "interferometer", kNone, ic.g_par);
  ic.T_p = get_positive(j, "Tp", "interferometer", kTime, ic.T_p);
  ic.B = get_positive(j, "B", "interferometer", kField, ic.B);
  ic.mu = get_positive(j, "mu", "interferometer", kNone, ic.mu);
  ic.I_axis = get_positive(j, "I_axis", "interferometer", kNone, ic.I_axis);
  ic.n_max = static_cast<int>(get_integer(j, "n_max", "interferometer", ic.n_max));
  if (ic.n_max < 0) fail("interferometer.n_max", "must be non-negative");
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, "interferometer.grid", {"n_points", "span", "steps_per_segment"});
    ic.grid.n_points =
        static_cast<int>(get_integer(g, "n_points", "interferometer.grid", ic.grid.n_points));
    ic.grid.span = get_positive(g, "span", "interferometer.grid", kNone, ic.grid.span);
    ic.grid.steps_per_segment = static_cast<int>(
        get_integer(g, "steps_per_segment", "interferometer.grid", ic.grid.steps_per_segment));
  }
  try {
    ic.validate();
  } catch (const std::exception& e) {
    fail("interferometer", e.what());
  }
}

void parse_sweep(const json& j, RunConfig& cfg) {
  check_keys(j, "sweep", {"parameter", "min", "max", "points", "log_spacing"});
  cfg.sweep.parameter = get_string(j, "parameter", "sweep", cfg.sweep.parameter);
  if (cfg.sweep.parameter != "b_over_a" && cfg.sweep.parameter != "L_over_2b" &&
      cfg.sweep.parameter != "temperature")
    fail("sweep.parameter", "expected b_over_a, L_over_2b, or temperature");
  const UnitTable& units =
      cfg.sweep.parameter == "temperature" ? kTemperature : kNone;
  cfg.sweep.min = get_positive(j, "min", "sweep", units, cfg.sweep.min);
  cfg.sweep.max = get_positive(j, "max", "sweep", units, cfg.sweep.max);
  if (!(cfg.sweep.max > cfg.sweep.min)) fail("sweep", "max must exceed min");
  cfg.sweep.points = static_cast<int>(get_integer(j, "points", "sweep", cfg.sweep.points));
  if (cfg.sweep.points < 2) fail("sweep.points", "need at least 2 points");
  cfg.sweep.log_spacing = get_bool(j, "log_spacing", "sweep", cfg.sweep.log_spacing);
  cfg.sweep_given = true;
}

}  // namespace

RunConfig::RunConfig() {
  particle.geometry = Cylindroid{30e-9, 30e-9, 100e-9};
  particle.density = 3510.0;
  particle.charge = 100.0 * constants::e_charge;
}

RunConfig config_from_json(const nlohmann::json& root) {
  RunConfig cfg;
  check_keys(root, "<root>",
             {"particle", "trap", "gas", "feedback", "sim", "interferometer", "sweep"});
  if (root.contains("particle")) parse_particle(root.at("particle"), cfg);
  if (root.contains("trap")) parse_trap(root.at("trap"), cfg);
  if (root.contains("gas")) parse_gas(root.at("gas"), cfg);
  if (root.contains("feedback")) parse_feedback(root.at("feedback"), cfg);
  if (root.contains("sim")) parse_sim(root.at("sim"), cfg);
  if (root.contains("interferometer")) parse_interferometer(root.at("interferometer"), cfg);
  if (root.contains("sweep")) parse_sweep(root.at("sweep"), cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(is);
  } catch (const std::exception& e) {
    throw ConfigError("config parse failure in " + path + ": " + e.what());
  }
  return config_from_json(root);
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  nlohmann::json shape;
  if (const auto* c = std::get_if<Cylindroid>(&cfg.particle.geometry)) {
    shape = {{"type", "cylindroid"}, {"a", c->a}, {"b", c->b}, {"L", c->L}};
  } else {
    const auto& b = std::get<Box>(cfg.particle.geometry);
    shape = {{"type", "box"}, {"a", b.a}, {"b", b.b}, {"c", b.c}};
  }
  j["particle"] = {{"shape", shape},
                   {"density", cfg.particle.density},
                   {"charge", cfg.particle.charge},
                   {"charge_offset",
                    {cfg.particle.charge_offset[0], cfg.particle.charge_offset[1],
                     cfg.particle.charge_offset[2]}}};
  j["trap"] = {{"U_DC", cfg.trap.U_DC},
               {"U_AC", cfg.trap.U_AC},
               {"f_AC", cfg.trap.Omega_AC / (2 * constants::pi)},
               {"l0", cfg.trap.l0},
               {"kappa", {cfg.trap.kappa[0], cfg.trap.kappa[1], cfg.trap.kappa[2]}}};
  j["gas"] = {{"pressure", cfg.gas.P},
              {"T", cfg.gas.T_gas},
              {"alpha_c", cfg.gas.alpha_c},
              {"m_g", cfg.gas.m_g},
              {"T_s", cfg.gas.T_s}};
  nlohmann::json modes = nlohmann::json::array();
  const char* names[3] = {"alpha", "beta", "gamma"};
  for (int m = 0; m < 3; ++m)
    if (cfg.feedback.modes[m]) modes.push_back(names[m]);
  j["feedback"] = {{"window", cfg.feedback.window},
                   {"delta", cfg.feedback.delta},
                   {"band", cfg.feedback.band_halfwidth},
                   {"min_cycles", cfg.feedback.min_cycles},
                   {"modes", modes},
                   {"prominence", cfg.feedback.prominence_min},
                   {"invert_phase", cfg.feedback.invert_phase},
                   {"all_hot", cfg.feedback_all_hot}};
  nlohmann::json excite = nlohmann::json::array();
  for (int m = 0; m < 3; ++m)
    if (cfg.sim.excite[m]) excite.push_back(names[m]);
  j["sim"] = {{"dt_per_period", cfg.sim.dt_per_period},
              {"t_end", cfg.sim.t_end},
              {"seed", cfg.sim.seed},
              {"initial_offset", cfg.sim.initial_offset},
              {"excite", excite},
              {"noise", cfg.sim.noise},
              {"record_stride", cfg.sim.record_stride}};
  j["interferometer"] = {{"M", cfg.interferometer.M},
                         {"a_minus", cfg.interferometer.a_minus},
                         {"g_par", cfg.interferometer.g_par},
                         {"Tp", cfg.interferometer.T_p},
                         {"B", cfg.interferometer.B},
                         {"mu", cfg.interferometer.mu},
                         {"I_axis", cfg.interferometer.I_axis},
                         {"n_max", cfg.interferometer.n_max},
                         {"grid",
                          {{"n_points", cfg.interferometer.grid.n_points},
                           {"span", cfg.interferometer.grid.span},
                           {"steps_per_segment", cfg.interferometer.grid.steps_per_segment}}}};
  j["sweep"] = {{"parameter", cfg.sweep.parameter},
                {"min", cfg.sweep.min},
                {"max", cfg.sweep.max},
                {"points", cfg.sweep.points},
                {"log_spacing", cfg.sweep.log_spacing}};
  return j;
}

void write_sidecar(const std::string& data_path, const std::string& command,
                   const RunConfig& cfg) {
  write_sidecar(data_path, command, cfg, nlohmann::json());
}

void write_sidecar(const std::string& data_path, const std::string& command,
                   const RunConfig& cfg, const nlohmann::json& results) {
  nlohmann::json side;
  side["version"] = version_string;
  side["command"] = command;
  side["config"] = to_json(cfg);
  if (!results.is_null()) side["results"] = results;
  std::ofstream os(data_path + ".json", std::ios::binary);
  if (!os) throw ConfigError("cannot write sidecar for " + data_path);
  os << side.dump(2) << "\n";
}

}  // namespace librot::io
