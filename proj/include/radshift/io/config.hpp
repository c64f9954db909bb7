#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "radshift/errors.hpp"
#include "radshift/io/json_writer.hpp"
#include "radshift/model.hpp"

namespace radshift::io {

struct ScenarioSpec {
  ProfileShape shape = ProfileShape::quintic;
  double V0 = 0.2;
  double Z1 = 2.0;
  double Z2 = 1.0;
  double eps_profile = 1e-9;
  std::string table_file;  // tabulated shape only
};

// Full effective run configuration: scenario, numerics, output and
// reproducibility knobs. Defaults describe the standard desk-scale
// scenario (m = 1, p = 1, alpha_c = 0.01, V0 = 0.2, quintic step).
struct RunConfig {
  ParticleParams particle;
  ScenarioSpec scenario;
  SimulationConfig sim;
  unsigned long long seed = 20240720;
  std::string out_dir = "out";
  std::string format = "csv,json";
  int workers = 1;

  bool wants(const std::string& fmt) const {
    return format.find(fmt) != std::string::npos;
  }

  PotentialProfile make_profile() const {
    switch (scenario.shape) {
      case ProfileShape::quintic:
        return PotentialProfile::quintic(scenario.V0, scenario.Z1,
                                         scenario.Z2, scenario.eps_profile);
      case ProfileShape::tanh_step:
        return PotentialProfile::tanh_step(scenario.V0, scenario.Z1,
                                           scenario.Z2,
                                           scenario.eps_profile);
      case ProfileShape::tabulated: {
        if (scenario.table_file.empty())
          throw ConfigError("tabulated shape requires table_file");
        std::ifstream in(scenario.table_file);
        if (!in)
          throw ConfigError("cannot open table_file '" + scenario.table_file +
                            "'");
        std::vector<double> zs, Vs;
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty() || line[0] == '#' ||
              (std::isalpha(static_cast<unsigned char>(line[0]))))
            continue;
          std::replace(line.begin(), line.end(), ',', ' ');
          std::istringstream ls(line);
          double z, V;
          if (ls >> z >> V) {
            zs.push_back(z);
            Vs.push_back(V);
          }
        }
        return PotentialProfile::tabulated(std::move(zs), std::move(Vs),
                                           scenario.V0, scenario.Z1,
                                           scenario.Z2,
                                           scenario.eps_profile);
      }
    }
    throw ConfigError("unknown profile shape");
  }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse number '" + v +
                      "'");
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse integer '" +
                      v + "'");
  }
}

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

// Applies one key = value setting; unknown keys are rejected with the key
// name in the message.
inline void apply_key_value(RunConfig& cfg, const std::string& key,
                            const std::string& value) {
  using detail::parse_double;
  using detail::parse_int;
  if (key == "m") cfg.particle.m = parse_double(key, value);
  else if (key == "alpha_c") cfg.particle.alpha_c = parse_double(key, value);
  else if (key == "p") cfg.particle.p = parse_double(key, value);
  else if (key == "V0") cfg.scenario.V0 = parse_double(key, value);
  else if (key == "Z1") cfg.scenario.Z1 = parse_double(key, value);
  else if (key == "Z2") cfg.scenario.Z2 = parse_double(key, value);
  else if (key == "eps_profile")
    cfg.scenario.eps_profile = parse_double(key, value);
  else if (key == "table_file") cfg.scenario.table_file = value;
  else if (key == "shape") {
    if (value == "quintic") cfg.scenario.shape = ProfileShape::quintic;
    else if (value == "tanh") cfg.scenario.shape = ProfileShape::tanh_step;
    else if (value == "tabulated")
      cfg.scenario.shape = ProfileShape::tabulated;
    else
      throw ConfigError("config key 'shape': unknown value '" + value +
                        "' (quintic|tanh|tabulated)");
  } else if (key == "ode_rel_tol")
    cfg.sim.ode_rel_tol = parse_double(key, value);
  else if (key == "ode_abs_tol")
    cfg.sim.ode_abs_tol = parse_double(key, value);
  else if (key == "quad_rel_tol")
    cfg.sim.quad_rel_tol = parse_double(key, value);
  else if (key == "quad_order_angle")
    cfg.sim.quad_order_angle = static_cast<int>(parse_int(key, value));
  else if (key == "fd_step_rel")
    cfg.sim.fd_step_rel = parse_double(key, value);
  else if (key == "t_margin") cfg.sim.t_margin = parse_double(key, value);
  else if (key == "delta_min") cfg.sim.delta_min = parse_double(key, value);
  else if (key == "window_pad")
    cfg.sim.window_pad = parse_double(key, value);
  else if (key == "window_rolloff")
    cfg.sim.window_rolloff = parse_double(key, value);
  else if (key == "spectrum_rel_tol")
    cfg.sim.spectrum_rel_tol = parse_double(key, value);
  else if (key == "spectrum_k_max")
    cfg.sim.spectrum_k_max = parse_double(key, value);
  else if (key == "max_quad_panels")
    cfg.sim.max_quad_panels = static_cast<int>(parse_int(key, value));
  else if (key == "trajectory_csv_rows")
    cfg.sim.trajectory_csv_rows = static_cast<int>(parse_int(key, value));
  else if (key == "seed")
    cfg.seed = static_cast<unsigned long long>(parse_int(key, value));
  else if (key == "workers")
    cfg.workers = static_cast<int>(parse_int(key, value));
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "format") cfg.format = value;
  else
    throw ConfigError("unknown configuration key '" + key + "'");
}

// key = value file with optional [section] grouping lines and '#'
// comments. Keys are globally unique; sections are documentation only.
inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": malformed section header");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    apply_key_value(cfg, key, value);
  }
}

// Full effective configuration, echoed into every output for provenance.
inline Json effective_config_json(const RunConfig& cfg) {
  Json j = Json::object();
  j.set("m", Json::number(cfg.particle.m));
  j.set("alpha_c", Json::number(cfg.particle.alpha_c));
  j.set("p", Json::number(cfg.particle.p));
  j.set("V0", Json::number(cfg.scenario.V0));
  j.set("Z1", Json::number(cfg.scenario.Z1));
  j.set("Z2", Json::number(cfg.scenario.Z2));
  j.set("shape", Json::string(to_string(cfg.scenario.shape)));
  j.set("eps_profile", Json::number(cfg.scenario.eps_profile));
  if (!cfg.scenario.table_file.empty())
    j.set("table_file", Json::string(cfg.scenario.table_file));
  j.set("ode_rel_tol", Json::number(cfg.sim.ode_rel_tol));
  j.set("ode_abs_tol", Json::number(cfg.sim.ode_abs_tol));
  j.set("quad_rel_tol", Json::number(cfg.sim.quad_rel_tol));
  j.set("quad_order_angle", Json::integer(cfg.sim.quad_order_angle));
  j.set("fd_step_rel", Json::number(cfg.sim.fd_step_rel));
  j.set("t_margin", Json::number(cfg.sim.t_margin));
  j.set("delta_min", Json::number(cfg.sim.delta_min));
  j.set("window_pad", Json::number(cfg.sim.window_pad));
  j.set("window_rolloff", Json::number(cfg.sim.window_rolloff));
  j.set("spectrum_rel_tol", Json::number(cfg.sim.spectrum_rel_tol));
  j.set("spectrum_k_max", Json::number(cfg.sim.spectrum_k_max));
  j.set("max_quad_panels", Json::integer(cfg.sim.max_quad_panels));
  j.set("trajectory_csv_rows", Json::integer(cfg.sim.trajectory_csv_rows));
  j.set("seed", Json::integer(static_cast<long long>(cfg.seed)));
  j.set("workers", Json::integer(cfg.workers));
  j.set("format", Json::string(cfg.format));
  return j;
}

}  // namespace radshift::io
