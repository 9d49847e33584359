// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The itsbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "itsbf/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "itsbf/error.hpp"
#include "itsbf/units.hpp"

namespace itsbf {

using nlohmann::json;

namespace {

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

// Misspelled keys would otherwise be silently replaced by defaults.
void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(ErrorCode::kInvalidConfig, "unknown key '" + key + "' in " + where);
  }
}

json section(const json& root, const char* key, std::initializer_list<std::string_view> allowed) {
  if (!root.contains(key)) return json::object();
  const json& s = root.at(key);
  if (!s.is_object()) throw Error(ErrorCode::kInvalidConfig, std::string("'") + key + "' must be an object");
  check_keys(s, allowed, std::string("'") + key + "'");
  return s;
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  ExperimentSpec spec = default_table1_config();
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::kInvalidConfig, "config root must be an object");
  check_keys(root, {"sweep", "methods", "illuminations", "system", "channel", "geometry", "solver"}, "the config root");

  try {
    const json sweep = section(root, "sweep", {"kind", "grid", "trials", "seed", "workers"});
    if (sweep.contains("kind")) {
      spec.sweep = parse_sweep_kind(sweep.at("kind").get<std::string>());
      spec.grid = default_grid(spec.sweep);
    }
    read_opt(sweep, "grid", spec.grid);
    read_opt(sweep, "trials", spec.trials);
    read_opt(sweep, "seed", spec.base_seed);
    read_opt(sweep, "workers", spec.workers);

    if (root.contains("methods")) {
      spec.methods.clear();
      for (const auto& m : root.at("methods")) spec.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (root.contains("illuminations")) {
      spec.illuminations.clear();
      for (const auto& m : root.at("illuminations"))
        spec.illuminations.push_back(parse_illumination(m.get<std::string>()));
    }

    const json system = section(root, "system", {"constraint", "users", "noise_power", "p_max_dbm", "weights"});
    if (system.contains("constraint"))
      spec.constraint = parse_constraint_kind(system.at("constraint").get<std::string>());
    read_opt(system, "users", spec.n_users);
    read_opt(system, "noise_power", spec.noise_power);
    read_opt(system, "p_max_dbm", spec.p_max_dbm);
    if (system.contains("weights")) spec.weights = system.at("weights").get<std::vector<double>>();
    else if (system.contains("users")) spec.weights.assign(static_cast<std::size_t>(spec.n_users), 1.0);

    ChannelParams& ch = spec.channel;
    const json channel = section(root, "channel",
                                 {"carrier_freq_hz", "clusters_min", "clusters_max", "pathloss_intercept_db",
                                  "pathloss_exponent", "shadowing_std_db", "distance_min_m", "distance_max_m",
                                  "azimuth_min_deg", "azimuth_max_deg", "elevation_min_deg", "elevation_max_deg",
                                  "cluster_spread_deg", "gain_normalization_db"});
    read_opt(channel, "carrier_freq_hz", ch.carrier_freq);
    read_opt(channel, "clusters_min", ch.n_clusters_min);
    read_opt(channel, "clusters_max", ch.n_clusters_max);
    read_opt(channel, "pathloss_intercept_db", ch.pathloss_intercept_db);
    read_opt(channel, "pathloss_exponent", ch.pathloss_exponent);
    read_opt(channel, "shadowing_std_db", ch.shadowing_std_db);
    read_opt(channel, "distance_min_m", ch.distance_min);
    read_opt(channel, "distance_max_m", ch.distance_max);
    read_opt(channel, "azimuth_min_deg", ch.azimuth_min_deg);
    read_opt(channel, "azimuth_max_deg", ch.azimuth_max_deg);
    read_opt(channel, "elevation_min_deg", ch.elevation_min_deg);
    read_opt(channel, "elevation_max_deg", ch.elevation_max_deg);
    read_opt(channel, "cluster_spread_deg", ch.cluster_spread_deg);
    if (channel.contains("gain_normalization_db")) {
      const json& g = channel.at("gain_normalization_db");
      if (g.is_null()) ch.gain_normalization.reset();
      else ch.gain_normalization = db_to_linear(g.get<double>());
    }

    GeometryConfig& geo = spec.geometry;
    const json geometry = section(root, "geometry",
                                  {"n_active", "m_elements", "grid_rows", "grid_cols", "kappa",
                                   "active_radius_wavelengths", "distance_r0", "surface_loss_db"});
    read_opt(geometry, "n_active", geo.n_active);
    read_opt(geometry, "m_elements", geo.m_elements);
    read_opt(geometry, "grid_rows", geo.grid_rows);
    read_opt(geometry, "grid_cols", geo.grid_cols);
    read_opt(geometry, "kappa", geo.kappa);
    geo.wavelength = wavelength_of(ch.carrier_freq);
    double radius_wl = 1.0;
    read_opt(geometry, "active_radius_wavelengths", radius_wl);
    geo.active_radius = radius_wl * geo.wavelength;
    double distance_r0 = 10.0;
    read_opt(geometry, "distance_r0", distance_r0);
    geo.separation = distance_r0 * characteristic_distance(geo.m_elements, geo.n_active, geo.wavelength);
    double loss_db = 3.5;
    read_opt(geometry, "surface_loss_db", loss_db);
    geo.surface_loss = db_to_linear(-loss_db);

    SolverSettings& s = spec.solver;
    const json solver = section(root, "solver",
                                {"bcd_epsilon", "bcd_max_iters", "pga_max_iters", "armijo_zeta", "armijo_shrink",
                                 "tau_init", "dual_tolerance", "dual_max_iters"});
    read_opt(solver, "bcd_epsilon", s.bcd_epsilon);
    read_opt(solver, "bcd_max_iters", s.bcd_max_iters);
    read_opt(solver, "pga_max_iters", s.pga_max_iters);
    read_opt(solver, "armijo_zeta", s.armijo_zeta);
    read_opt(solver, "armijo_shrink", s.armijo_shrink);
    read_opt(solver, "tau_init", s.tau_init);
    read_opt(solver, "dual_tolerance", s.dual_tolerance);
    read_opt(solver, "dual_max_iters", s.dual_max_iters);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidConfig) throw;
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::kIo, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_experiment_spec(buf.str());
}

std::string experiment_spec_to_json(const ExperimentSpec& spec) {
  const GeometryConfig& geo = spec.geometry;
  const ChannelParams& ch = spec.channel;
  const SolverSettings& s = spec.solver;

  json root;
  root["sweep"] = {{"kind", to_string(spec.sweep)},
                   {"grid", spec.grid},
                   {"trials", spec.trials},
                   {"seed", spec.base_seed},
                   {"workers", spec.workers}};
  json methods = json::array();
  for (Method m : spec.methods) methods.push_back(to_string(m));
  root["methods"] = methods;
  json illum = json::array();
  for (IlluminationMode m : spec.illuminations) illum.push_back(to_string(m));
  root["illuminations"] = illum;
  root["system"] = {{"constraint", to_string(spec.constraint)},
                    {"users", spec.n_users},
                    {"noise_power", spec.noise_power},
                    {"p_max_dbm", spec.p_max_dbm},
                    {"weights", spec.weights}};
  root["geometry"] = {
      {"n_active", geo.n_active},
      {"m_elements", geo.m_elements},
      {"grid_rows", geo.grid_rows},
      {"grid_cols", geo.grid_cols},
      {"kappa", geo.kappa},
      {"active_radius_wavelengths", geo.active_radius / geo.wavelength},
      {"distance_r0", geo.separation / characteristic_distance(geo.m_elements, geo.n_active, geo.wavelength)},
      {"surface_loss_db", -linear_to_db(geo.surface_loss)}};
  root["channel"] = {{"carrier_freq_hz", ch.carrier_freq},
                     {"clusters_min", ch.n_clusters_min},
                     {"clusters_max", ch.n_clusters_max},
                     {"pathloss_intercept_db", ch.pathloss_intercept_db},
                     {"pathloss_exponent", ch.pathloss_exponent},
                     {"shadowing_std_db", ch.shadowing_std_db},
                     {"distance_min_m", ch.distance_min},
                     {"distance_max_m", ch.distance_max},
                     {"azimuth_min_deg", ch.azimuth_min_deg},
                     {"azimuth_max_deg", ch.azimuth_max_deg},
                     {"elevation_min_deg", ch.elevation_min_deg},
                     {"elevation_max_deg", ch.elevation_max_deg},
                     {"cluster_spread_deg", ch.cluster_spread_deg}};
  root["channel"]["gain_normalization_db"] =
      ch.gain_normalization ? json(linear_to_db(*ch.gain_normalization)) : json(nullptr);
  root["solver"] = {{"bcd_epsilon", s.bcd_epsilon},       {"bcd_max_iters", s.bcd_max_iters},
                    {"pga_max_iters", s.pga_max_iters},   {"armijo_zeta", s.armijo_zeta},
                    {"armijo_shrink", s.armijo_shrink},   {"tau_init", s.tau_init},
                    {"dual_tolerance", s.dual_tolerance}, {"dual_max_iters", s.dual_max_iters}};
  return root.dump(2) + "\n";
}

}  // namespace itsbf
