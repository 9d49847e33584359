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
#include "itsbf/dump.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "itsbf/error.hpp"

namespace itsbf {

using nlohmann::json;

namespace {

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json matrix_json(const CMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(re.size()) != rows * cols || re.size() != im.size())
    throw Error(ErrorCode::kIo, "matrix payload does not match its shape");
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto i = static_cast<std::size_t>(r * cols + c);
      m(r, c) = cdouble(re[i], im[i]);
    }
  return m;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace

std::string layout_to_json(const ArrayLayout& layout) {
  json j;
  j["wavelength"] = layout.wavelength;
  j["kappa"] = layout.kappa;
  j["illumination"] = to_string(layout.illumination);
  j["grid"] = {layout.grid_rows, layout.grid_cols};
  j["sector_grid"] = {layout.sector_rows, layout.sector_cols};
  j["axis_center"] = vec3_json(layout.axis_center);
  json antennas = json::array();
  for (int n = 0; n < layout.n_active(); ++n)
    antennas.push_back({{"position", vec3_json(layout.active_positions[n])},
                        {"boresight", vec3_json(layout.active_boresights[n])}});
  j["antennas"] = antennas;
  json elements = json::array();
  for (int m = 0; m < layout.m_elements(); ++m)
    elements.push_back({{"position", vec3_json(layout.element_positions[m])},
                        {"sector", layout.sector_of_element[m]},
                        {"antenna", layout.sector_assignment[m]}});
  j["elements"] = elements;
  return j.dump(1) + "\n";
}

void write_layout(const ArrayLayout& layout, const std::string& path) { write_text(layout_to_json(layout), path); }

std::string channel_dump_to_json(const std::vector<ChannelDumpEntry>& entries) {
  json trials = json::array();
  for (const auto& e : entries) {
    json users = json::array();
    for (const auto& p : e.drop.positions) users.push_back(vec3_json(p));
    trials.push_back({{"trial", e.trial}, {"seed", e.seed}, {"users", users}, {"H", matrix_json(e.channel)}});
  }
  json root;
  root["format"] = "itsbf-channel-dump-v1";
  root["trials"] = trials;
  return root.dump(1) + "\n";
}

void write_channel_dump(const std::vector<ChannelDumpEntry>& entries, const std::string& path) {
  write_text(channel_dump_to_json(entries), path);
}

std::vector<ChannelDumpEntry> read_channel_dump(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<ChannelDumpEntry> out;
  try {
    const json root = json::parse(file);
    for (const auto& t : root.at("trials")) {
      ChannelDumpEntry e;
      e.trial = t.at("trial").get<int>();
      e.seed = t.at("seed").get<std::uint64_t>();
      for (const auto& p : t.at("users")) e.drop.positions.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
      e.channel = matrix_from_json(t.at("H"));
      out.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kIo, std::string("malformed channel dump: ") + ex.what());
  }
  return out;
}

std::string solution_to_json(const SystemInstance& inst, const Solution& solution) {
  json j;
  j["constraint"] = to_string(inst.constraint());
  j["p_max"] = inst.p_max();
  j["noise_power"] = inst.noise_power();
  j["phases"] = std::vector<double>(solution.phases.phases().data(),
                                    solution.phases.phases().data() + solution.phases.size());
  j["precoder"] = matrix_json(solution.precoder.matrix());
  j["sinr"] = std::vector<double>(solution.sinr.data(), solution.sinr.data() + solution.sinr.size());
  j["se"] = std::vector<double>(solution.se.data(), solution.se.data() + solution.se.size());
  j["wsr"] = solution.wsr;
  j["constraint_slack"] = solution.constraint_slack;
  j["iterations"] = solution.iterations;
  json trace = json::array();
  for (const auto& t : solution.trace) trace.push_back({t.iteration, t.wsr});
  j["trace"] = trace;
  return j.dump(1) + "\n";
}

void write_solution(const SystemInstance& inst, const Solution& solution, const std::string& path) {
  write_text(solution_to_json(inst, solution), path);
}

std::string trace_to_json(const std::vector<BcdIteration>& log) {
  json rows = json::array();
  for (const auto& it : log)
    rows.push_back({{"iteration", it.iteration}, {"f0", it.f0}, {"f1", it.f1}, {"mu", it.mu}, {"pga_steps", it.pga_steps}});
  return rows.dump(1) + "\n";
}

void write_trace(const std::vector<BcdIteration>& log, const std::string& path) {
  write_text(trace_to_json(log), path);
}

}  // namespace itsbf
