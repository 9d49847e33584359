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
#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "itsbf/config.hpp"
#include "itsbf/dump.hpp"
#include "itsbf/error.hpp"
#include "itsbf/results_io.hpp"
#include "itsbf/selfcheck.hpp"
#include "itsbf/zfwf.hpp"

namespace itsbf {
namespace {

namespace fs = std::filesystem;

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "itsbf_io_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<ResultRecord> sample_records() {
  std::vector<ResultRecord> out;
  ResultRecord a;
  a.sweep = SweepKind::kInterArrayDistance;
  a.sweep_value = 0.1 + 0.2;  // not exactly representable in short decimal
  a.trial = 3;
  a.method = Method::kWmmseBcd;
  a.illumination = IlluminationMode::kSeparate;
  a.constraint = ConstraintKind::kRadiatedPower;
  a.wsr = 12.345678901234567;
  a.iterations = 17;
  a.seed = 18446744073709551557ULL;
  out.push_back(a);

  ResultRecord b = a;
  b.method = Method::kNoIts;
  b.illumination.reset();
  b.ok = false;
  b.wsr = 0.0;
  b.iterations = 0;
  out.push_back(b);

  ResultRecord s;
  s.sweep = a.sweep;
  s.sweep_value = a.sweep_value;
  s.trial = -1;
  s.method = Method::kWmmseBcd;
  s.illumination = IlluminationMode::kSeparate;
  s.constraint = a.constraint;
  s.summary = true;
  s.wsr = 1.0 / 3.0;
  s.n_averaged = 4;
  s.iterations = 4;
  s.n_failed = 1;
  out.push_back(s);
  return out;
}

TEST(ResultsCsv, EmptyIsHeaderOnly) {
  const fs::path p = temp_path("empty.csv");
  write_results({}, p.string());
  EXPECT_EQ(slurp(p), std::string(kResultsHeader) + "\n");
  EXPECT_TRUE(read_results(p.string()).empty());
}

TEST(ResultsCsv, RoundTripIsExact) {
  const auto records = sample_records();
  const fs::path p = temp_path("roundtrip.csv");
  write_results(records, p.string());
  const auto back = read_results(p.string());
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& a = records[i];
    const auto& b = back[i];
    EXPECT_EQ(a.sweep, b.sweep);
    EXPECT_EQ(a.sweep_value, b.sweep_value);
    EXPECT_EQ(a.trial, b.trial);
    EXPECT_EQ(a.method, b.method);
    EXPECT_EQ(a.illumination, b.illumination);
    EXPECT_EQ(a.constraint, b.constraint);
    EXPECT_EQ(a.ok, b.ok);
    EXPECT_EQ(a.wsr, b.wsr);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ(a.summary, b.summary);
    if (a.summary) {
      EXPECT_EQ(a.n_averaged, b.n_averaged);
      EXPECT_EQ(a.n_failed, b.n_failed);
    } else {
      EXPECT_EQ(a.seed, b.seed);
    }
  }
  EXPECT_EQ(format_results(back), format_results(records));
}

TEST(ResultsCsv, TenColumnsOnEveryRow) {
  CsvOptions timed;
  timed.include_timing = true;
  for (const auto& options : {CsvOptions{}, timed}) {
    std::istringstream in(format_results(sample_records(), options));
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
      EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9) << line;
      ++rows;
    }
    EXPECT_EQ(rows, 4);
  }
}

TEST(ResultsCsv, TimingColumnIsBlankByDefault) {
  auto records = sample_records();
  records[0].wall_time_ms = 12.5;
  const std::string text = format_results(records);
  EXPECT_EQ(text.find("12.5"), std::string::npos);
  CsvOptions timed;
  timed.include_timing = true;
  EXPECT_NE(format_results(records, timed).find("12.5"), std::string::npos);
}

TEST(ResultsCsv, RejectsMalformedInput) {
  EXPECT_THROW(parse_results("not,a,header\n"), Error);
  EXPECT_THROW(parse_results(std::string(kResultsHeader) + "\npower,1,0,zf_wf,full,rp,1.0,1\n"), Error);
  EXPECT_THROW(parse_results(std::string(kResultsHeader) + "\npower,x,0,zf_wf,full,rp,1.0,1,,1\n"), Error);
  EXPECT_THROW(read_results(temp_path("missing/nothing.csv").string()), Error);
}

TEST(PlotScript, ReferencesTheCsv) {
  const fs::path p = temp_path("plot.py");
  write_plot_script(p.string(), "results.csv", SweepKind::kSurfaceLoss);
  const std::string text = slurp(p);
  EXPECT_NE(text.find("results.csv"), std::string::npos);
  EXPECT_NE(text.find("surface loss"), std::string::npos);
}

TEST(ConfigJson, EmptyObjectGivesDefaults) {
  const ExperimentSpec spec = parse_experiment_spec("{}");
  const ExperimentSpec def = default_table1_config();
  EXPECT_EQ(experiment_spec_to_json(spec), experiment_spec_to_json(def));
}

TEST(ConfigJson, RoundTrip) {
  ExperimentSpec spec = default_table1_config();
  spec.sweep = SweepKind::kSurfaceLoss;
  spec.grid = {0.0, 5.0};
  spec.trials = 7;
  spec.base_seed = 99;
  spec.methods = {Method::kZfWf, Method::kNoIts};
  spec.illuminations = {IlluminationMode::kSeparate};
  spec.constraint = ConstraintKind::kRadiatedPower;
  spec.solver.bcd_epsilon = 1e-4;
  spec.channel.gain_normalization.reset();
  const std::string text = experiment_spec_to_json(spec);
  const ExperimentSpec back = parse_experiment_spec(text);
  EXPECT_EQ(experiment_spec_to_json(back), text);
  EXPECT_EQ(back.grid, spec.grid);
  EXPECT_EQ(back.methods, spec.methods);
  EXPECT_EQ(back.constraint, ConstraintKind::kRadiatedPower);
  EXPECT_FALSE(back.channel.gain_normalization.has_value());
  EXPECT_NEAR(back.geometry.separation / spec.geometry.separation, 1.0, 1e-12);
}

TEST(ConfigJson, PartialOverride) {
  const ExperimentSpec spec =
      parse_experiment_spec(R"({"system": {"constraint": "rp", "p_max_dbm": 25}, "geometry": {"surface_loss_db": 0}})");
  EXPECT_EQ(spec.constraint, ConstraintKind::kRadiatedPower);
  EXPECT_EQ(spec.p_max_dbm, 25.0);
  EXPECT_EQ(spec.geometry.surface_loss, 1.0);
  EXPECT_EQ(spec.geometry.n_active, 4);
}

TEST(ConfigJson, RejectsBadInput) {
  auto code_of = [](const std::string& text) {
    try {
      parse_experiment_spec(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;  // not thrown
  };
  EXPECT_EQ(code_of("{"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of("[]"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of(R"({"constraint": "rp"})"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of(R"({"solver": {"bcd_eps": 1}})"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of(R"({"sweep": {"trials": "many"}})"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of(R"({"sweep": {"trials": 0}})"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of(R"({"methods": ["magic"]})"), ErrorCode::kInvalidConfig);
  EXPECT_THROW(load_experiment_spec(temp_path("missing/config.json").string()), Error);
}

TEST(ConfigJson, ShippedConfigMatchesDefaults) {
  const fs::path shipped = fs::path(ITSBF_SOURCE_DIR) / "configs" / "table1.json";
  const ExperimentSpec spec = load_experiment_spec(shipped.string());
  EXPECT_EQ(experiment_spec_to_json(spec), experiment_spec_to_json(default_table1_config()));
}

TEST(Dumps, ChannelDumpRoundTrip) {
  Rng rng(3);
  ChannelDumpEntry e;
  e.trial = 2;
  e.seed = 1234567890123ULL;
  e.drop.positions = {Vec3(1.5, -2.0, 40.0), Vec3(0.1, 0.2, 55.5)};
  e.channel = random_instance(8, 2, 2, ConstraintKind::kRadiatedPower, rng).channel();
  const fs::path p = temp_path("channels.json");
  write_channel_dump({e, e}, p.string());
  const auto back = read_channel_dump(p.string());
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].trial, 2);
  EXPECT_EQ(back[0].seed, e.seed);
  EXPECT_EQ(back[0].drop.positions, e.drop.positions);
  EXPECT_EQ(back[0].channel, e.channel);
}

TEST(Dumps, LayoutAndSolutionAreValidJson) {
  GeometryConfig cfg;
  cfg.wavelength = 0.01;
  cfg.active_radius = 0.01;
  cfg.separation = 0.2;
  cfg.illumination = IlluminationMode::kPartial;
  const auto layout_json = nlohmann::json::parse(layout_to_json(build_layout(cfg)));
  EXPECT_EQ(layout_json.at("antennas").size(), 4u);
  EXPECT_EQ(layout_json.at("elements").size(), 128u);

  Rng rng(4);
  const auto inst = random_instance(8, 2, 2, ConstraintKind::kTransmittedPower, rng);
  const Solution s = zfwf_solve(inst);
  const auto sol = nlohmann::json::parse(solution_to_json(inst, s));
  EXPECT_EQ(sol.at("wsr").get<double>(), s.wsr);
  EXPECT_EQ(sol.at("phases").size(), 8u);
  const auto trace = nlohmann::json::parse(trace_to_json({{1, 2.0, 1.9, 0.5, 3}}));
  EXPECT_EQ(trace.at(0).at("pga_steps").get<int>(), 3);
}

}  // namespace
}  // namespace itsbf
