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
#include "itsbf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <map>
#include <thread>
#include <tuple>

#include "itsbf/error.hpp"
#include "itsbf/units.hpp"
#include "itsbf/zfwf.hpp"

namespace itsbf {

std::string_view to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::kPowerBudget: return "power";
    case SweepKind::kInterArrayDistance: return "distance";
    case SweepKind::kSurfaceLoss: return "loss";
  }
  return "power";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kWmmseBcd: return "wmmse_bcd";
    case Method::kZfWf: return "zf_wf";
    case Method::kRandomPhases: return "random";
    case Method::kNoIts: return "no_its";
  }
  return "wmmse_bcd";
}

SweepKind parse_sweep_kind(std::string_view text) {
  if (text == "power") return SweepKind::kPowerBudget;
  if (text == "distance") return SweepKind::kInterArrayDistance;
  if (text == "loss") return SweepKind::kSurfaceLoss;
  throw Error(ErrorCode::kInvalidArgument, "unknown sweep kind '" + std::string(text) + "'");
}

Method parse_method(std::string_view text) {
  if (text == "wmmse_bcd" || text == "wmmse") return Method::kWmmseBcd;
  if (text == "zf_wf" || text == "zfwf") return Method::kZfWf;
  if (text == "random") return Method::kRandomPhases;
  if (text == "no_its" || text == "noits") return Method::kNoIts;
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(text) + "'");
}

std::vector<double> default_grid(SweepKind kind) {
  switch (kind) {
    case SweepKind::kPowerBudget: return {10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
    case SweepKind::kInterArrayDistance: return {1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
    case SweepKind::kSurfaceLoss: return {0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0};
  }
  return {};
}

ExperimentSpec default_table1_config() {
  ExperimentSpec spec;
  spec.sweep = SweepKind::kPowerBudget;
  spec.grid = default_grid(spec.sweep);
  spec.trials = 1000;
  spec.methods = {Method::kWmmseBcd, Method::kZfWf, Method::kRandomPhases, Method::kNoIts};
  spec.illuminations = {IlluminationMode::kFull, IlluminationMode::kPartial, IlluminationMode::kSeparate};
  spec.n_users = 4;
  spec.noise_power = 1e-7;
  spec.weights.assign(4, 1.0);
  spec.p_max_dbm = 30.0;

  const double lambda = wavelength_of(spec.channel.carrier_freq);
  GeometryConfig& g = spec.geometry;
  g.n_active = 4;
  g.m_elements = 128;
  g.grid_rows = 16;
  g.grid_cols = 8;
  g.wavelength = lambda;
  g.active_radius = lambda;
  g.separation = 10.0 * characteristic_distance(g.m_elements, g.n_active, lambda);
  g.kappa = 49.0;
  g.surface_loss = db_to_linear(-3.5);
  g.illumination = IlluminationMode::kFull;
  return spec;
}

void ExperimentSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidConfig, msg); };
  if (grid.empty()) fail("sweep grid must not be empty");
  if (trials < 1) fail("trials must be >= 1");
  if (workers < 1) fail("workers must be >= 1");
  if (methods.empty()) fail("at least one method is required");
  if (illuminations.empty()) fail("at least one illumination mode is required");
  if (n_users < 1) fail("n_users must be >= 1");
  if (!(noise_power > 0.0)) fail("noise_power must be positive");
  if (!weights.empty() && static_cast<int>(weights.size()) != n_users) fail("weights must have n_users entries");
  geometry.validate();
  channel.validate();
  solver.validate();
}

GeometryConfig resolve_geometry(const ExperimentSpec& spec, double sweep_value, IlluminationMode illumination) {
  GeometryConfig g = spec.geometry;
  g.illumination = illumination;
  if (spec.sweep == SweepKind::kInterArrayDistance)
    g.separation = sweep_value * characteristic_distance(g.m_elements, g.n_active, g.wavelength);
  if (spec.sweep == SweepKind::kSurfaceLoss) g.surface_loss = db_to_linear(-sweep_value);
  return g;
}

double resolve_p_max(const ExperimentSpec& spec, double sweep_value) {
  return dbm_to_watt(spec.sweep == SweepKind::kPowerBudget ? sweep_value : spec.p_max_dbm);
}

namespace {

RVector resolve_weights(const ExperimentSpec& spec) {
  if (spec.weights.empty()) return RVector::Ones(spec.n_users);
  return Eigen::Map<const RVector>(spec.weights.data(), static_cast<Eigen::Index>(spec.weights.size()));
}

std::uint64_t random_phase_seed(std::uint64_t trial_seed_value) {
  return splitmix64(trial_seed_value ^ 0x5eed0f9a5e5ULL);
}

}  // namespace

std::uint64_t hash_matrix(const CMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const auto rows = m.rows();
  const auto cols = m.cols();
  mix(&rows, sizeof rows);
  mix(&cols, sizeof cols);
  mix(m.data(), static_cast<std::size_t>(m.size()) * sizeof(cdouble));
  return h;
}

TrialSetup prepare_trial(const ExperimentSpec& spec, double sweep_value, int trial_index,
                         IlluminationMode illumination) {
  GeometryConfig geometry = resolve_geometry(spec, sweep_value, illumination);
  ArrayLayout layout = build_layout(geometry);
  CMatrix transfer = build_transfer_matrix(layout, geometry);

  const std::uint64_t seed = trial_seed(spec.base_seed, static_cast<std::uint64_t>(trial_index));
  Rng rng(seed);
  UserDrop drop = sample_user_drop(spec.channel, spec.n_users, rng);
  ChannelPair channels = sample_channel_pair(layout, drop, spec.channel, rng);

  SystemInstance inst(std::move(transfer), std::move(channels.surface), spec.noise_power, resolve_weights(spec),
                      spec.constraint, resolve_p_max(spec, sweep_value));
  return TrialSetup{std::move(geometry), std::move(layout), std::move(drop), std::move(inst),
                    std::move(channels.direct), seed};
}

Solution solve_trial(const ExperimentSpec& spec, const TrialSetup& setup, Method method,
                     std::vector<BcdIteration>* log) {
  const SystemInstance& inst = setup.instance;
  switch (method) {
    case Method::kZfWf:
      return zfwf_solve(inst);
    case Method::kWmmseBcd:
      return bcd_solve(inst, spec.solver, zfwf_solve(inst), {}, log);
    case Method::kRandomPhases: {
      Rng rng(random_phase_seed(setup.seed));
      std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
      RVector phi(inst.n_elements());
      for (Eigen::Index m = 0; m < phi.size(); ++m) phi(m) = uniform(rng);
      PhaseConfig phases(std::move(phi));
      Precoder init_b = zfwf_precoder(inst, phases);
      Solution init = evaluate_solution(inst, std::move(phases), std::move(init_b));
      return bcd_solve(inst, spec.solver, init, BcdOptions{.optimize_phases = false}, log);
    }
    case Method::kNoIts: {
      const auto n = inst.n_antennas();
      // The baseline always budgets the active antennas' own power.
      SystemInstance direct(CMatrix::Identity(n, n), setup.direct_channel, inst.noise_power(), inst.weights(),
                            ConstraintKind::kTransmittedPower, inst.p_max());
      PhaseConfig phases = PhaseConfig::zeros(n);
      Precoder init_b = zfwf_precoder(direct, phases);
      Solution init = evaluate_solution(direct, std::move(phases), std::move(init_b));
      return bcd_solve(direct, spec.solver, init, BcdOptions{.optimize_phases = false}, log);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method");
}

namespace {

IlluminationMode effective_illumination(Method method, IlluminationMode requested) {
  return method == Method::kRandomPhases ? IlluminationMode::kFull : requested;
}

ResultRecord run_prepared(const ExperimentSpec& spec, const TrialSetup& setup, double sweep_value, int trial_index,
                          Method method, IlluminationMode illumination) {
  ResultRecord r;
  r.sweep = spec.sweep;
  r.sweep_value = sweep_value;
  r.trial = trial_index;
  r.method = method;
  if (method != Method::kNoIts) r.illumination = illumination;
  r.constraint = spec.constraint;
  r.seed = setup.seed;
  r.channel_hash = hash_matrix(setup.instance.channel());

  const auto start = std::chrono::steady_clock::now();
  try {
    const Solution s = solve_trial(spec, setup, method);
    r.wsr = s.wsr;
    r.iterations = s.iterations;
    if (!std::isfinite(r.wsr) || r.wsr < 0.0) throw Error(ErrorCode::kNonFinite, "solver returned invalid WSR");
  } catch (const std::exception& e) {
    r.ok = false;
    r.wsr = 0.0;
    r.error = e.what();
  }
  r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ResultRecord failed_record(const ExperimentSpec& spec, double sweep_value, int trial_index, Method method,
                           std::optional<IlluminationMode> illumination, const std::string& what) {
  ResultRecord r;
  r.sweep = spec.sweep;
  r.sweep_value = sweep_value;
  r.trial = trial_index;
  r.method = method;
  r.illumination = method == Method::kNoIts ? std::nullopt : illumination;
  r.constraint = spec.constraint;
  r.seed = trial_seed(spec.base_seed, static_cast<std::uint64_t>(trial_index));
  r.ok = false;
  r.error = what;
  return r;
}

// (method, illumination) pairs for one trial. Random phases always use full
// illumination and the no-surface baseline has none, so each runs once.
std::vector<std::pair<Method, std::optional<IlluminationMode>>> trial_jobs(const ExperimentSpec& spec) {
  std::vector<std::pair<Method, std::optional<IlluminationMode>>> jobs;
  for (Method m : spec.methods) {
    if (m == Method::kNoIts) {
      jobs.emplace_back(m, std::nullopt);
    } else if (m == Method::kRandomPhases) {
      jobs.emplace_back(m, IlluminationMode::kFull);
    } else {
      for (IlluminationMode il : spec.illuminations) jobs.emplace_back(m, il);
    }
  }
  return jobs;
}

std::vector<ResultRecord> run_unit(const ExperimentSpec& spec, double sweep_value, int trial_index) {
  std::vector<ResultRecord> out;
  std::map<IlluminationMode, std::optional<TrialSetup>> setups;
  for (const auto& [method, illumination] : trial_jobs(spec)) {
    const IlluminationMode il = effective_illumination(method, illumination.value_or(spec.illuminations.front()));
    try {
      auto& setup = setups[il];
      if (!setup) setup.emplace(prepare_trial(spec, sweep_value, trial_index, il));
      out.push_back(run_prepared(spec, *setup, sweep_value, trial_index, method, il));
    } catch (const std::exception& e) {
      out.push_back(failed_record(spec, sweep_value, trial_index, method, il, e.what()));
    }
  }
  return out;
}

}  // namespace

ResultRecord run_trial(const ExperimentSpec& spec, double sweep_value, int trial_index, Method method,
                       IlluminationMode illumination) {
  const IlluminationMode il = effective_illumination(method, illumination);
  try {
    const TrialSetup setup = prepare_trial(spec, sweep_value, trial_index, il);
    return run_prepared(spec, setup, sweep_value, trial_index, method, il);
  } catch (const std::exception& e) {
    return failed_record(spec, sweep_value, trial_index, method, il, e.what());
  }
}

std::vector<ResultRecord> run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const int n_units = static_cast<int>(spec.grid.size()) * spec.trials;
  std::vector<std::vector<ResultRecord>> units(static_cast<std::size_t>(n_units));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int u = next++; u < n_units; u = next++) {
      const int g = u / spec.trials;
      const int t = u % spec.trials;
      units[static_cast<std::size_t>(u)] = run_unit(spec, spec.grid[static_cast<std::size_t>(g)], t);
    }
  };
  const int n_workers = std::min(spec.workers, std::max(n_units, 1));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
  }

  std::vector<ResultRecord> records;
  for (auto& unit : units)
    for (auto& r : unit) records.push_back(std::move(r));

  // Summary rows, in grid then job order.
  const auto jobs = trial_jobs(spec);
  for (double value : spec.grid) {
    for (const auto& [method, illumination] : jobs) {
      ResultRecord s;
      s.sweep = spec.sweep;
      s.sweep_value = value;
      s.trial = -1;
      s.method = method;
      s.illumination = illumination;
      s.constraint = spec.constraint;
      s.summary = true;
      double wsr_sum = 0.0;
      double time_sum = 0.0;
      for (const auto& r : records) {
        if (r.summary || r.sweep_value != value || r.method != method || r.illumination != illumination) continue;
        if (r.ok) {
          wsr_sum += r.wsr;
          time_sum += r.wall_time_ms;
          ++s.n_averaged;
        } else {
          ++s.n_failed;
        }
      }
      s.ok = s.n_averaged > 0;
      s.wsr = s.ok ? wsr_sum / s.n_averaged : 0.0;
      s.wall_time_ms = s.ok ? time_sum / s.n_averaged : 0.0;
      s.iterations = s.n_averaged;
      records.push_back(std::move(s));
    }
  }
  return records;
}

}  // namespace itsbf
