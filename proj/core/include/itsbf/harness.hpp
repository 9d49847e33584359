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
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itsbf/channel.hpp"
#include "itsbf/geometry.hpp"
#include "itsbf/model.hpp"
#include "itsbf/wmmse.hpp"

namespace itsbf {

enum class SweepKind { kPowerBudget, kInterArrayDistance, kSurfaceLoss };
enum class Method { kWmmseBcd, kZfWf, kRandomPhases, kNoIts };

std::string_view to_string(SweepKind kind);
std::string_view to_string(Method method);
SweepKind parse_sweep_kind(std::string_view text);
Method parse_method(std::string_view text);

// One Monte Carlo experiment. Sweep values are dBm (power budget), multiples
// of the characteristic distance R_0 (inter-array distance) or dB of surface
// loss; whichever is swept overrides the matching base value.
struct ExperimentSpec {
  SweepKind sweep = SweepKind::kPowerBudget;
  std::vector<double> grid;
  int trials = 1000;
  std::uint64_t base_seed = 1;
  int workers = 1;
  std::vector<Method> methods;
  std::vector<IlluminationMode> illuminations;
  ConstraintKind constraint = ConstraintKind::kTransmittedPower;

  int n_users = 4;
  double noise_power = 1e-7;   // W
  std::vector<double> weights;  // empty means alpha_k = 1
  double p_max_dbm = 30.0;

  GeometryConfig geometry;  // separation and surface_loss hold the base values
  ChannelParams channel;
  SolverSettings solver;

  void validate() const;
};

std::vector<double> default_grid(SweepKind kind);

// Simulation defaults: N = 4, M = 128 (16 x 8), K = 4, kappa = 49,
// d = 10 R_0, surface loss 3.5 dB, sigma^2 = 1e-7, R_a = lambda,
// f_c = 28 GHz, unit weights, 1000 trials.
ExperimentSpec default_table1_config();

struct ResultRecord {
  SweepKind sweep = SweepKind::kPowerBudget;
  double sweep_value = 0.0;
  int trial = 0;  // -1 on summary rows
  Method method = Method::kWmmseBcd;
  std::optional<IlluminationMode> illumination;  // empty for the no-surface baseline
  ConstraintKind constraint = ConstraintKind::kTransmittedPower;
  double wsr = 0.0;
  int iterations = 0;
  double wall_time_ms = 0.0;
  std::uint64_t seed = 0;

  bool ok = true;
  std::string error;

  bool summary = false;
  int n_averaged = 0;  // summary rows: successful trials in the mean
  int n_failed = 0;    // summary rows: trials excluded from the mean

  // Fingerprint of the trial's surface channel draw (not serialized).
  std::uint64_t channel_hash = 0;
};

// Everything a trial samples, before any solver runs.
struct TrialSetup {
  GeometryConfig geometry;
  ArrayLayout layout;
  UserDrop drop;
  SystemInstance instance;  // surface system under spec.constraint
  CMatrix direct_channel;   // K x N, no surface
  std::uint64_t seed = 0;
};

// Geometry with the sweep value substituted and the illumination set.
GeometryConfig resolve_geometry(const ExperimentSpec& spec, double sweep_value, IlluminationMode illumination);
double resolve_p_max(const ExperimentSpec& spec, double sweep_value);

TrialSetup prepare_trial(const ExperimentSpec& spec, double sweep_value, int trial_index,
                         IlluminationMode illumination);

// Runs a method on a prepared trial. Random phases are drawn from a stream
// derived from the trial seed.
Solution solve_trial(const ExperimentSpec& spec, const TrialSetup& setup, Method method,
                     std::vector<BcdIteration>* log = nullptr);

// Solver failures come back as records with ok == false.
ResultRecord run_trial(const ExperimentSpec& spec, double sweep_value, int trial_index, Method method,
                       IlluminationMode illumination);

// Detail rows in grid / trial / method / illumination order followed by
// one summary row per (sweep value, method, illumination).
std::vector<ResultRecord> run_sweep(const ExperimentSpec& spec);

std::uint64_t hash_matrix(const CMatrix& m);

}  // namespace itsbf
