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
#include <benchmark/benchmark.h>

#include "itsbf/channel.hpp"
#include "itsbf/geometry.hpp"
#include "itsbf/harness.hpp"
#include "itsbf/rng.hpp"
#include "itsbf/wmmse.hpp"
#include "itsbf/zfwf.hpp"

namespace itsbf {
namespace {

TrialSetup table1_trial(ConstraintKind constraint, int trial) {
  ExperimentSpec spec = default_table1_config();
  spec.constraint = constraint;
  return prepare_trial(spec, 30.0, trial, IlluminationMode::kFull);
}

void BM_ChannelSample(benchmark::State& state) {
  const ExperimentSpec spec = default_table1_config();
  const ArrayLayout layout = build_layout(resolve_geometry(spec, 30.0, IlluminationMode::kFull));
  Rng rng(1);
  for (auto _ : state) {
    const UserDrop drop = sample_user_drop(spec.channel, spec.n_users, rng);
    benchmark::DoNotOptimize(sample_channel(layout, drop, spec.channel, rng));
  }
}
BENCHMARK(BM_ChannelSample);

void BM_ZfWf(benchmark::State& state) {
  const TrialSetup setup = table1_trial(static_cast<ConstraintKind>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(zfwf_solve(setup.instance));
}
BENCHMARK(BM_ZfWf)->Arg(static_cast<int>(ConstraintKind::kRadiatedPower))
    ->Arg(static_cast<int>(ConstraintKind::kTransmittedPower));

void BM_WmmseBcd(benchmark::State& state) {
  const TrialSetup setup = table1_trial(static_cast<ConstraintKind>(state.range(0)), 0);
  const SolverSettings settings;
  const Solution init = zfwf_solve(setup.instance);
  for (auto _ : state) benchmark::DoNotOptimize(bcd_solve(setup.instance, settings, init));
}
BENCHMARK(BM_WmmseBcd)->Arg(static_cast<int>(ConstraintKind::kRadiatedPower))
    ->Arg(static_cast<int>(ConstraintKind::kTransmittedPower))->Unit(benchmark::kMillisecond);

void BM_PhaseGradient(benchmark::State& state) {
  const TrialSetup setup = table1_trial(ConstraintKind::kTransmittedPower, 0);
  const Solution s = zfwf_solve(setup.instance);
  const RVector gamma = update_gamma(setup.instance, s.phases, s.precoder);
  const CVector y = update_y(setup.instance, s.phases, s.precoder, gamma);
  const AnalogSubproblem sub = build_analog_subproblem(setup.instance, s.precoder, gamma, y);
  for (auto _ : state) benchmark::DoNotOptimize(analog_objective_and_gradient(s.phases, sub));
}
BENCHMARK(BM_PhaseGradient);

}  // namespace
}  // namespace itsbf

BENCHMARK_MAIN();
