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
#include "itsbf/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "itsbf/units.hpp"
#include "itsbf/wmmse.hpp"
#include "itsbf/zfwf.hpp"

namespace itsbf {

namespace {

CMatrix random_cn(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = cdouble(g(rng), g(rng));
  return m;
}

RVector random_phases(Eigen::Index m, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  RVector p(m);
  for (Eigen::Index i = 0; i < m; ++i) p(i) = u(rng);
  return p;
}

struct Check {
  std::string name;
  std::function<double(Rng&)> worst;  // worst observed error over the trials
  double tolerance;
};

}  // namespace

SystemInstance random_instance(int m, int n, int k, ConstraintKind kind, Rng& rng, double noise_power, double p_max) {
  return SystemInstance(random_cn(m, n, rng), random_cn(k, m, rng), noise_power, RVector::Ones(k), kind, p_max);
}

bool run_selfcheck(std::ostream& out, std::uint64_t seed) {
  const SolverSettings settings;
  const std::vector<Check> checks = {
      {"fp identity |f1 - f0| / f0",
       [&](Rng& rng) {
         const auto inst = random_instance(16, 4, 4, ConstraintKind::kTransmittedPower, rng);
         const PhaseConfig phases(random_phases(16, rng));
         const Precoder b(random_cn(4, 4, rng));
         AuxVariables aux;
         aux.gamma = update_gamma(inst, phases, b);
         aux.y = update_y(inst, phases, b, aux.gamma);
         const double f0 = wsr(inst, phases, b);
         return std::abs(fp_objective(inst, phases, b, aux) - f0) / f0;
       },
       1e-9},
      {"analog gradient vs central differences",
       [&](Rng& rng) {
         const auto inst = random_instance(8, 2, 2, ConstraintKind::kTransmittedPower, rng);
         const Precoder b(random_cn(2, 2, rng));
         const PhaseConfig phases(random_phases(8, rng));
         const RVector gamma = update_gamma(inst, phases, b);
         const auto sub = build_analog_subproblem(inst, b, gamma, update_y(inst, phases, b, gamma));
         const auto og = analog_objective_and_gradient(phases, sub);
         double worst = 0.0;
         for (Eigen::Index i = 0; i < 8; ++i) {
           RVector plus = phases.phases(), minus = phases.phases();
           plus(i) += 1e-6;
           minus(i) -= 1e-6;
           const double fd =
               (analog_objective(PhaseConfig(plus), sub) - analog_objective(PhaseConfig(minus), sub)) / 2e-6;
           worst = std::max(worst, std::abs(fd - og.gradient(i)));
         }
         return worst;
       },
       1e-5},
      {"dual search meets the budget",
       [&](Rng& rng) {
         const auto kind = rng() % 2 ? ConstraintKind::kRadiatedPower : ConstraintKind::kTransmittedPower;
         const auto inst = random_instance(8, 4, 3, kind, rng, 0.1, 0.01);
         const PhaseConfig phases(random_phases(8, rng));
         const Precoder b(random_cn(4, 3, rng));
         const RVector gamma = update_gamma(inst, phases, b);
         const auto res = dual_search(inst, phases, gamma, update_y(inst, phases, b, gamma), settings);
         return res.mu > 0.0 ? std::abs(res.constraint - inst.p_max()) / inst.p_max() : 0.0;
       },
       1e-6},
      {"zero forcing residual interference",
       [&](Rng& rng) {
         const auto inst = random_instance(16, 4, 3, ConstraintKind::kRadiatedPower, rng);
         const auto s = zfwf_solve(inst);
         const CMatrix g = effective_channel(inst, s.phases) * s.precoder.matrix();
         double worst = 0.0;
         for (Eigen::Index k = 0; k < g.rows(); ++k)
           for (Eigen::Index i = 0; i < g.cols(); ++i)
             if (i != k && std::abs(g(k, k)) > 0.0) worst = std::max(worst, std::abs(g(k, i)) / std::abs(g(k, k)));
         return worst;
       },
       1e-6},
      {"bcd never loses WSR",
       [&](Rng& rng) {
         const auto inst = random_instance(16, 4, 4, ConstraintKind::kTransmittedPower, rng, 0.01, 1.0);
         const auto s = bcd_solve(inst, settings, zfwf_solve(inst));
         double worst = 0.0;
         for (std::size_t i = 1; i < s.trace.size(); ++i)
           worst = std::max(worst, s.trace[i - 1].wsr - s.trace[i].wsr);
         return worst;
       },
       1e-9},
  };

  bool all_ok = true;
  Rng rng(seed);
  for (const auto& c : checks) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) worst = std::max(worst, c.worst(rng));
    const bool ok = worst < c.tolerance;
    all_ok = all_ok && ok;
    out << (ok ? "[PASS] " : "[FAIL] ") << c.name << ": worst " << worst << " (tolerance " << c.tolerance << ")\n";
  }
  return all_ok;
}

}  // namespace itsbf
