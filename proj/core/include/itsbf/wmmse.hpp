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

#include <vector>

#include "itsbf/model.hpp"

namespace itsbf {

struct SolverSettings {
  double bcd_epsilon = 1e-3;  // bits/s/Hz
  int bcd_max_iters = 200;
  int pga_max_iters = 50;
  double armijo_zeta = 1e-3;
  double armijo_shrink = 0.5;
  double tau_init = 1.0;
  double dual_tolerance = 1e-6;  // relative gap |h - p_max| / p_max
  int dual_max_iters = 100;

  void validate() const;
};

struct AuxVariables {
  RVector gamma;
  CVector y;
};

// Quadratic surface-phase subproblem.
//
//   a_{i,k} = diag(h_k) T b_i
//   nu = sum_k sqrt(alpha_k (1 + gamma_k)) conj(y_k) a_{k,k}
//   U  = sum_k |y_k|^2 sum_i a_{i,k} a_{i,k}^H
//
// With chi = exp(-j phi) the phase-dependent part of the surrogate is
// 2 Re{chi^H nu} - chi^H U chi.
struct AnalogSubproblem {
  CVector nu;
  CMatrix u;
  // Optional low-rank factor with U = u_factor u_factor^H; when present it is
  // used for the matrix-vector products instead of the dense U.
  CMatrix u_factor;
};

// gamma_k = SINR_k at the current point.
RVector update_gamma(const SystemInstance& inst, const PhaseConfig& phases, const Precoder& precoder);

// y_k = sqrt(alpha_k (1 + gamma_k)) F_k / (G_k + |F_k|^2)
CVector update_y(const SystemInstance& inst, const PhaseConfig& phases, const Precoder& precoder,
                 const RVector& gamma);

// Surrogate objective f_1 in bits. Evaluated with natural logarithms and
// rescaled by 1/ln 2, so the closed-form gamma and y updates are its exact
// block maximizers and f_1 equals the WSR at those points.
double fp_objective(const SystemInstance& inst, const PhaseConfig& phases, const Precoder& precoder,
                    const AuxVariables& aux);

AnalogSubproblem build_analog_subproblem(const SystemInstance& inst, const Precoder& precoder,
                                         const RVector& gamma, const CVector& y);

double analog_objective(const PhaseConfig& phases, const AnalogSubproblem& sub);

struct ObjectiveAndGradient {
  double value = 0.0;
  RVector gradient;
};

// Gradient with respect to phi: 2 Re{ j exp(j phi) .* (nu - U exp(-j phi)) }.
ObjectiveAndGradient analog_objective_and_gradient(const PhaseConfig& phases, const AnalogSubproblem& sub);

struct PhaseSearchReport {
  PhaseConfig phases;
  std::vector<double> objective;  // one entry per accepted iterate, starting with the initial point
  int iterations = 0;
};

// Projected gradient ascent with Armijo backtracking. Iterates are wrapped
// into [0, 2pi).
PhaseSearchReport optimize_phases_report(const PhaseConfig& init, const AnalogSubproblem& sub,
                                         const SolverSettings& settings);
PhaseConfig optimize_phases(const PhaseConfig& init, const AnalogSubproblem& sub, const SolverSettings& settings);

// b_k = (sum_i |y_i|^2 conj(h~_i) h~_i^T + mu R)^{-1} sqrt(alpha_k (1 + gamma_k)) y_k conj(h~_k)
// where R = I_N for the transmitted power constraint and T^H T for the
// radiated power constraint. Throws Error(kNeedsPositiveDual) when mu == 0
// and the system is singular.
Precoder digital_precoder(const SystemInstance& inst, const PhaseConfig& phases, const RVector& gamma,
                          const CVector& y, double mu);

struct DualSearchResult {
  double mu = 0.0;
  Precoder precoder;
  double constraint = 0.0;  // h(D, B(mu))
  int iterations = 0;
};

DualSearchResult dual_search(const SystemInstance& inst, const PhaseConfig& phases, const RVector& gamma,
                             const CVector& y, const SolverSettings& settings);

struct BcdOptions {
  // false freezes the surface phases and runs digital-only WMMSE.
  bool optimize_phases = true;
};

struct BcdIteration {
  int iteration = 0;
  double f0 = 0.0;  // WSR after the iteration
  double f1 = 0.0;  // surrogate at the iteration's auxiliaries
  double mu = 0.0;
  int pga_steps = 0;
};

Solution bcd_solve(const SystemInstance& inst, const SolverSettings& settings, const Solution& init,
                   const BcdOptions& options = {}, std::vector<BcdIteration>* log = nullptr);

}  // namespace itsbf
