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

#include "itsbf/model.hpp"

namespace itsbf {

struct PowerAllocation {
  RVector p;                 // per-user power
  double water_level = 0.0;  // mu
  RVector a;                 // per-user cost of unit power against the budget
};

// Co-phases the surface so that user k adds coherently through RF chain k:
// phi_m = -arg(v_m), v = sum_k diag(h_k) T e_k. Requires K <= N.
PhaseConfig phase_align(const SystemInstance& inst);

// Right pseudo-inverse h_eff^H (h_eff h_eff^H)^{-1}, so h_eff * F = I_K.
// Throws Error(kRankDeficient) when cond(h_eff) > 1e12.
CMatrix zf_directions(const CMatrix& h_eff);

// Maximizes sum_k alpha_k log2(1 + p_k / sigma2) subject to
// sum_k a_k p_k = p_max with an active-set water level.
PowerAllocation waterfill(const RVector& weights, const RVector& a, double sigma2, double p_max);

// ZF directions and water-filled powers at fixed phases.
Precoder zfwf_precoder(const SystemInstance& inst, const PhaseConfig& phases, PowerAllocation* allocation = nullptr);

// phase_align followed by zfwf_precoder.
Solution zfwf_solve(const SystemInstance& inst);

}  // namespace itsbf
