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
#include "itsbf/zfwf.hpp"

#include <cmath>
#include <string>

#include "itsbf/error.hpp"

namespace itsbf {

PhaseConfig phase_align(const SystemInstance& inst) {
  const auto k_users = inst.n_users();
  if (k_users > inst.n_antennas())
    throw Error(ErrorCode::kInvalidArgument, "phase alignment needs K <= N (one RF chain per user)");
  const CMatrix& h = inst.channel();
  const CMatrix& t = inst.transfer();
  CVector v = CVector::Zero(inst.n_elements());
  for (Eigen::Index k = 0; k < k_users; ++k) v += h.row(k).transpose().cwiseProduct(t.col(k));

  RVector phi(inst.n_elements());
  for (Eigen::Index m = 0; m < phi.size(); ++m) phi(m) = std::abs(v(m)) > 0.0 ? -std::arg(v(m)) : 0.0;
  return PhaseConfig(std::move(phi));
}

CMatrix zf_directions(const CMatrix& h_eff) {
  const auto k_users = h_eff.rows();
  if (k_users < 1 || k_users > h_eff.cols())
    throw Error(ErrorCode::kInvalidArgument, "zero forcing needs 1 <= K <= N");
  Eigen::JacobiSVD<CMatrix> svd(h_eff, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smax > 0.0) || !(smin > 0.0) || smax / smin > 1e12)
    throw Error(ErrorCode::kRankDeficient, "effective channel condition number exceeds 1e12");
  return svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

PowerAllocation waterfill(const RVector& weights, const RVector& a, double sigma2, double p_max) {
  const auto k_users = weights.size();
  if (a.size() != k_users) throw Error(ErrorCode::kDimensionMismatch, "weights and costs differ in length");
  if (!(sigma2 > 0.0) || !(p_max > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma2 and p_max must be positive");
  if (!a.allFinite() || (a.array() <= 0.0).any())
    throw Error(ErrorCode::kInvalidArgument, "power costs a_k must be positive and finite");
  if (!weights.allFinite() || (weights.array() < 0.0).any())
    throw Error(ErrorCode::kInvalidArgument, "weights must be finite and non-negative");

  std::vector<bool> active(static_cast<std::size_t>(k_users), true);
  PowerAllocation out;
  out.a = a;
  out.p = RVector::Zero(k_users);
  while (true) {
    double alpha_sum = 0.0;
    double a_sum = 0.0;
    for (Eigen::Index k = 0; k < k_users; ++k) {
      if (!active[k]) continue;
      alpha_sum += weights(k);
      a_sum += a(k);
    }
    if (!(alpha_sum > 0.0)) throw Error(ErrorCode::kDegenerateBudget, "no user receives power");
    const double mu = alpha_sum / (p_max + sigma2 * a_sum);

    bool dropped = false;
    for (Eigen::Index k = 0; k < k_users; ++k) {
      if (!active[k]) continue;
      const double pk = weights(k) / (mu * a(k)) - sigma2;
      if (pk <= 0.0) {
        active[k] = false;
        dropped = true;
      }
    }
    if (dropped) continue;

    out.water_level = mu;
    for (Eigen::Index k = 0; k < k_users; ++k) out.p(k) = active[k] ? weights(k) / (mu * a(k)) - sigma2 : 0.0;
    return out;
  }
}

Precoder zfwf_precoder(const SystemInstance& inst, const PhaseConfig& phases, PowerAllocation* allocation) {
  const CMatrix f = zf_directions(effective_channel(inst, phases));
  RVector a(inst.n_users());
  if (inst.constraint() == ConstraintKind::kTransmittedPower) {
    a = f.colwise().squaredNorm().transpose();
  } else {
    a = (inst.transfer() * f).colwise().squaredNorm().transpose();
  }
  PowerAllocation alloc = waterfill(inst.weights(), a, inst.noise_power(), inst.p_max());
  CMatrix b = f * alloc.p.cwiseSqrt().asDiagonal();
  if (allocation) *allocation = std::move(alloc);
  return Precoder(std::move(b));
}

Solution zfwf_solve(const SystemInstance& inst) {
  PhaseConfig phases = phase_align(inst);
  Precoder precoder = zfwf_precoder(inst, phases);
  Solution s = evaluate_solution(inst, std::move(phases), std::move(precoder));
  s.trace = {{0, s.wsr}};
  return s;
}

}  // namespace itsbf
