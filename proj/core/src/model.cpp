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
#include "itsbf/model.hpp"

#include <cmath>
#include <string>

#include "itsbf/error.hpp"

namespace itsbf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kInvalidConfig: return "invalid config";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kCoincidentPositions: return "coincident positions";
    case ErrorCode::kNearField: return "user inside near field";
    case ErrorCode::kNeedsPositiveDual: return "needs positive dual";
    case ErrorCode::kDualSearchFailed: return "dual search failed";
    case ErrorCode::kRankDeficient: return "rank deficient";
    case ErrorCode::kDegenerateBudget: return "degenerate budget";
    case ErrorCode::kIo: return "io error";
  }
  return "unknown error";
}

std::string_view to_string(ConstraintKind kind) {
  return kind == ConstraintKind::kRadiatedPower ? "rp" : "tp";
}

ConstraintKind parse_constraint_kind(std::string_view text) {
  if (text == "rp" || text == "RP" || text == "radiated") return ConstraintKind::kRadiatedPower;
  if (text == "tp" || text == "TP" || text == "transmitted") return ConstraintKind::kTransmittedPower;
  throw Error(ErrorCode::kInvalidArgument, "unknown constraint kind '" + std::string(text) + "'");
}

SystemInstance::SystemInstance(CMatrix transfer, CMatrix channel, double noise_power,
                               RVector weights, ConstraintKind constraint, double p_max)
    : transfer_(std::move(transfer)),
      channel_(std::move(channel)),
      noise_power_(noise_power),
      weights_(std::move(weights)),
      constraint_(constraint),
      p_max_(p_max) {
  const auto m = transfer_.rows();
  const auto n = transfer_.cols();
  const auto k = channel_.rows();
  if (n < 1 || m < n)
    throw Error(ErrorCode::kDimensionMismatch, "transfer matrix must be M x N with M >= N >= 1");
  if (k < 1 || channel_.cols() != m)
    throw Error(ErrorCode::kDimensionMismatch, "channel must be K x M with K >= 1");
  if (weights_.size() != k)
    throw Error(ErrorCode::kDimensionMismatch, "weights must have length K");
  if (!weights_.allFinite() || (weights_.array() < 0.0).any())
    throw Error(ErrorCode::kInvalidArgument, "weights must be finite and non-negative");
  if (!(noise_power_ > 0.0) || !std::isfinite(noise_power_))
    throw Error(ErrorCode::kInvalidArgument, "noise power must be positive");
  if (!(p_max_ > 0.0) || !std::isfinite(p_max_))
    throw Error(ErrorCode::kInvalidArgument, "power budget must be positive");
  if (!transfer_.allFinite() || !channel_.allFinite())
    throw Error(ErrorCode::kNonFinite, "transfer or channel matrix has non-finite entries");
}

SystemInstance SystemInstance::with_budget(ConstraintKind constraint, double p_max) const {
  return SystemInstance(transfer_, channel_, noise_power_, weights_, constraint, p_max);
}

PhaseConfig::PhaseConfig(RVector phases) : phases_(std::move(phases)) {
  if (!phases_.allFinite()) throw Error(ErrorCode::kNonFinite, "phase vector has non-finite entries");
}

PhaseConfig PhaseConfig::zeros(Eigen::Index m) { return PhaseConfig(RVector::Zero(m)); }

CVector PhaseConfig::diagonal() const {
  CVector d(phases_.size());
  for (Eigen::Index i = 0; i < phases_.size(); ++i) d(i) = std::polar(1.0, phases_(i));
  return d;
}

Precoder::Precoder(CMatrix b) : b_(std::move(b)) {
  if (!b_.allFinite()) throw Error(ErrorCode::kNonFinite, "precoder has non-finite entries");
}

Precoder Precoder::zeros(Eigen::Index n, Eigen::Index k) { return Precoder(CMatrix::Zero(n, k)); }

namespace {

void check_phases(const SystemInstance& inst, const PhaseConfig& phases) {
  if (phases.size() != inst.n_elements())
    throw Error(ErrorCode::kDimensionMismatch, "phase vector length must equal M");
}

void check_precoder(const SystemInstance& inst, const Precoder& precoder) {
  if (precoder.n_antennas() != inst.n_antennas() || precoder.n_users() != inst.n_users())
    throw Error(ErrorCode::kDimensionMismatch, "precoder must be N x K");
}

RVector sinr_from_gains(const CMatrix& gains, double noise_power) {
  // gains(k, i) = h~_k^T b_i
  const auto k_users = gains.rows();
  RVector out(k_users);
  for (Eigen::Index k = 0; k < k_users; ++k) {
    double interference = 0.0;
    for (Eigen::Index i = 0; i < gains.cols(); ++i)
      if (i != k) interference += std::norm(gains(k, i));
    out(k) = std::norm(gains(k, k)) / (interference + noise_power);
  }
  return out;
}

}  // namespace

CMatrix effective_channel(const SystemInstance& inst, const PhaseConfig& phases) {
  check_phases(inst, phases);
  return inst.channel() * phases.diagonal().asDiagonal() * inst.transfer();
}

double sinr(const SystemInstance& inst, const PhaseConfig& phases, const Precoder& precoder,
            Eigen::Index k) {
  check_precoder(inst, precoder);
  if (k < 0 || k >= inst.n_users()) throw Error(ErrorCode::kInvalidArgument, "user index out of range");
  const CMatrix heff = effective_channel(inst, phases);
  const CMatrix row_gains = heff.row(k) * precoder.matrix();
  const double signal = std::norm(row_gains(0, k));
  double interference = 0.0;
  for (Eigen::Index i = 0; i < inst.n_users(); ++i)
    if (i != k) interference += std::norm(row_gains(0, i));
  return signal / (interference + inst.noise_power());
}

RVector sinr_all(const SystemInstance& inst, const PhaseConfig& phases, const Precoder& precoder) {
  check_precoder(inst, precoder);
  return sinr_from_gains(effective_channel(inst, phases) * precoder.matrix(), inst.noise_power());
}

RVector spectral_efficiency(const RVector& sinr) {
  return sinr.unaryExpr([](double s) { return std::log2(1.0 + s); });
}

double wsr_from_sinr(const RVector& weights, const RVector& sinr) {
  return weights.dot(spectral_efficiency(sinr));
}

double wsr(const SystemInstance& inst, const PhaseConfig& phases, const Precoder& precoder) {
  return wsr_from_sinr(inst.weights(), sinr_all(inst, phases, precoder));
}

double constraint_value(const SystemInstance& inst, const PhaseConfig& phases,
                        const Precoder& precoder) {
  check_phases(inst, phases);
  check_precoder(inst, precoder);
  if (inst.constraint() == ConstraintKind::kTransmittedPower) return precoder.matrix().squaredNorm();
  return (phases.diagonal().asDiagonal() * (inst.transfer() * precoder.matrix())).squaredNorm();
}

bool is_feasible(const SystemInstance& inst, const PhaseConfig& phases, const Precoder& precoder) {
  return constraint_value(inst, phases, precoder) <= inst.p_max() * (1.0 + kConstraintTolerance);
}

Solution evaluate_solution(const SystemInstance& inst, PhaseConfig phases, Precoder precoder) {
  Solution s;
  s.sinr = sinr_all(inst, phases, precoder);
  s.se = spectral_efficiency(s.sinr);
  s.wsr = inst.weights().dot(s.se);
  s.constraint_slack = inst.p_max() - constraint_value(inst, phases, precoder);
  s.phases = std::move(phases);
  s.precoder = std::move(precoder);
  return s;
}

}  // namespace itsbf
