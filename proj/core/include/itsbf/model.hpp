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

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace itsbf {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

enum class ConstraintKind { kRadiatedPower, kTransmittedPower };

std::string_view to_string(ConstraintKind kind);
ConstraintKind parse_constraint_kind(std::string_view text);

// One concrete beamforming problem.
//
//   T  (M x N)  response from the N active antennas to the M surface elements
//   H  (K x M)  user channels, row k is h_k^T
//
// Powers and noise are linear. The constructor validates dimensions and
// ranges and throws itsbf::Error on violation.
class SystemInstance {
 public:
  SystemInstance(CMatrix transfer, CMatrix channel, double noise_power,
                 RVector weights, ConstraintKind constraint, double p_max);

  const CMatrix& transfer() const { return transfer_; }
  const CMatrix& channel() const { return channel_; }
  double noise_power() const { return noise_power_; }
  const RVector& weights() const { return weights_; }
  ConstraintKind constraint() const { return constraint_; }
  double p_max() const { return p_max_; }

  Eigen::Index n_elements() const { return transfer_.rows(); }  // M
  Eigen::Index n_antennas() const { return transfer_.cols(); }  // N
  Eigen::Index n_users() const { return channel_.rows(); }      // K

  SystemInstance with_budget(ConstraintKind constraint, double p_max) const;

 private:
  CMatrix transfer_;
  CMatrix channel_;
  double noise_power_;
  RVector weights_;
  ConstraintKind constraint_;
  double p_max_;
};

// Surface phases in radians. The surface matrix is diag(exp(j*phi)), so unit
// modulus holds by construction.
class PhaseConfig {
 public:
  PhaseConfig() = default;
  explicit PhaseConfig(RVector phases);

  static PhaseConfig zeros(Eigen::Index m);

  const RVector& phases() const { return phases_; }
  Eigen::Index size() const { return phases_.size(); }

  // exp(j*phi), the diagonal of D.
  CVector diagonal() const;

 private:
  RVector phases_;
};

// N x K digital precoder, column k serves user k.
class Precoder {
 public:
  Precoder() = default;
  explicit Precoder(CMatrix b);

  static Precoder zeros(Eigen::Index n, Eigen::Index k);

  const CMatrix& matrix() const { return b_; }
  Eigen::Index n_antennas() const { return b_.rows(); }
  Eigen::Index n_users() const { return b_.cols(); }

 private:
  CMatrix b_;
};

struct TracePoint {
  int iteration = 0;
  double wsr = 0.0;
};

struct Solution {
  PhaseConfig phases;
  Precoder precoder;
  RVector sinr;
  RVector se;
  double wsr = 0.0;
  std::vector<TracePoint> trace;
  double constraint_slack = 0.0;  // p_max - h(D, B)
  int iterations = 0;
};

// H * diag(exp(j*phi)) * T, the K x N channel seen by the digital precoder.
CMatrix effective_channel(const SystemInstance& inst, const PhaseConfig& phases);

double sinr(const SystemInstance& inst, const PhaseConfig& phases,
            const Precoder& precoder, Eigen::Index k);

// All K SINRs at once; one effective-channel product instead of K.
RVector sinr_all(const SystemInstance& inst, const PhaseConfig& phases,
                 const Precoder& precoder);

// log2(1 + sinr_k)
RVector spectral_efficiency(const RVector& sinr);

double wsr(const SystemInstance& inst, const PhaseConfig& phases,
           const Precoder& precoder);

// Weighted sum rate from precomputed SINRs.
double wsr_from_sinr(const RVector& weights, const RVector& sinr);

// h(D, B): ||D T B||_F^2 under the radiated power constraint and ||B||_F^2
// under the transmitted power constraint.
double constraint_value(const SystemInstance& inst, const PhaseConfig& phases,
                        const Precoder& precoder);

// Relative tolerance applied to h(D, B) <= p_max.
inline constexpr double kConstraintTolerance = 1e-6;

bool is_feasible(const SystemInstance& inst, const PhaseConfig& phases,
                 const Precoder& precoder);

// Packs a Solution (SINR, SE, WSR, slack) for the given point.
Solution evaluate_solution(const SystemInstance& inst, PhaseConfig phases,
                           Precoder precoder);

}  // namespace itsbf
