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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "itsbf/error.hpp"
#include "itsbf/selfcheck.hpp"
#include "itsbf/wmmse.hpp"
#include "oracles.hpp"

namespace itsbf {
namespace {

using test::random_cn;

// v = sum_k diag(h_k) T e_k, element by element.
CVector loop_alignment_vector(const SystemInstance& inst) {
  CVector v(inst.n_elements());
  for (Eigen::Index m = 0; m < inst.n_elements(); ++m) {
    cdouble acc = 0.0;
    for (Eigen::Index k = 0; k < inst.n_users(); ++k) acc += inst.channel()(k, m) * inst.transfer()(m, k);
    v(m) = acc;
  }
  return v;
}

TEST(PhaseAlign, AlreadyAlignedSingleUser) {
  CMatrix h(1, 5);
  h << 0.5, 1.0, 2.0, 0.1, 3.0;
  const SystemInstance inst(CMatrix::Ones(5, 1), h, 0.1, RVector::Ones(1), ConstraintKind::kRadiatedPower, 1.0);
  const PhaseConfig phi = phase_align(inst);
  EXPECT_LT(phi.phases().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PhaseAlign, CoPhasesEveryContribution) {
  Rng rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const auto inst = random_instance(32, 4, rep % 4 + 1, ConstraintKind::kRadiatedPower, rng);
    const CVector v = loop_alignment_vector(inst);
    const CVector theta = phase_align(inst).diagonal();
    const cdouble aligned = theta.cwiseProduct(v).sum();
    EXPECT_NEAR(aligned.real(), v.cwiseAbs().sum(), 1e-10 * v.cwiseAbs().sum());
    EXPECT_NEAR(aligned.imag(), 0.0, 1e-10 * v.cwiseAbs().sum());
  }
}

TEST(PhaseAlign, MatchesPerElementGridSearch) {
  // The alignment objective Re sum_m theta_m v_m separates over elements, so
  // a per-element grid search is exhaustive.
  Rng rng(2);
  const auto inst = random_instance(6, 2, 2, ConstraintKind::kTransmittedPower, rng);
  const CVector v = loop_alignment_vector(inst);
  double brute = 0.0;
  for (Eigen::Index m = 0; m < 6; ++m) {
    double best = -1e300;
    for (int s = 0; s < 64; ++s) best = std::max(best, std::real(std::polar(1.0, 2.0 * std::numbers::pi * s / 64) * v(m)));
    brute += best;
  }
  const double achieved = std::real(phase_align(inst).diagonal().cwiseProduct(v).sum());
  EXPECT_GE(achieved, brute * 0.99);
  EXPECT_GE(achieved, brute - 1e-12);
}

TEST(PhaseAlign, RejectsMoreUsersThanChains) {
  Rng rng(3);
  const auto inst = random_instance(8, 2, 3, ConstraintKind::kTransmittedPower, rng);
  EXPECT_THROW(phase_align(inst), Error);
}

TEST(ZfDirections, IdentityCase) {
  EXPECT_LT((zf_directions(CMatrix::Identity(4, 4)) - CMatrix::Identity(4, 4)).norm(), 1e-14);
}

TEST(ZfDirections, RightInverseOnRandomChannels) {
  Rng rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const int k = rep % 4 + 1;
    const CMatrix h = random_cn(k, 4, rng);
    const CMatrix f = zf_directions(h);
    EXPECT_LT((h * f - CMatrix::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-9);
    // minimum-norm solution: columns lie in the row space of h
    EXPECT_LT((f - h.adjoint() * (h * h.adjoint()).inverse()).norm(), 1e-9 * f.norm());
  }
}

TEST(ZfDirections, SingleUserMatchedFilter) {
  Rng rng(5);
  const CMatrix h = random_cn(1, 4, rng);
  const CMatrix f = zf_directions(h);
  EXPECT_LT((f - h.adjoint() / h.squaredNorm()).norm(), 1e-14 * f.norm());
}

TEST(ZfDirections, RankDeficientIsReported) {
  Rng rng(6);
  CMatrix h = random_cn(3, 4, rng);
  h.row(2) = 2.0 * h.row(0);
  try {
    zf_directions(h);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
  }
}

TEST(Waterfill, SingleUserTakesEverything) {
  const auto alloc = waterfill(RVector::Ones(1), RVector::Constant(1, 2.5), 0.3, 4.0);
  EXPECT_NEAR(alloc.p(0), 4.0 / 2.5, 1e-14);
}

TEST(Waterfill, SymmetricUsersSplitEvenly) {
  const auto alloc = waterfill(RVector::Ones(2), RVector::Constant(2, 0.7), 0.2, 3.0);
  EXPECT_NEAR(alloc.p(0), 3.0 / (2.0 * 0.7), 1e-14);
  EXPECT_NEAR(alloc.p(1), 3.0 / (2.0 * 0.7), 1e-14);
}

// Bisection on the water level of p_k(lambda) = [alpha_k / (lambda a_k) - sigma2]_+.
RVector oracle_waterfill(const RVector& alpha, const RVector& a, double sigma2, double p_max) {
  auto alloc = [&](double lambda) {
    RVector p(alpha.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) p(k) = std::max(0.0, alpha(k) / (lambda * a(k)) - sigma2);
    return p;
  };
  auto spend = [&](double lambda) { return a.dot(alloc(lambda)); };
  double lo = 1e-300, hi = 1.0;
  while (spend(hi) > p_max) hi *= 2.0;
  lo = hi;
  while (spend(lo) < p_max) lo /= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    (spend(mid) > p_max ? lo : hi) = mid;
  }
  return alloc(std::sqrt(lo * hi));
}

double rate(const RVector& alpha, const RVector& p, double sigma2) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) r += alpha(k) * std::log2(1.0 + p(k) / sigma2);
  return r;
}

TEST(Waterfill, MatchesNumericOracle) {
  Rng rng(7);
  std::uniform_real_distribution<double> w(0.2, 2.0), cost(0.1, 5.0), noise(0.01, 2.0), budget(0.05, 10.0);
  int clipped_cases = 0;
  for (int rep = 0; rep < 100; ++rep) {
    RVector alpha(4), a(4);
    for (int k = 0; k < 4; ++k) {
      alpha(k) = w(rng);
      a(k) = cost(rng);
    }
    const double sigma2 = noise(rng), p_max = budget(rng);
    const auto alloc = waterfill(alpha, a, sigma2, p_max);
    const RVector oracle = oracle_waterfill(alpha, a, sigma2, p_max);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(alloc.p(k), oracle(k), 1e-6 * std::max(1.0, oracle(k)));
    EXPECT_NEAR(a.dot(alloc.p), p_max, 1e-9 * p_max);
    EXPECT_GE(alloc.p.minCoeff(), 0.0);
    if ((alloc.p.array() == 0.0).any()) ++clipped_cases;

    // equal marginal utility per unit cost across active users
    double ratio = -1.0;
    for (int k = 0; k < 4; ++k) {
      if (alloc.p(k) <= 0.0) continue;
      const double r = alpha(k) / (a(k) * (alloc.p(k) + sigma2));
      if (ratio < 0.0) ratio = r;
      EXPECT_NEAR(r / ratio, 1.0, 1e-6);
    }

    // no budget-preserving transfer between two users improves the rate
    const double best = rate(alpha, alloc.p, sigma2);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == j || alloc.p(i) <= 0.0) continue;
        RVector q = alloc.p;
        const double moved = 1e-3 * q(i);
        q(i) -= moved;
        q(j) += moved * a(i) / a(j);
        EXPECT_LE(rate(alpha, q, sigma2), best + 1e-12);
      }
  }
  EXPECT_GT(clipped_cases, 0);  // the sample covers the clipping branch
}

TEST(Waterfill, ValidatesInputs) {
  EXPECT_THROW(waterfill(RVector::Ones(2), RVector::Ones(3), 0.1, 1.0), Error);
  EXPECT_THROW(waterfill(RVector::Ones(2), RVector::Zero(2), 0.1, 1.0), Error);
  EXPECT_THROW(waterfill(RVector::Ones(2), RVector::Ones(2), 0.0, 1.0), Error);
  EXPECT_THROW(waterfill(RVector::Zero(2), RVector::Ones(2), 0.1, 1.0), Error);
}

TEST(ZfwfSolve, RemovesInterferenceAndMeetsBudget) {
  Rng rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    const auto kind = rep % 2 ? ConstraintKind::kRadiatedPower : ConstraintKind::kTransmittedPower;
    const auto inst = random_instance(32, 4, rep % 3 + 2, kind, rng);
    PowerAllocation alloc;
    const PhaseConfig phases = phase_align(inst);
    const Precoder b = zfwf_precoder(inst, phases, &alloc);
    const Solution s = zfwf_solve(inst);
    EXPECT_EQ(s.precoder.matrix(), b.matrix());

    const CMatrix gains = test::loop_effective_channel(inst.channel(), phases.phases(), inst.transfer()) * b.matrix();
    for (Eigen::Index k = 0; k < gains.rows(); ++k)
      for (Eigen::Index i = 0; i < gains.cols(); ++i)
        if (i != k && alloc.p(k) > 0.0) EXPECT_LT(std::abs(gains(k, i)), 1e-6 * std::abs(gains(k, k)));

    const double h = constraint_value(inst, phases, b);
    EXPECT_NEAR(h, inst.p_max(), 1e-9 * inst.p_max());
    double expected = 0.0;
    for (Eigen::Index k = 0; k < inst.n_users(); ++k) {
      expected += inst.weights()(k) * std::log2(1.0 + alloc.p(k) / inst.noise_power());
      if (alloc.p(k) > 0.0) EXPECT_NEAR(s.sinr(k) / (alloc.p(k) / inst.noise_power()), 1.0, 1e-6);
    }
    EXPECT_NEAR(s.wsr, expected, 1e-9 * std::max(1.0, expected));
  }
}

TEST(ZfwfSolve, ScalarChainCapacity) {
  CMatrix t(1, 1), h(1, 1);
  t << cdouble(0.3, 0.4);
  h << cdouble(-1.2, 0.5);
  const double sigma2 = 0.05, p_max = 2.0;
  for (auto kind : {ConstraintKind::kTransmittedPower, ConstraintKind::kRadiatedPower}) {
    const SystemInstance inst(t, h, sigma2, RVector::Ones(1), kind, p_max);
    const double gain = kind == ConstraintKind::kTransmittedPower ? std::norm(h(0, 0) * t(0, 0)) : std::norm(h(0, 0));
    EXPECT_NEAR(zfwf_solve(inst).wsr, std::log2(1.0 + p_max * gain / sigma2), 1e-12);
  }
}

TEST(ZfwfSolve, BcdFromZfwfNeverLoses) {
  Rng rng(9);
  SolverSettings settings;
  settings.bcd_max_iters = 30;
  for (int rep = 0; rep < 6; ++rep) {
    const auto kind = rep % 2 ? ConstraintKind::kRadiatedPower : ConstraintKind::kTransmittedPower;
    const auto inst = random_instance(16, 4, 4, kind, rng);
    const Solution zf = zfwf_solve(inst);
    const Solution bcd = bcd_solve(inst, settings, zf);
    EXPECT_LE(zf.wsr, bcd.wsr + settings.bcd_epsilon);
  }
}

}  // namespace
}  // namespace itsbf
