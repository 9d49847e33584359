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
#include "itsbf/wmmse.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "itsbf/error.hpp"
#include "itsbf/units.hpp"

namespace itsbf {

void SolverSettings::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidConfig, msg); };
  if (!(bcd_epsilon > 0.0)) fail("bcd_epsilon must be positive");
  if (bcd_max_iters < 1 || pga_max_iters < 1 || dual_max_iters < 1) fail("iteration limits must be positive");
  if (!(armijo_zeta > 0.0)) fail("armijo_zeta must be positive");
  if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0)) fail("armijo_shrink must lie in (0, 1)");
  if (!(tau_init > 0.0)) fail("tau_init must be positive");
  if (!(dual_tolerance > 0.0)) fail("dual_tolerance must be positive");
}

namespace {

// gains(k, i) = h~_k^T b_i
CMatrix link_gains(const SystemInstance& inst, const PhaseConfig& phases, const Precoder& precoder) {
  return effective_channel(inst, phases) * precoder.matrix();
}

double interference_plus_noise(const CMatrix& gains, Eigen::Index k, double noise_power) {
  double g = noise_power;
  for (Eigen::Index i = 0; i < gains.cols(); ++i)
    if (i != k) g += std::norm(gains(k, i));
  return g;
}

RVector fp_coefficients(const RVector& weights, const RVector& gamma) {
  return (weights.array() * (1.0 + gamma.array())).sqrt().matrix();
}

void check_aux(const SystemInstance& inst, const RVector& gamma, const CVector& y) {
  if (gamma.size() != inst.n_users() || y.size() != inst.n_users())
    throw Error(ErrorCode::kDimensionMismatch, "auxiliary vectors must have length K");
  if (!gamma.allFinite() || (gamma.array() < 0.0).any())
    throw Error(ErrorCode::kInvalidArgument, "gamma must be finite and non-negative");
}

// The regularized normal equations of the digital subproblem at fixed phases,
// diagonalized once: with R = L L^H and L^{-1} gram L^{-H} = Q diag(lambda) Q^H,
//   B(mu) = L^{-H} Q diag(1 / (lambda + mu)) C,   C = Q^H L^{-1} rhs,
// and the constraint value ||L^H B||_F^2 = sum_i ||C_i||^2 / (lambda_i + mu)^2
// for both R = I (TP) and R = T^H T (RP).
struct DigitalSystem {
  CMatrix l_inv_h_q;  // L^{-H} Q
  RVector lambda;     // ascending, clamped at zero
  CMatrix c;
  RVector c_row_sq;   // ||C_i||^2
  double scale = 1.0;       // trace(gram) / trace(R)
  double null_level = 0.0;  // eigenvalues at or below this count as singular

  DigitalSystem(const SystemInstance& inst, const PhaseConfig& phases, const RVector& gamma, const CVector& y) {
    check_aux(inst, gamma, y);
    const CMatrix heff = effective_channel(inst, phases);
    const RVector w = y.cwiseAbs2();
    const CMatrix gram = heff.adjoint() * w.asDiagonal() * heff;
    const CVector coef = fp_coefficients(inst.weights(), gamma).cast<cdouble>().cwiseProduct(y);
    const CMatrix rhs = heff.adjoint() * coef.asDiagonal();
    const Eigen::Index n = inst.n_antennas();

    CMatrix l = CMatrix::Identity(n, n);
    if (inst.constraint() == ConstraintKind::kRadiatedPower) {
      const CMatrix r = inst.transfer().adjoint() * inst.transfer();
      Eigen::LLT<CMatrix> llt(r);
      if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::kRankDeficient, "T^H T is not positive definite");
      l = llt.matrixL();
      scale = r.trace().real();
    } else {
      scale = static_cast<double>(n);
    }
    const double tr_g = gram.trace().real();
    scale = (tr_g > 0.0 && scale > 0.0) ? tr_g / scale : 1.0;

    const auto lower = l.triangularView<Eigen::Lower>();
    const CMatrix l_inv_gram = lower.solve(gram);
    const CMatrix whitened = lower.solve(l_inv_gram.adjoint());  // L^{-1} gram L^{-H}
    Eigen::SelfAdjointEigenSolver<CMatrix> es(whitened);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::kNonFinite, "digital subproblem eigensolve failed");
    lambda = es.eigenvalues().cwiseMax(0.0);
    const CMatrix& q = es.eigenvectors();
    c = q.adjoint() * lower.solve(rhs);
    c_row_sq = c.rowwise().squaredNorm();
    l_inv_h_q = l.adjoint().triangularView<Eigen::Upper>().solve(q);
    null_level = 1e-12 * lambda.maxCoeff();
    if (!lambda.allFinite() || !c.allFinite()) throw Error(ErrorCode::kNonFinite, "digital subproblem is not finite");
  }

  bool singular_at_zero() const { return lambda.size() == 0 || lambda.minCoeff() <= null_level; }

  double constraint(double mu) const {
    return (c_row_sq.array() / (lambda.array() + mu).square()).sum();
  }

  CMatrix precoder(double mu) const {
    const RVector inv = (lambda.array() + mu).inverse().matrix();
    return l_inv_h_q * (inv.cast<cdouble>().asDiagonal() * c);
  }
};

}  // namespace

RVector update_gamma(const SystemInstance& inst, const PhaseConfig& phases, const Precoder& precoder) {
  return sinr_all(inst, phases, precoder);
}

CVector update_y(const SystemInstance& inst, const PhaseConfig& phases, const Precoder& precoder,
                 const RVector& gamma) {
  if (gamma.size() != inst.n_users()) throw Error(ErrorCode::kDimensionMismatch, "gamma must have length K");
  const CMatrix gains = link_gains(inst, phases, precoder);
  const RVector coef = fp_coefficients(inst.weights(), gamma);
  CVector y(inst.n_users());
  for (Eigen::Index k = 0; k < inst.n_users(); ++k) {
    const cdouble f = gains(k, k);
    const double g = interference_plus_noise(gains, k, inst.noise_power());
    y(k) = coef(k) * f / (g + std::norm(f));
  }
  return y;
}

double fp_objective(const SystemInstance& inst, const PhaseConfig& phases, const Precoder& precoder,
                    const AuxVariables& aux) {
  check_aux(inst, aux.gamma, aux.y);
  const CMatrix gains = link_gains(inst, phases, precoder);
  const RVector& alpha = inst.weights();
  const RVector coef = fp_coefficients(alpha, aux.gamma);
  double total = 0.0;
  for (Eigen::Index k = 0; k < inst.n_users(); ++k) {
    const cdouble f = gains(k, k);
    const double g = interference_plus_noise(gains, k, inst.noise_power());
    total += alpha(k) * std::log1p(aux.gamma(k)) - alpha(k) * aux.gamma(k);
    total += 2.0 * coef(k) * std::real(std::conj(aux.y(k)) * f);
    total -= std::norm(aux.y(k)) * (g + std::norm(f));
  }
  return total / std::numbers::ln2;
}

AnalogSubproblem build_analog_subproblem(const SystemInstance& inst, const Precoder& precoder,
                                         const RVector& gamma, const CVector& y) {
  check_aux(inst, gamma, y);
  if (precoder.n_antennas() != inst.n_antennas() || precoder.n_users() != inst.n_users())
    throw Error(ErrorCode::kDimensionMismatch, "precoder must be N x K");

  const CMatrix& h = inst.channel();
  const CMatrix tb = inst.transfer() * precoder.matrix();  // column i: T b_i
  const RVector coef = fp_coefficients(inst.weights(), gamma);

  AnalogSubproblem sub;
  sub.nu = CVector::Zero(inst.n_elements());
  for (Eigen::Index k = 0; k < inst.n_users(); ++k)
    sub.nu += (coef(k) * std::conj(y(k))) * h.row(k).transpose().cwiseProduct(tb.col(k));

  // U = sum_k |y_k|^2 diag(h_k) (T B)(T B)^H diag(h_k)^H
  //   = (T B B^H T^H) .* (H^T diag(|y|^2) conj(H))
  const CMatrix s = tb * tb.adjoint();
  const CMatrix w = h.transpose() * y.cwiseAbs2().asDiagonal() * h.conjugate();
  sub.u = s.cwiseProduct(w);

  // The same U as a sum of K^2 rank-one terms |y_k|^2 a_{i,k} a_{i,k}^H.
  const Eigen::Index k_users = inst.n_users();
  sub.u_factor.resize(inst.n_elements(), k_users * tb.cols());
  for (Eigen::Index k = 0; k < k_users; ++k)
    for (Eigen::Index i = 0; i < tb.cols(); ++i)
      sub.u_factor.col(k * tb.cols() + i) = std::abs(y(k)) * h.row(k).transpose().cwiseProduct(tb.col(i));
  return sub;
}

namespace {

CVector apply_u(const AnalogSubproblem& sub, const CVector& chi) {
  if (sub.u_factor.size() > 0) return sub.u_factor * (sub.u_factor.adjoint() * chi);
  return sub.u * chi;
}

}  // namespace

double analog_objective(const PhaseConfig& phases, const AnalogSubproblem& sub) {
  if (phases.size() != sub.nu.size()) throw Error(ErrorCode::kDimensionMismatch, "phase length must equal M");
  const CVector chi = phases.diagonal().conjugate();
  return 2.0 * std::real(chi.dot(sub.nu)) - std::real(chi.dot(apply_u(sub, chi)));
}

ObjectiveAndGradient analog_objective_and_gradient(const PhaseConfig& phases, const AnalogSubproblem& sub) {
  if (phases.size() != sub.nu.size()) throw Error(ErrorCode::kDimensionMismatch, "phase length must equal M");
  const CVector psi = phases.diagonal();
  const CVector chi = psi.conjugate();
  const CVector u_chi = apply_u(sub, chi);
  ObjectiveAndGradient out;
  out.value = 2.0 * std::real(chi.dot(sub.nu)) - std::real(chi.dot(u_chi));
  const cdouble j(0.0, 1.0);
  out.gradient = (2.0 * (j * psi.cwiseProduct(sub.nu - u_chi)).real()).eval();
  return out;
}

PhaseSearchReport optimize_phases_report(const PhaseConfig& init, const AnalogSubproblem& sub,
                                         const SolverSettings& settings) {
  constexpr double kMinStep = 1e-12;
  PhaseSearchReport report;
  RVector phi = init.phases().unaryExpr([](double p) { return wrap_two_pi(p); });
  auto current = analog_objective_and_gradient(PhaseConfig(phi), sub);
  if (!std::isfinite(current.value)) throw Error(ErrorCode::kNonFinite, "analog objective is not finite");
  report.objective.push_back(current.value);

  for (int it = 0; it < settings.pga_max_iters; ++it) {
    const double grad_sq = current.gradient.squaredNorm();
    if (!(grad_sq > 0.0)) break;

    bool accepted = false;
    RVector candidate;
    double candidate_value = 0.0;
    for (double tau = settings.tau_init; tau >= kMinStep; tau *= settings.armijo_shrink) {
      candidate = (phi + tau * current.gradient).unaryExpr([](double p) { return wrap_two_pi(p); });
      candidate_value = analog_objective(PhaseConfig(candidate), sub);
      if (!std::isfinite(candidate_value)) throw Error(ErrorCode::kNonFinite, "analog objective is not finite");
      if (candidate_value - current.value >= tau * settings.armijo_zeta * grad_sq) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    phi = std::move(candidate);
    current = analog_objective_and_gradient(PhaseConfig(phi), sub);
    report.objective.push_back(current.value);
    ++report.iterations;
  }
  report.phases = PhaseConfig(std::move(phi));
  return report;
}

PhaseConfig optimize_phases(const PhaseConfig& init, const AnalogSubproblem& sub, const SolverSettings& settings) {
  return optimize_phases_report(init, sub, settings).phases;
}

Precoder digital_precoder(const SystemInstance& inst, const PhaseConfig& phases, const RVector& gamma,
                          const CVector& y, double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw Error(ErrorCode::kInvalidArgument, "dual variable must be >= 0");
  const DigitalSystem sys(inst, phases, gamma, y);
  if (mu == 0.0 && sys.singular_at_zero())
    throw Error(ErrorCode::kNeedsPositiveDual, "digital subproblem is singular at mu = 0");
  return Precoder(sys.precoder(mu));
}

DualSearchResult dual_search(const SystemInstance& inst, const PhaseConfig& phases, const RVector& gamma,
                             const CVector& y, const SolverSettings& settings) {
  const DigitalSystem sys(inst, phases, gamma, y);
  const double p_max = inst.p_max();
  DualSearchResult result;

  if (sys.c_row_sq.sum() == 0.0) {
    result.precoder = Precoder::zeros(inst.n_antennas(), inst.n_users());
    return result;
  }

  auto finish = [&](double mu, double h, int iterations) {
    result.mu = mu;
    result.constraint = h;
    result.precoder = Precoder(sys.precoder(mu));
    result.iterations = iterations;
    return result;
  };

  if (!sys.singular_at_zero()) {
    const double h0 = sys.constraint(0.0);
    if (h0 <= p_max) return finish(0.0, h0, 0);
  } else {
    // Singular at zero: the limit mu -> 0+ may still be feasible.
    const double mu_tiny = 1e-10 * sys.scale;
    const double h_tiny = sys.constraint(mu_tiny);
    if (h_tiny <= p_max) return finish(mu_tiny, h_tiny, 0);
  }

  // The dual variable is searched in units of trace(gram) / trace(R) so the
  // doubling phase starts at the right order of magnitude.
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  double h = sys.constraint(hi * sys.scale);
  while (h >= p_max) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > settings.dual_max_iters)
      throw Error(ErrorCode::kDualSearchFailed, "could not bracket the dual variable");
    h = sys.constraint(hi * sys.scale);
  }
  if (p_max - h <= settings.dual_tolerance * p_max) return finish(hi * sys.scale, h, doublings);

  // Only the feasible side of the bracket is accepted, so the returned
  // precoder never exceeds the budget.
  for (int it = 1; it <= settings.dual_max_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    h = sys.constraint(mid * sys.scale);
    if (h <= p_max && p_max - h <= settings.dual_tolerance * p_max) return finish(mid * sys.scale, h, doublings + it);
    (h > p_max ? lo : hi) = mid;
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "no convergence after " << settings.dual_max_iters << " bisection steps; last bracket mu in ["
      << lo * sys.scale << ", " << hi * sys.scale << "]";
  throw Error(ErrorCode::kDualSearchFailed, msg.str());
}

Solution bcd_solve(const SystemInstance& inst, const SolverSettings& settings, const Solution& init,
                   const BcdOptions& options, std::vector<BcdIteration>* log) {
  settings.validate();
  PhaseConfig phases = init.phases;
  Precoder precoder = init.precoder;
  if (!is_feasible(inst, phases, precoder))
    throw Error(ErrorCode::kInvalidArgument, "initial point violates the power constraint");

  double current = wsr(inst, phases, precoder);
  std::vector<TracePoint> trace{{0, current}};
  int iterations = 0;

  for (int t = 1; t <= settings.bcd_max_iters; ++t) {
    AuxVariables aux;
    aux.gamma = update_gamma(inst, phases, precoder);
    aux.y = update_y(inst, phases, precoder, aux.gamma);

    PhaseConfig next_phases = phases;
    int pga_steps = 0;
    if (options.optimize_phases) {
      const AnalogSubproblem sub = build_analog_subproblem(inst, precoder, aux.gamma, aux.y);
      PhaseSearchReport pga = optimize_phases_report(phases, sub, settings);
      next_phases = std::move(pga.phases);
      pga_steps = pga.iterations;
    }
    DualSearchResult dual = dual_search(inst, next_phases, aux.gamma, aux.y, settings);
    const double next = wsr(inst, next_phases, dual.precoder);

    // Block ascent cannot lose WSR; a drop here is round-off from the dual
    // tolerance, so keep the previous point and stop.
    if (next < current) break;

    const double f1 = fp_objective(inst, next_phases, dual.precoder, aux);
    phases = std::move(next_phases);
    precoder = std::move(dual.precoder);
    iterations = t;
    trace.push_back({t, next});
    if (log) log->push_back({t, next, f1, dual.mu, pga_steps});

    const double gain = next - current;
    current = next;
    if (gain <= settings.bcd_epsilon) break;
  }

  Solution out = evaluate_solution(inst, std::move(phases), std::move(precoder));
  out.trace = std::move(trace);
  out.iterations = iterations;
  return out;
}

}  // namespace itsbf
