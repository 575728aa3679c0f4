// Copyright 2026 The secswipt Authors
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

#include "secswipt/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "secswipt/errors.hpp"

namespace secswipt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-7;
constexpr double kObjTol = 1e-9;
constexpr double kRateSlack = 1e-6;
constexpr double kPowerSlack = 1e-8;

std::vector<double> eigenvalues_of(const CMatrix& a) {
  const Eigen::VectorXd ev = linalg::hermitian_evd(a).eigenvalues;
  return {ev.data(), ev.data() + ev.size()};
}

struct Evaluation {
  GammaSample sample;
  SdrSolution sdr;
};

Evaluation evaluate(const SystemParams& params, const ChannelSet& ch, double gamma0,
                    const SolverConfig& cfg) {
  Evaluation ev;
  ev.sample.gamma0 = gamma0;
  ev.sdr = solve_sdr(build_instance(params, ch, gamma0), cfg);
  switch (ev.sdr.status) {
    case SdrStatus::kOptimal:
      ev.sample.status = GammaStatus::kOptimal;
      ev.sample.value = ev.sdr.objective;
      break;
    case SdrStatus::kInfeasible:
      ev.sample.status = GammaStatus::kInfeasible;
      ev.sample.value = kNegInf;
      break;
    case SdrStatus::kNumericalFailure:
      ev.sample.status = GammaStatus::kNumericalFailure;
      ev.sample.value = kNegInf;
      break;
  }
  return ev;
}

}  // namespace

TrivialCaseReport trivial_case(const SystemParams& params, const ChannelSet& ch) {
  const EnergyDirection dir = max_energy_direction(params, ch);
  TrivialCaseReport rep;
  rep.psi = dir.psi;
  rep.eta = dir.eta;
  rep.E_max = dir.psi * params.P_bar;
  rep.R_bar = dir.R_bar;
  rep.applies = params.r_bar <= std::max(0.0, dir.R_bar);
  return rep;
}

BeamformingSolution trivial_beams(const SystemParams& params, const TrivialCaseReport& rep) {
  BeamformingSolution out;
  out.scheme = SchemeTag::kTrivial;
  const CVector beam = std::sqrt(params.P_bar) * rep.eta;
  if (rep.R_bar >= 0.0) {
    out.v0 = beam;
  } else {
    out.v0 = CVector::Zero(params.M);
    out.W.push_back(beam);
  }
  return out;
}

GammaValue g_of_gamma(const SystemParams& params, const ChannelSet& ch, double gamma0,
                      const SolverConfig& cfg) {
  Evaluation ev = evaluate(params, ch, gamma0, cfg);
  if (ev.sample.status == GammaStatus::kNumericalFailure) {
    throw NumericalError("relaxation failed at gamma0 = " + std::to_string(gamma0),
                         ev.sdr.iterations);
  }
  return {ev.sample.value, std::move(ev.sdr)};
}

int effective_rank(const CMatrix& Q) {
  const double tr = Q.trace().real();
  if (!(tr > 0.0)) return 0;
  const Eigen::VectorXd ev = linalg::hermitian_evd(Q).eigenvalues;
  return static_cast<int>((ev.array() > kBeamRetention * tr).count());
}

RankReduction rank_reduce(const SdrInstance& inst, const SdrSolution& sol, double null_tol) {
  const KktMatrices kkt = kkt_matrices(inst, sol);
  RankReduction red;
  red.q_rank_before = effective_rank(sol.Q);

  const linalg::HermitianEvd es = linalg::hermitian_evd(sol.S);
  const double s1 = es.eigenvalues(0);
  if (!(s1 > 0.0)) {
    throw ReconstructionError("information covariance is zero", eigenvalues_of(sol.S));
  }
  if (es.eigenvalues.size() < 2 || es.eigenvalues(1) <= kRankOneRatio * s1) {
    red.S_bar = sol.S;
    red.Q_bar = sol.Q;
    red.tau = es.top_eigenvector();
    red.b = sol.S.trace().real();
    red.pass_through = true;
    return red;
  }

  // On the zero-leakage face only directions inside the face may carry S.
  linalg::NullspaceBasis pi;
  if (sol.face.size() == 0) {
    pi = linalg::nullspace(kkt.D_star, null_tol);
  } else {
    pi = linalg::nullspace(sol.face.adjoint() * kkt.D_star * sol.face, null_tol);
    pi.basis = sol.face * pi.basis;
  }
  red.null_dim = static_cast<int>(pi.nullity());
  if (pi.empty()) {
    throw ReconstructionError("information covariance has rank > 1 but D* has no null space",
                              eigenvalues_of(sol.S));
  }
  const CMatrix P = linalg::orth_complement_projector(pi);
  red.S_bar = P * sol.S * P;
  red.S_bar = 0.5 * (red.S_bar + red.S_bar.adjoint());
  red.Q_bar = sol.Q + (sol.S - red.S_bar);
  red.Q_bar = 0.5 * (red.Q_bar + red.Q_bar.adjoint());
  for (Eigen::Index n = 0; n < pi.nullity(); ++n) {
    const CVector col = pi.basis.col(n);
    red.a.push_back(col.dot(sol.S * col).real());
  }
  const linalg::HermitianEvd eb = linalg::hermitian_evd(red.S_bar);
  red.b = red.S_bar.trace().real();
  red.tau = eb.top_eigenvector();

  if (!(eb.eigenvalues(0) > 0.0) || eb.eigenvalues(1) > kRankOneRatio * eb.eigenvalues(0)) {
    throw ReconstructionError("projected information covariance is not rank one",
                              eigenvalues_of(red.S_bar));
  }
  const double viol = sdr_constraint_violation(inst, red.S_bar, red.Q_bar);
  if (viol > kFeasTol) {
    throw ReconstructionError("projected solution violates a constraint by " + std::to_string(viol),
                              eigenvalues_of(red.Q_bar));
  }
  const double before = sdr_objective(inst, sol.S, sol.Q);
  const double after = sdr_objective(inst, red.S_bar, red.Q_bar);
  if (std::abs(after - before) > kObjTol * std::max(std::abs(before), 1e-300)) {
    throw ReconstructionError("projection changed the objective", eigenvalues_of(red.S_bar));
  }
  return red;
}

BeamformingSolution extract_beams(const RankReduction& red, const SystemParams& params) {
  BeamformingSolution out;
  out.scheme = SchemeTag::kOptimal;
  out.v0 = std::sqrt(std::max(red.b, 0.0)) * red.tau;
  const double tr = red.Q_bar.trace().real();
  if (tr > 0.0) {
    const linalg::HermitianEvd eq = linalg::hermitian_evd(red.Q_bar);
    for (Eigen::Index j = 0; j < eq.eigenvalues.size(); ++j) {
      const double q = eq.eigenvalues(j);
      if (q > kBeamRetention * tr) out.W.push_back(std::sqrt(q) * eq.eigenvectors.col(j));
    }
  }
  if (out.d() > params.M) throw StateError("more energy beams than antennas");
  return out;
}

OptimalResult solve_optimal(const SystemParams& params, const ChannelSet& ch,
                            const SearchConfig& cfg) {
  params.validate();
  ch.validate(params);
  if (cfg.grid_points < 2) throw ValidationError("grid_points must be at least 2");
  if (!(cfg.rel_tol > 0.0)) throw ValidationError("rel_tol must be positive");

  OptimalResult out;
  const TrivialCaseReport triv = trivial_case(params, ch);
  if (triv.applies) {
    out.trivial = true;
    out.beams = trivial_beams(params, triv);
    out.energy = compute_energy(ch, out.beams, params).weighted_sum;
    out.sdr_objective = triv.E_max;
    return out;
  }

  const std::vector<double> grid = gamma_search_grid(params, ch, params.r_bar, cfg.grid_points);
  GammaSearchTrace& trace = out.trace;
  trace.best_value = kNegInf;
  SdrSolution best_sdr;
  int best_index = -1;
  int failures = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Evaluation ev = evaluate(params, ch, grid[i], cfg.solver);
    trace.grid.push_back(ev.sample);
    if (ev.sample.status == GammaStatus::kNumericalFailure) ++failures;
    if (ev.sample.status == GammaStatus::kOptimal && ev.sample.value > trace.best_value) {
      trace.best_value = ev.sample.value;
      trace.best_gamma0 = ev.sample.gamma0;
      best_sdr = std::move(ev.sdr);
      best_index = static_cast<int>(i);
    }
  }
  // Grid neighbours of the best point bracket the refinement.
  const auto last = static_cast<int>(grid.size()) - 1;
  int bracket_lo = std::max(best_index - 1, 0);
  int bracket_hi = std::min(best_index + 1, last);
  if (best_index < 0) {
    if (!grid.empty() && failures == static_cast<int>(grid.size())) {
      throw NumericalError("every relaxation on the SINR grid failed", failures);
    }
    const GammaRescue rescue = rescue_gamma(params, ch, grid, cfg.solver);
    if (rescue.gamma0) {
      Evaluation ev = evaluate(params, ch, *rescue.gamma0, cfg.solver);
      trace.refinement.push_back(ev.sample);
      if (ev.sample.status == GammaStatus::kOptimal) {
        trace.best_value = ev.sample.value;
        trace.best_gamma0 = ev.sample.gamma0;
        best_sdr = std::move(ev.sdr);
        const auto above = std::upper_bound(grid.begin(), grid.end(), *rescue.gamma0);
        bracket_hi = std::min(static_cast<int>(above - grid.begin()), last);
        bracket_lo = std::max(bracket_hi - 1, 0);
      }
    }
  }
  if (!(trace.best_value > kNegInf)) {
    if (!cfg.report_r_max) {
      throw InfeasibleTarget("no SINR on the search grid admits the secrecy target",
                             std::numeric_limits<double>::quiet_NaN());
    }
    FeasibilityConfig fc = cfg.feasibility;
    fc.solver = cfg.solver;
    const FeasibilityReport rep = check_feasibility(params, ch, fc);
    throw InfeasibleTarget("secrecy target " + std::to_string(params.r_bar) +
                               " exceeds the achievable maximum " + std::to_string(rep.r_max),
                           rep.r_max);
  }

  // Golden-section refinement in log(gamma0) over the bracket.
  double lo = std::log(grid[static_cast<std::size_t>(bracket_lo)]);
  double hi = std::log(grid[static_cast<std::size_t>(bracket_hi)]);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto probe = [&](double x) {
    Evaluation ev = evaluate(params, ch, std::exp(x), cfg.solver);
    trace.refinement.push_back(ev.sample);
    if (ev.sample.status == GammaStatus::kOptimal && ev.sample.value > trace.best_value) {
      trace.best_value = ev.sample.value;
      trace.best_gamma0 = ev.sample.gamma0;
      best_sdr = std::move(ev.sdr);
    }
    return ev.sample.value;
  };
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = probe(x1);
  double f2 = probe(x2);
  while ((std::exp(hi) - std::exp(lo)) > cfg.rel_tol * std::exp(0.5 * (lo + hi)) &&
         trace.refinement_iterations < cfg.max_refinement) {
    ++trace.refinement_iterations;
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = probe(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = probe(x2);
    }
  }

  const SdrInstance inst = build_instance(params, ch, trace.best_gamma0);
  out.reduction = rank_reduce(inst, best_sdr);
  out.beams = extract_beams(out.reduction, params);
  out.sdr = std::move(best_sdr);
  out.sdr_objective = trace.best_value;
  out.q_rank_within_bound = out.reduction.q_rank_before <= std::min(params.K, params.M);

  const Metrics m = evaluate_metrics(ch, out.beams, params);
  out.energy = m.weighted_sum_energy;
  if (m.secrecy_rate < params.r_bar - kRateSlack) {
    throw NumericalError("reconstructed beams miss the secrecy target: rate " +
                             std::to_string(m.secrecy_rate),
                         out.sdr.iterations);
  }
  if (out.beams.total_power() > params.P_bar * (1.0 + kPowerSlack)) {
    throw NumericalError("reconstructed beams exceed the power budget", out.sdr.iterations);
  }
  return out;
}

}  // namespace secswipt
