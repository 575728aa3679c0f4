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

#include "secswipt/suboptimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "secswipt/errors.hpp"

namespace secswipt {

namespace {

BeamformingSolution assemble(const CVector& v0, const CVector& w1, SchemeTag tag) {
  BeamformingSolution out;
  out.v0 = v0;
  out.W.push_back(w1);
  out.scheme = tag;
  return out;
}

}  // namespace

EnergyStage null_h_energy_stage(const SystemParams& params, const ChannelSet& ch) {
  params.validate();
  ch.validate(params);
  const double hn2 = ch.h.squaredNorm();
  if (!(hn2 > 0.0)) throw DegenerateChannel("IR channel is zero");
  const Eigen::Index m = params.M;
  const CMatrix T = CMatrix::Identity(m, m) - ch.h * ch.h.adjoint() / hn2;
  const linalg::HermitianEvd et = linalg::hermitian_evd(T);
  // T is a projector: M-1 unit eigenvalues, then one zero.
  EnergyStage st;
  st.X_tilde = et.eigenvectors.leftCols(m - 1);
  CMatrix weights = CMatrix::Zero(m - 1, m - 1);
  for (int k = 0; k < params.K; ++k) {
    const CVector gt = st.X_tilde.adjoint() * ch.g[static_cast<std::size_t>(k)];
    weights.noalias() += (params.mu[static_cast<std::size_t>(k)] * params.zeta) * (gt * gt.adjoint());
  }
  const linalg::HermitianEvd ew = linalg::hermitian_evd(weights);
  st.psi_tilde = ew.max_eigenvalue();
  st.eta_tilde = ew.top_eigenvector();
  st.direction = st.X_tilde * st.eta_tilde;
  return st;
}

BeamformingSolution SchemeIDesign::beams() const { return assemble(v0, w1, SchemeTag::kSub1); }

SchemeIDesign scheme1(const SystemParams& params, const ChannelSet& ch) {
  params.validate();
  ch.validate(params);
  if (params.K >= params.M) {
    throw SchemeInapplicable("zero-forcing scheme needs fewer ERs than antennas (K=" +
                             std::to_string(params.K) + ", M=" + std::to_string(params.M) + ")");
  }
  SchemeIDesign d;
  d.V_tilde = linalg::svd_right_null(ch.stacked_er()).basis;
  if (d.V_tilde.cols() == 0) throw DegenerateChannel("ER channels span every transmit direction");
  const CVector proj = d.V_tilde.adjoint() * ch.h;
  const double pn2 = proj.squaredNorm();
  if (!(pn2 > 1e-24 * ch.h.squaredNorm())) {
    throw DegenerateChannel("IR channel is orthogonal to the null space of the ER channels");
  }
  d.P0_tilde = (std::exp2(params.r_bar) - 1.0) * params.sigma0_sq / pn2;
  // The last-ulp allowance keeps the scheme's own rate limit feasible.
  if (d.P0_tilde > params.P_bar * (1.0 + 1e-12)) {
    throw SchemeInfeasible("zero-forcing scheme needs " + std::to_string(d.P0_tilde) +
                           " W for the information beam, above the budget");
  }
  d.P0_tilde = std::min(d.P0_tilde, params.P_bar);
  d.v0 = std::sqrt(d.P0_tilde) * (d.V_tilde * proj) / std::sqrt(pn2);
  d.energy = null_h_energy_stage(params, ch);
  const double rest = params.P_bar - d.P0_tilde;
  d.w1 = std::sqrt(rest) * d.energy.direction;
  d.E = d.energy.psi_tilde * rest;
  return d;
}

BeamformingSolution SchemeIIDesign::beams() const { return assemble(v0, w1, SchemeTag::kSub2); }

double scheme2_rate(const SystemParams& params, const ChannelSet& ch, const EnergyStage& stage,
                    double P0) {
  const double hn2 = ch.h.squaredNorm();
  const double ir = std::log2(1.0 + P0 * hn2 / params.sigma0_sq);
  double rate = std::numeric_limits<double>::infinity();
  for (int k = 0; k < params.K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const CVector& gk = ch.g[ku];
    const double leak = std::norm(ch.h.dot(gk));
    const double an = std::norm(stage.direction.dot(gk));
    const double er = P0 * leak / (hn2 * ((params.P_bar - P0) * an + params.sigma_sq[ku]));
    rate = std::min(rate, ir - std::log2(1.0 + er));
  }
  return rate;
}

SchemeIIDesign scheme2(const SystemParams& params, const ChannelSet& ch, const Scheme2Config& cfg) {
  params.validate();
  ch.validate(params);
  if (cfg.grid_points < 2) throw ValidationError("grid_points must be at least 2");
  if (!(cfg.boundary_tol > 0.0)) throw ValidationError("boundary_tol must be positive");

  SchemeIIDesign d;
  d.energy = null_h_energy_stage(params, ch);
  const double pbar = params.P_bar;
  auto feasible = [&](double p) {
    return p > 0.0 && scheme2_rate(params, ch, d.energy, p) >= params.r_bar;
  };

  // Uniform grid over (0, P_bar].
  const int n = cfg.grid_points;
  int first = -1;
  int last = -1;
  int prev = -2;
  for (int i = 1; i <= n; ++i) {
    if (!feasible(pbar * i / n)) continue;
    ++d.feasible_grid_points;
    if (first < 0) first = i;
    if (prev >= 0 && i != prev + 1) d.disconnected = true;
    prev = i;
    last = i;
  }
  if (first < 0) {
    throw SchemeInfeasible("no power split of the matched scheme reaches the secrecy target");
  }

  // Refine each end of the feasible range by bisection; the returned ends
  // are always feasible points.
  const double width = cfg.boundary_tol * pbar;
  auto refine = [&](double in, double out_pt) {
    while (std::abs(in - out_pt) > width) {
      const double mid = 0.5 * (in + out_pt);
      if (feasible(mid)) {
        in = mid;
      } else {
        out_pt = mid;
      }
    }
    return in;
  };
  d.P0_hat_min = refine(pbar * first / n, pbar * (first - 1) / n);
  d.P0_hat_max = last == n ? pbar : refine(pbar * last / n, pbar * (last + 1) / n);

  const double hn2 = ch.h.squaredNorm();
  double info_gain = 0.0;
  double energy_gain = 0.0;
  for (int k = 0; k < params.K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    info_gain += params.mu[ku] * std::norm(ch.h.dot(ch.g[ku])) / hn2;
    energy_gain += params.mu[ku] * std::norm(d.energy.direction.dot(ch.g[ku]));
  }
  d.branch = info_gain >= energy_gain ? PowerBranch::kMaxPower : PowerBranch::kMinPower;
  d.P0_hat = d.branch == PowerBranch::kMaxPower ? d.P0_hat_max : d.P0_hat_min;

  d.v0 = std::sqrt(d.P0_hat) * ch.h / std::sqrt(hn2);
  d.w1 = std::sqrt(pbar - d.P0_hat) * d.energy.direction;
  d.E = compute_energy(ch, d.beams(), params).weighted_sum;
  return d;
}

}  // namespace secswipt
