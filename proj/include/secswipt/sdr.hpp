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

// Semidefinite relaxation of the fixed-SINR subproblem. For a target IR
// SINR gamma0 the beam covariances S = v0 v0^H and Q = sum_i w_i w_i^H solve
//
//   maximize    sum_k mu_k zeta (Tr(G_k S) + Tr(G_k Q))
//   subject to  Tr(H S) >= gamma0 (Tr(H Q) + sigma0^2)
//               Tr(G_k S) <= gamma_e (Tr(G_k Q) + sigma_k^2)     for all k
//               Tr(S) + Tr(Q) <= P_bar,   S, Q PSD
//
// with gamma_e = (1 + gamma0) / 2^r_bar - 1 and the rank-one constraint on S
// dropped. Dual variables are (lambda, beta_k, theta) in the order above.

#ifndef SECSWIPT_SDR_HPP_
#define SECSWIPT_SDR_HPP_

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "secswipt/sdp_solver.hpp"
#include "secswipt/system_model.hpp"

namespace secswipt {

struct SdrInstance {
  int M = 0;
  int K = 0;
  CVector h;
  std::vector<CVector> g;
  CMatrix H;                // h h^H
  std::vector<CMatrix> G;   // g_k g_k^H
  CMatrix obj_weights;      // sum_k mu_k zeta G_k
  double gamma0 = 0.0;
  double gamma_e = 0.0;
  double r_bar = 0.0;
  double sigma0_sq = 0.0;
  std::vector<double> sigma_sq;
  double P_bar = 0.0;
  // r_bar > max(0, R_bar): the nontrivial regime where lambda, theta > 0.
  bool nontrivial = false;
};

struct SolverConfig {
  conic::IpmConfig ipm;
  bool refine_duals = true;
  double dual_floor = 1e-9;
};

enum class SdrStatus { kOptimal, kInfeasible, kNumericalFailure };

std::string_view to_string(SdrStatus status);

struct KktResiduals {
  double primal_infeasibility = 0.0;  // see sdr_constraint_violation
  double dual_infeasibility = 0.0;    // max(lambda_max(A), lambda_max(B), -duals);
                                      // A restricted to the face when one is set
  double complementarity_s = 0.0;     // |Tr(A S)|
  double complementarity_q = 0.0;     // |Tr(B Q)|
  double complementarity_rows = 0.0;  // sum_r y_r * slack_r (physical)
  double objective_gap = 0.0;         // |primal - dual| objective
};

struct SdrSolution {
  SdrStatus status = SdrStatus::kNumericalFailure;
  CMatrix S;
  CMatrix Q;
  double lambda = 0.0;
  std::vector<double> beta;
  double theta = 0.0;
  double objective = 0.0;
  KktResiduals kkt;
  int iterations = 0;
  bool duals_refined = false;
  // Set when inst.nontrivial but lambda or theta fell below dual_floor.
  bool dual_floor_violated = false;
  // For kInfeasible: (lambda, beta..., theta) ray in the physical scaling.
  std::vector<double> infeasibility_ray;
  // At gamma_e = 0 the ER rows pin S to the common null space of the
  // eavesdropper channels and no strictly feasible point exists. The
  // relaxation is then solved on that face: S = F X F^H with F an orthonormal
  // M x n basis stored here, and beta is reported as zero. Empty otherwise.
  CMatrix face;
};

struct KktMatrices {
  CMatrix A;
  CMatrix B;
  CMatrix D_star;
};

// Largest weighted-energy direction and the secrecy rate it offers when all
// power rides on a single information beam along it.
struct EnergyDirection {
  double psi = 0.0;
  CVector eta;
  double R_bar = 0.0;
};

EnergyDirection max_energy_direction(const SystemParams& params, const ChannelSet& ch);

// Throws DomainError when gamma0 < 2^r_bar - 1 or gamma0 <= 0.
SdrInstance build_instance(const SystemParams& params, const ChannelSet& ch, double gamma0);

// The instance in solver form: variables S / P_bar and Q / P_bar, IR row
// divided by sigma0^2, ER rows by sigma_k^2, power row by P_bar.
conic::HermitianSdp to_conic(const SdrInstance& inst);

SdrSolution solve_sdr(const SdrInstance& inst, const SolverConfig& cfg = {});

// Throws StateError unless sol.status is optimal.
KktMatrices kkt_matrices(const SdrInstance& inst, const SdrSolution& sol);

// Worst violation of the four constraint families for candidate (S, Q) as a
// fraction of the power budget (rows divided by their coefficient size).
double sdr_constraint_violation(const SdrInstance& inst, const CMatrix& S, const CMatrix& Q);

// sum_k mu_k zeta Tr(G_k (S + Q)).
double sdr_objective(const SdrInstance& inst, const CMatrix& S, const CMatrix& Q);

// Log-spaced target-SINR grid over [2^r - 1, P_bar |h|^2 / sigma0^2].
// Empty when the interval is empty (r at or beyond the IR capacity).
std::vector<double> gamma_search_grid(const SystemParams& params, const ChannelSet& ch, double r,
                                      int points);

// Least total power meeting the IR and ER rows at the instance's SINR pair
// (the budget row dropped); +infinity when no pair of covariances meets them
// or the solve fails.
double min_power(const SdrInstance& inst, const SolverConfig& cfg = {});

struct GammaRescue {
  std::optional<double> gamma0;  // relaxation verified feasible here
  int sdp_solves = 0;
};

// Fallback for when no grid SINR gives a feasible relaxation: near the rate
// limit the feasible SINR interval can be narrower than the grid spacing.
// Minimizes the required power over the grid, then locally around its best
// point, and returns an SINR whose full relaxation solves as optimal.
GammaRescue rescue_gamma(const SystemParams& params, const ChannelSet& ch,
                         const std::vector<double>& grid, const SolverConfig& cfg = {});

// log2(1 + P_bar |h|^2 / sigma0^2).
double ir_capacity(const SystemParams& params, const ChannelSet& ch);

struct FeasibilityConfig {
  int grid_points = 100;
  double rate_tol = 1e-4;  // bisection width [bit/s/Hz]
  SolverConfig solver;
};

struct FeasibilityReport {
  bool feasible = false;
  double r_max = 0.0;
  double r_capacity = 0.0;
  int sdp_solves = 0;
  int numerical_failures = 0;
};

// Bisection on the secrecy target; a target counts as achievable when some
// gamma0 on the search grid, or found by rescue_gamma, yields a feasible
// relaxation.
FeasibilityReport check_feasibility(const SystemParams& params, const ChannelSet& ch,
                                    const FeasibilityConfig& cfg = {});

// Plain-text listing of a conic program (dense, row-major, complex entries
// as "re im" pairs) for cross-checking against external solvers.
void write_conic_listing(const conic::HermitianSdp& problem, std::ostream& out);

}  // namespace secswipt

#endif  // SECSWIPT_SDR_HPP_
