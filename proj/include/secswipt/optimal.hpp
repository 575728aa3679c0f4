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

// Globally optimal beamforming. The secrecy problem is split into an inner
// relaxation at a fixed IR SINR and an outer search over that SINR; the
// inner optimum is then turned into a rank-one information beam plus
// energy beams.

#ifndef SECSWIPT_OPTIMAL_HPP_
#define SECSWIPT_OPTIMAL_HPP_

#include <vector>

#include "secswipt/sdr.hpp"
#include "secswipt/system_model.hpp"

namespace secswipt {

struct TrivialCaseReport {
  double psi = 0.0;    // largest eigenvalue of sum_k mu_k zeta g_k g_k^H
  CVector eta;         // its unit eigenvector
  double E_max = 0.0;  // psi * P_bar
  double R_bar = 0.0;  // secrecy rate of the all-power eta beam
  bool applies = false;
};

TrivialCaseReport trivial_case(const SystemParams& params, const ChannelSet& ch);

// Beams for the no-secrecy optimum. All power rides on eta; when the target
// is zero and eta leaks (R_bar < 0) the same beam is sent as an energy beam
// so the information rate, and hence the secrecy rate, is exactly zero.
BeamformingSolution trivial_beams(const SystemParams& params, const TrivialCaseReport& rep);

struct GammaValue {
  double value = 0.0;  // -infinity when the relaxation is infeasible
  SdrSolution sdr;
};

// Throws NumericalError (with the SINR in the message) on solver failure.
GammaValue g_of_gamma(const SystemParams& params, const ChannelSet& ch, double gamma0,
                      const SolverConfig& cfg = {});

struct RankReduction {
  CMatrix S_bar;
  CMatrix Q_bar;
  CVector tau;
  double b = 0.0;
  std::vector<double> a;  // pi_n^H S pi_n for each null-space direction
  int null_dim = 0;
  bool pass_through = false;
  // Eigenvalues of the input Q above 1e-9 Tr(Q).
  int q_rank_before = 0;
};

inline constexpr double kRankOneRatio = 1e-7;
inline constexpr double kBeamRetention = 1e-9;

// Throws StateError for a non-optimal solution and ReconstructionError when
// the projected solution is not rank one or breaks a constraint.
RankReduction rank_reduce(const SdrInstance& inst, const SdrSolution& sol,
                          double null_tol = linalg::kDefaultNullTol);

BeamformingSolution extract_beams(const RankReduction& red, const SystemParams& params);

// Count of eigenvalues above kBeamRetention * Tr(Q).
int effective_rank(const CMatrix& Q);

enum class GammaStatus { kOptimal, kInfeasible, kNumericalFailure };

struct GammaSample {
  double gamma0 = 0.0;
  double value = 0.0;
  GammaStatus status = GammaStatus::kInfeasible;
};

struct GammaSearchTrace {
  std::vector<GammaSample> grid;
  std::vector<GammaSample> refinement;
  double best_gamma0 = 0.0;
  double best_value = 0.0;
  int refinement_iterations = 0;
};

struct SearchConfig {
  int grid_points = 100;
  double rel_tol = 1e-4;      // golden-section stop: interval / gamma0
  int max_refinement = 200;
  SolverConfig solver;
  FeasibilityConfig feasibility;  // used only to report r_max on failure
  bool report_r_max = true;       // false: InfeasibleTarget carries NaN
};

struct OptimalResult {
  BeamformingSolution beams;
  GammaSearchTrace trace;
  bool trivial = false;
  double energy = 0.0;          // weighted sum-energy of the returned beams
  double sdr_objective = 0.0;   // relaxation value at the chosen SINR
  RankReduction reduction;      // empty for the trivial shortcut
  SdrSolution sdr;              // empty for the trivial shortcut
  bool q_rank_within_bound = true;  // rank(Q) <= min(K, M) before projection
};

// Throws InfeasibleTarget carrying r_max when no SINR on the search grid
// admits a feasible relaxation.
OptimalResult solve_optimal(const SystemParams& params, const ChannelSet& ch,
                            const SearchConfig& cfg = {});

}  // namespace secswipt

#endif  // SECSWIPT_OPTIMAL_HPP_
