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

// Small dense interior-point solver for complex Hermitian semidefinite
// programs with linear inequality rows:
//
//   maximize    sum_b Re Tr(C_b X_b)
//   subject to  sum_b Re Tr(A_rb X_b) <= c_r,   r = 1..m
//               X_b Hermitian PSD.
//
// Each Hermitian block is handled through its real symmetric embedding
// [[Re X, -Im X], [Im X, Re X]]. The method is a homogeneous self-dual
// primal-dual path-following scheme with Nesterov-Todd scaling and a
// Mehrotra predictor-corrector, so infeasible problems terminate with a
// Farkas certificate instead of diverging.
//
// Dual variables follow the maximization convention: y_r >= 0 and
// Z_b = sum_r y_r A_rb - C_b is PSD at optimality.

#ifndef SECSWIPT_SDP_SOLVER_HPP_
#define SECSWIPT_SDP_SOLVER_HPP_

#include <string_view>
#include <vector>

#include "secswipt/linalg.hpp"

namespace secswipt::conic {

struct InequalityRow {
  std::vector<CMatrix> coeffs;  // one Hermitian matrix per block
  double rhs = 0.0;
};

struct HermitianSdp {
  std::vector<int> block_dims;
  std::vector<CMatrix> objective;  // one Hermitian matrix per block
  std::vector<InequalityRow> rows;

  void validate() const;
};

struct IpmConfig {
  double feastol = 1e-8;   // scaled primal / dual residuals
  double reltol = 1e-8;    // relative duality gap
  double abstol = 1e-10;   // absolute gap on the equilibrated problem
  int max_iterations = 200;
  double step_fraction = 0.99;
  // When progress stalls, an iterate that still meets feastol and these
  // looser gap tolerances is returned as optimal with reduced_accuracy set.
  double reduced_reltol = 1e-6;
  double reduced_abstol = 1e-8;
};

enum class IpmStatus {
  kOptimal,
  kPrimalInfeasible,
  kDualInfeasible,
  kMaxIterations,
  kNumericalFailure,
};

std::string_view to_string(IpmStatus status);

struct IpmResult {
  IpmStatus status = IpmStatus::kNumericalFailure;
  int iterations = 0;

  std::vector<CMatrix> X;
  Eigen::VectorXd y;
  std::vector<CMatrix> Z;  // sum_r y_r A_rb - C_b, recomputed from y

  double primal_objective = 0.0;
  double dual_objective = 0.0;

  // Convergence measures on the internally equilibrated problem.
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  double relative_gap = 0.0;
  bool reduced_accuracy = false;

  // For kPrimalInfeasible: y >= 0 with sum_r y_r A_rb PSD for all b and
  // sum_r y_r c_r = -1.
  Eigen::VectorXd farkas_ray;
};

IpmResult solve(const HermitianSdp& problem, const IpmConfig& config = {});

}  // namespace secswipt::conic

#endif  // SECSWIPT_SDP_SOLVER_HPP_
