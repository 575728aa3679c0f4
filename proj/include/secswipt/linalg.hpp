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

// Dense complex linear algebra used throughout the beamforming code:
// Hermitian eigendecomposition with a reproducible phase convention,
// null-space bases and orthogonal projectors.

#ifndef SECSWIPT_LINALG_HPP_
#define SECSWIPT_LINALG_HPP_

#include <complex>

#include <Eigen/Dense>

namespace secswipt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace linalg {

// Default relative tolerance for null-space extraction. Matrices coming out
// of the interior-point solver carry ~1e-8 residuals.
inline constexpr double kDefaultNullTol = 1e-7;

// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
// Each eigenvector has its largest-magnitude entry real and positive.
struct HermitianEvd {
  Eigen::VectorXd eigenvalues;
  CMatrix eigenvectors;

  double max_eigenvalue() const { return eigenvalues(0); }
  CVector top_eigenvector() const { return eigenvectors.col(0); }
};

// Orthonormal basis (possibly with zero columns) of an approximate null space.
struct NullspaceBasis {
  CMatrix basis;  // dim x nullity
  double tolerance = 0.0;

  Eigen::Index dim() const { return basis.rows(); }
  Eigen::Index nullity() const { return basis.cols(); }
  bool empty() const { return basis.cols() == 0; }
};

bool all_finite(const CMatrix& a);

// Largest |a_ij - conj(a_ji)|.
double hermitian_defect(const CMatrix& a);

// Throws ValidationError unless `a` is square, finite and Hermitian within
// 1e-12 (relative to its largest entry, floor 1).
void require_hermitian(const CMatrix& a, const char* what);

// Rotates `v` so that its largest-magnitude entry (first one on ties) is
// real and positive.
void normalize_phase(Eigen::Ref<CVector> v);

HermitianEvd hermitian_evd(const CMatrix& a);

// Orthonormal basis of {x : |Ax| <= rel_tol * sigma_max(A) * |x|}.
// Returns an empty basis when A has full column rank.
NullspaceBasis nullspace(const CMatrix& a, double rel_tol = kDefaultNullTol);

// P = I - Pi Pi^H for an orthonormal basis Pi.
CMatrix orth_complement_projector(const NullspaceBasis& basis);

// Right null space of a wide K x M matrix (K < M) from its SVD. Throws
// SchemeInapplicable when K >= M.
NullspaceBasis svd_right_null(const CMatrix& g, double rel_tol = kDefaultNullTol);

// Numerical rank by singular values above rel_tol * sigma_max.
Eigen::Index numerical_rank(const CMatrix& a, double rel_tol = kDefaultNullTol);

// Re Tr(A B) for Hermitian A, B.
double trace_product(const CMatrix& a, const CMatrix& b);

}  // namespace linalg
}  // namespace secswipt

#endif  // SECSWIPT_LINALG_HPP_
