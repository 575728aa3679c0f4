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

#include "secswipt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "secswipt/errors.hpp"

namespace secswipt::linalg {

bool all_finite(const CMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

double hermitian_defect(const CMatrix& a) {
  double defect = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i; j < a.cols(); ++j) {
      defect = std::max(defect, std::abs(a(i, j) - std::conj(a(j, i))));
    }
  }
  return defect;
}

void require_hermitian(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ValidationError(std::string(what) + ": expected a non-empty square matrix");
  }
  if (!all_finite(a)) {
    throw ValidationError(std::string(what) + ": non-finite entry");
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (hermitian_defect(a) > 1e-12 * scale) {
    throw ValidationError(std::string(what) + ": matrix is not Hermitian");
  }
}

void normalize_phase(Eigen::Ref<CVector> v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > best_abs) {
      best_abs = m;
      best = i;
    }
  }
  if (best_abs <= 0.0) return;
  const Complex rot = std::conj(v(best)) / best_abs;
  v *= rot;
  v(best) = Complex(std::abs(v(best)), 0.0);
}

HermitianEvd hermitian_evd(const CMatrix& a) {
  require_hermitian(a, "hermitian_evd");
  const CMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    // Eigen's tridiagonal QR allows 30 sweeps per eigenvalue.
    throw NumericalError("hermitian_evd: eigensolver did not converge",
                         static_cast<int>(30 * a.rows()));
  }
  const Eigen::Index n = a.rows();
  HermitianEvd out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  // Eigen sorts ascending; reverse with a stable order on ties.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    return solver.eigenvalues()(l) > solver.eigenvalues()(r);
  });
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = solver.eigenvalues()(src);
    out.eigenvectors.col(k) = solver.eigenvectors().col(src);
    normalize_phase(out.eigenvectors.col(k));
  }
  return out;
}

namespace {

void require_finite_shape(const CMatrix& a, const char* what) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw ValidationError(std::string(what) + ": empty matrix");
  }
  if (!all_finite(a)) {
    throw ValidationError(std::string(what) + ": non-finite entry");
  }
}

NullspaceBasis right_null_from_svd(const CMatrix& a, double rel_tol) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = rel_tol * smax;
  const Eigen::Index cols = a.cols();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double s = j < sv.size() ? sv(j) : 0.0;
    if (s <= cutoff) keep.push_back(j);
  }
  NullspaceBasis out;
  out.tolerance = rel_tol;
  out.basis.resize(cols, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    out.basis.col(col) = svd.matrixV().col(keep[k]);
    normalize_phase(out.basis.col(col));
  }
  return out;
}

}  // namespace

NullspaceBasis nullspace(const CMatrix& a, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw ValidationError("nullspace: rel_tol must lie in (0, 1)");
  }
  require_finite_shape(a, "nullspace");
  return right_null_from_svd(a, rel_tol);
}

CMatrix orth_complement_projector(const NullspaceBasis& basis) {
  const Eigen::Index n = basis.dim();
  CMatrix p = CMatrix::Identity(n, n);
  if (!basis.empty()) p.noalias() -= basis.basis * basis.basis.adjoint();
  return 0.5 * (p + p.adjoint());
}

NullspaceBasis svd_right_null(const CMatrix& g, double rel_tol) {
  require_finite_shape(g, "svd_right_null");
  if (g.rows() >= g.cols()) {
    throw SchemeInapplicable("null space of the ER channel matrix is empty: need K < M (K = " +
                             std::to_string(g.rows()) + ", M = " + std::to_string(g.cols()) +
                             ")");
  }
  return right_null_from_svd(g, rel_tol);
}

Eigen::Index numerical_rank(const CMatrix& a, double rel_tol) {
  require_finite_shape(a, "numerical_rank");
  Eigen::JacobiSVD<CMatrix> svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

double trace_product(const CMatrix& a, const CMatrix& b) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      acc += (a(i, j) * b(j, i)).real();
    }
  }
  return acc;
}

}  // namespace secswipt::linalg
