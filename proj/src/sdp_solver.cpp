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

#include "secswipt/sdp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "secswipt/errors.hpp"

namespace secswipt::conic {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view to_string(IpmStatus status) {
  switch (status) {
    case IpmStatus::kOptimal:
      return "optimal";
    case IpmStatus::kPrimalInfeasible:
      return "primal_infeasible";
    case IpmStatus::kDualInfeasible:
      return "dual_infeasible";
    case IpmStatus::kMaxIterations:
      return "max_iterations";
    case IpmStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

void HermitianSdp::validate() const {
  if (block_dims.empty()) throw ValidationError("sdp: no variable blocks");
  const std::size_t nb = block_dims.size();
  for (int d : block_dims) {
    if (d <= 0) throw ValidationError("sdp: block dimensions must be positive");
  }
  auto check_blocks = [&](const std::vector<CMatrix>& mats, const std::string& what) {
    if (mats.size() != nb) throw ValidationError("sdp: " + what + " has wrong block count");
    for (std::size_t b = 0; b < nb; ++b) {
      if (mats[b].rows() != block_dims[b] || mats[b].cols() != block_dims[b]) {
        throw ValidationError("sdp: " + what + " block has wrong shape");
      }
      linalg::require_hermitian(mats[b], what.c_str());
    }
  };
  check_blocks(objective, "objective");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    check_blocks(rows[r].coeffs, "row " + std::to_string(r));
    if (!std::isfinite(rows[r].rhs)) throw ValidationError("sdp: non-finite right-hand side");
  }
}

namespace {

// A usable iterate whose gap has not shrunk for this long is returned.
constexpr int kStallIterations = 15;

// One entry of the real embedding of a Hermitian basis matrix.
struct Triplet {
  int row;
  int col;
  double val;
};

struct ComplexEntry {
  int row;
  int col;
  Complex val;
};

// Orthonormal basis of the Hermitian d x d matrices (inner product
// Re Tr(AB)): diagonal units, then for each i < j a symmetric real pair and
// an antisymmetric imaginary pair, both scaled by 1/sqrt(2).
struct Block {
  int dim = 0;
  int offset = 0;
  std::vector<std::vector<ComplexEntry>> entries;
  std::vector<std::vector<Triplet>> embedded;

  int size() const { return dim * dim; }
};

Block make_block(int dim, int offset) {
  Block blk;
  blk.dim = dim;
  blk.offset = offset;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i) blk.entries.push_back({{i, i, Complex(1.0, 0.0)}});
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      blk.entries.push_back({{i, j, Complex(r, 0.0)}, {j, i, Complex(r, 0.0)}});
      blk.entries.push_back({{i, j, Complex(0.0, r)}, {j, i, Complex(0.0, -r)}});
    }
  }
  for (const auto& es : blk.entries) {
    std::vector<Triplet> t;
    for (const ComplexEntry& e : es) {
      const double re = e.val.real();
      const double im = e.val.imag();
      if (re != 0.0) {
        t.push_back({e.row, e.col, re});
        t.push_back({e.row + dim, e.col + dim, re});
      }
      if (im != 0.0) {
        t.push_back({e.row, e.col + dim, -im});
        t.push_back({e.row + dim, e.col, im});
      }
    }
    blk.embedded.push_back(std::move(t));
  }
  return blk;
}

// Re Tr(C E_j) for every basis element of the block.
VectorXd coordinates(const Block& blk, const CMatrix& c) {
  VectorXd out(blk.size());
  for (int j = 0; j < blk.size(); ++j) {
    double acc = 0.0;
    for (const ComplexEntry& e : blk.entries[static_cast<std::size_t>(j)]) {
      acc += (c(e.col, e.row) * e.val).real();
    }
    out(j) = acc;
  }
  return out;
}

CMatrix hermitian_from(const Block& blk, const VectorXd& x) {
  CMatrix out = CMatrix::Zero(blk.dim, blk.dim);
  for (int j = 0; j < blk.size(); ++j) {
    const double v = x(blk.offset + j);
    for (const ComplexEntry& e : blk.entries[static_cast<std::size_t>(j)]) {
      out(e.row, e.col) += v * e.val;
    }
  }
  return out;
}

// Projection onto embedded Hermitian matrices [[A, -B], [B, A]].
void project_structure(MatrixXd& s, int dim) {
  const MatrixXd a = 0.5 * (s.topLeftCorner(dim, dim) + s.bottomRightCorner(dim, dim));
  const MatrixXd b = 0.5 * (s.bottomLeftCorner(dim, dim) - s.topRightCorner(dim, dim));
  s.topLeftCorner(dim, dim) = a;
  s.bottomRightCorner(dim, dim) = a;
  s.bottomLeftCorner(dim, dim) = b;
  s.topRightCorner(dim, dim) = -b;
  s = 0.5 * (s + s.transpose()).eval();
}

// Element of the product cone: nonnegative orthant for the rows, then one
// PSD block of size 2 * dim per Hermitian variable.
struct ConeVec {
  VectorXd l;
  std::vector<MatrixXd> s;
};

double dot(const ConeVec& a, const ConeVec& b) {
  double acc = a.l.dot(b.l);
  for (std::size_t k = 0; k < a.s.size(); ++k) acc += a.s[k].cwiseProduct(b.s[k]).sum();
  return acc;
}

double norm(const ConeVec& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const ConeVec& x, ConeVec& y) {
  y.l += alpha * x.l;
  for (std::size_t k = 0; k < y.s.size(); ++k) y.s[k] += alpha * x.s[k];
}

ConeVec sub(const ConeVec& a, const ConeVec& b) {
  ConeVec out = a;
  axpy(-1.0, b, out);
  return out;
}

// Largest t with min eigenvalue / entry of (v + t e) reaching zero, i.e.
// -min_eig(v). Positive means v is outside the cone.
double cone_violation(const ConeVec& v) {
  double worst = -std::numeric_limits<double>::infinity();
  if (v.l.size() > 0) worst = std::max(worst, -v.l.minCoeff());
  for (const MatrixXd& s : v.s) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(s, Eigen::EigenvaluesOnly);
    worst = std::max(worst, -es.eigenvalues()(0));
  }
  return worst;
}

void add_identity(double t, ConeVec& v) {
  v.l.array() += t;
  for (MatrixXd& s : v.s) s.diagonal().array() += t;
}

struct BlockScaling {
  MatrixXd g;      // W(z) = g^T z g
  MatrixXd g_inv;  // W^{-T}(s) = g_inv s g_inv^T
  MatrixXd w_inv;  // (W^T W)^{-1}(u) = w_inv u w_inv
  VectorXd lambda;
};

struct Scaling {
  VectorXd w;  // orthant part: W(z) = w .* z
  VectorXd lambda_l;
  std::vector<BlockScaling> blocks;
};

std::optional<MatrixXd> sqrt_psd(const MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  if (es.info() != Eigen::Success || es.eigenvalues()(0) <= 0.0) return std::nullopt;
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

std::optional<Scaling> nt_scaling(const ConeVec& s, const ConeVec& z) {
  Scaling sc;
  if (s.l.size() > 0 && (s.l.minCoeff() <= 0.0 || z.l.minCoeff() <= 0.0)) return std::nullopt;
  sc.w = (s.l.array() / z.l.array()).sqrt();
  sc.lambda_l = (s.l.array() * z.l.array()).sqrt();
  for (std::size_t k = 0; k < s.s.size(); ++k) {
    const auto ls = sqrt_psd(s.s[k]);
    const auto rz = sqrt_psd(z.s[k]);
    if (!ls || !rz) return std::nullopt;
    Eigen::JacobiSVD<MatrixXd> svd(*rz * *ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd& d = svd.singularValues();
    if (d.minCoeff() <= 0.0) return std::nullopt;
    const VectorXd d_isqrt = d.cwiseSqrt().cwiseInverse();
    BlockScaling b;
    b.g = *ls * svd.matrixV() * d_isqrt.asDiagonal();
    b.g_inv = d_isqrt.asDiagonal() * svd.matrixU().transpose() * *rz;
    b.w_inv = b.g_inv.transpose() * b.g_inv;
    b.lambda = d;
    sc.blocks.push_back(std::move(b));
  }
  return sc;
}

// W(z)
ConeVec apply_w(const Scaling& sc, const ConeVec& z) {
  ConeVec out;
  out.l = sc.w.cwiseProduct(z.l);
  for (std::size_t k = 0; k < z.s.size(); ++k) {
    out.s.push_back(sc.blocks[k].g.transpose() * z.s[k] * sc.blocks[k].g);
  }
  return out;
}

// W^T(u)
ConeVec apply_wt(const Scaling& sc, const ConeVec& u) {
  ConeVec out;
  out.l = sc.w.cwiseProduct(u.l);
  for (std::size_t k = 0; k < u.s.size(); ++k) {
    out.s.push_back(sc.blocks[k].g * u.s[k] * sc.blocks[k].g.transpose());
  }
  return out;
}

// (W^T W)^{-1}(u)
ConeVec apply_wtw_inv(const Scaling& sc, const ConeVec& u) {
  ConeVec out;
  out.l = u.l.cwiseQuotient(sc.w.cwiseProduct(sc.w));
  for (std::size_t k = 0; k < u.s.size(); ++k) {
    out.s.push_back(sc.blocks[k].w_inv * u.s[k] * sc.blocks[k].w_inv);
  }
  return out;
}

// W^{-T}(s)
ConeVec apply_wt_inv(const Scaling& sc, const ConeVec& s) {
  ConeVec out;
  out.l = s.l.cwiseQuotient(sc.w);
  for (std::size_t k = 0; k < s.s.size(); ++k) {
    out.s.push_back(sc.blocks[k].g_inv * s.s[k] * sc.blocks[k].g_inv.transpose());
  }
  return out;
}

// Jordan product in the scaled space.
ConeVec jordan(const ConeVec& a, const ConeVec& b) {
  ConeVec out;
  out.l = a.l.cwiseProduct(b.l);
  for (std::size_t k = 0; k < a.s.size(); ++k) {
    out.s.push_back(0.5 * (a.s[k] * b.s[k] + b.s[k] * a.s[k]));
  }
  return out;
}

ConeVec lambda_vec(const Scaling& sc) {
  ConeVec out;
  out.l = sc.lambda_l;
  for (const BlockScaling& b : sc.blocks) out.s.push_back(b.lambda.asDiagonal());
  return out;
}

// Solves lambda o u = v for u (lambda diagonal in the scaled space).
ConeVec lambda_solve(const Scaling& sc, const ConeVec& v) {
  ConeVec out;
  out.l = v.l.cwiseQuotient(sc.lambda_l);
  for (std::size_t k = 0; k < v.s.size(); ++k) {
    const VectorXd& lam = sc.blocks[k].lambda;
    MatrixXd u = v.s[k];
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      for (Eigen::Index j = 0; j < u.cols(); ++j) u(i, j) *= 2.0 / (lam(i) + lam(j));
    }
    out.s.push_back(std::move(u));
  }
  return out;
}

// Largest alpha with lambda + alpha * d in the cone (infinity if unbounded).
double max_step(const Scaling& sc, const ConeVec& d) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.l.size(); ++i) {
    if (d.l(i) < 0.0) alpha = std::min(alpha, -sc.lambda_l(i) / d.l(i));
  }
  for (std::size_t k = 0; k < d.s.size(); ++k) {
    const VectorXd isq = sc.blocks[k].lambda.cwiseSqrt().cwiseInverse();
    const MatrixXd m = isq.asDiagonal() * d.s[k] * isq.asDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    const double emin = es.eigenvalues()(0);
    if (emin < 0.0) alpha = std::min(alpha, -1.0 / emin);
  }
  return alpha;
}

double scalar_step(double v, double dv) {
  return dv < 0.0 ? -v / dv : std::numeric_limits<double>::infinity();
}

class Ipm {
 public:
  Ipm(const HermitianSdp& problem, const IpmConfig& config) : prob_(problem), cfg_(config) {
    int offset = 0;
    for (int d : problem.block_dims) {
      blocks_.push_back(make_block(d, offset));
      offset += d * d;
    }
    n_ = offset;
    m_ = static_cast<int>(problem.rows.size());
    degree_ = m_;
    for (int d : problem.block_dims) degree_ += 2 * d;

    // Objective in minimization form, equilibrated.
    c_ = VectorXd::Zero(n_);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      c_.segment(blocks_[b].offset, blocks_[b].size()) = -coordinates(blocks_[b], problem.objective[b]);
    }
    c_scale_ = c_.norm() > 0.0 ? c_.norm() : 1.0;
    c_ /= c_scale_;

    a_ = MatrixXd::Zero(m_, n_);
    rhs_ = VectorXd::Zero(m_);
    row_scale_ = VectorXd::Ones(m_);
    for (int r = 0; r < m_; ++r) {
      const InequalityRow& row = problem.rows[static_cast<std::size_t>(r)];
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        a_.row(r).segment(blocks_[b].offset, blocks_[b].size()) =
            coordinates(blocks_[b], row.coeffs[b]).transpose();
      }
      const double nrm = a_.row(r).norm();
      if (nrm > 0.0) row_scale_(r) = 1.0 / nrm;
      a_.row(r) *= row_scale_(r);
      rhs_(r) = row.rhs * row_scale_(r);
    }
    h_ = zero_cone();
    h_.l = rhs_;
  }

  IpmResult run();

 private:
  ConeVec zero_cone() const {
    ConeVec v;
    v.l = VectorXd::Zero(m_);
    for (const Block& b : blocks_) v.s.push_back(MatrixXd::Zero(2 * b.dim, 2 * b.dim));
    return v;
  }

  // G x: rows then -embed(X_b).
  ConeVec apply_g(const VectorXd& x) const {
    ConeVec out = zero_cone();
    out.l = a_ * x;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const Block& blk = blocks_[b];
      for (int j = 0; j < blk.size(); ++j) {
        const double v = x(blk.offset + j);
        if (v == 0.0) continue;
        for (const Triplet& t : blk.embedded[static_cast<std::size_t>(j)]) out.s[b](t.row, t.col) -= v * t.val;
      }
    }
    return out;
  }

  VectorXd apply_gt(const ConeVec& z) const {
    VectorXd out = a_.transpose() * z.l;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const Block& blk = blocks_[b];
      for (int j = 0; j < blk.size(); ++j) {
        double acc = 0.0;
        for (const Triplet& t : blk.embedded[static_cast<std::size_t>(j)]) acc += t.val * z.s[b](t.row, t.col);
        out(blk.offset + j) -= acc;
      }
    }
    return out;
  }

  // G^T (W^T W)^{-1} G.
  MatrixXd reduced_matrix(const Scaling& sc) const {
    MatrixXd hm = a_.transpose() * sc.w.cwiseProduct(sc.w).cwiseInverse().asDiagonal() * a_;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const Block& blk = blocks_[b];
      const MatrixXd& wi = sc.blocks[b].w_inv;
      for (int j = 0; j < blk.size(); ++j) {
        for (int k = 0; k <= j; ++k) {
          double acc = 0.0;
          for (const Triplet& p : blk.embedded[static_cast<std::size_t>(j)]) {
            for (const Triplet& q : blk.embedded[static_cast<std::size_t>(k)]) {
              acc += p.val * q.val * wi(p.row, q.row) * wi(q.col, p.col);
            }
          }
          hm(blk.offset + j, blk.offset + k) += acc;
          if (k != j) hm(blk.offset + k, blk.offset + j) += acc;
        }
      }
    }
    return hm;
  }

  struct Direction {
    VectorXd dx;
    ConeVec ds;
    ConeVec dz;
    ConeVec ds_scaled;
    ConeVec dz_scaled;
    double dtau = 0.0;
    double dkappa = 0.0;
  };

  bool factor(const MatrixXd& hm) {
    llt_.compute(hm);
    if (llt_.info() == Eigen::Success) return true;
    const double reg = 1e-13 * std::max(1.0, hm.diagonal().cwiseAbs().maxCoeff());
    llt_.compute(hm + reg * MatrixXd::Identity(n_, n_));
    return llt_.info() == Eigen::Success;
  }

  // Solves [0 G^T; G -W^T W] [dx; dz] = [bx; bz].
  std::pair<VectorXd, ConeVec> solve_kkt(const Scaling& sc, const MatrixXd& hm, const VectorXd& bx,
                                         const ConeVec& bz) const {
    (void)hm;
    VectorXd dx = llt_.solve(bx + apply_gt(apply_wtw_inv(sc, bz)));
    ConeVec dz = apply_wtw_inv(sc, sub(apply_g(dx), bz));
    // Iterative refinement on the dual equation G^T dz = bx, which the
    // reduced system only satisfies up to its (large) condition number.
    for (int k = 0; k < 2; ++k) {
      const VectorXd err = bx - apply_gt(dz);
      if (!(err.norm() > 1e-15 * (1.0 + bx.norm()))) break;
      const VectorXd delta = llt_.solve(err);
      dx += delta;
      axpy(1.0, apply_wtw_inv(sc, apply_g(delta)), dz);
    }
    return {std::move(dx), std::move(dz)};
  }

  Direction direction(const Scaling& sc, const MatrixXd& hm, double eta, const ConeVec& psi,
                      double psi_tau) const;

  const HermitianSdp& prob_;
  IpmConfig cfg_;
  std::vector<Block> blocks_;
  int n_ = 0;
  int m_ = 0;
  int degree_ = 0;
  VectorXd c_;
  double c_scale_ = 1.0;
  MatrixXd a_;
  VectorXd rhs_;
  VectorXd row_scale_;
  ConeVec h_;
  Eigen::LLT<MatrixXd> llt_;

  // Iterate.
  VectorXd x_;
  ConeVec s_;
  ConeVec z_;
  double tau_ = 1.0;
  double kappa_ = 1.0;

  // Residuals of the current iterate.
  VectorXd r_x_;
  ConeVec r_z_;
  double r_tau_ = 0.0;
  VectorXd x2_;
  ConeVec z2_;
  double denom_base_ = 0.0;
};

Ipm::Direction Ipm::direction(const Scaling& sc, const MatrixXd& hm, double eta, const ConeVec& psi,
                              double psi_tau) const {
  Direction d;
  const ConeVec dhat = lambda_solve(sc, psi);
  const VectorXd bx = -eta * r_x_;
  ConeVec bz = r_z_;
  bz.l *= -eta;
  for (MatrixXd& m : bz.s) m *= -eta;
  axpy(-1.0, apply_wt(sc, dhat), bz);
  auto [x1, z1] = solve_kkt(sc, hm, bx, bz);
  d.dtau = (-eta * r_tau_ - psi_tau / tau_ - (c_.dot(x1) + dot(h_, z1))) /
           (denom_base_ - kappa_ / tau_);
  d.dx = x1 + d.dtau * x2_;
  d.dz = z1;
  axpy(d.dtau, z2_, d.dz);
  d.dz_scaled = apply_w(sc, d.dz);
  // ds from the linearized primal equation s + G x - tau h = (1 - eta) r_z
  // rather than from the scaled complementarity: near the boundary W is
  // badly conditioned and the latter route loses the primal residual.
  d.ds = r_z_;
  d.ds.l *= -eta;
  for (MatrixXd& m : d.ds.s) m *= -eta;
  axpy(-1.0, apply_g(d.dx), d.ds);
  axpy(d.dtau, h_, d.ds);
  d.ds_scaled = apply_wt_inv(sc, d.ds);
  d.dkappa = (psi_tau - kappa_ * d.dtau) / tau_;
  return d;
}

IpmResult Ipm::run() {
  IpmResult res;
  const double resx0 = std::max(1.0, c_.norm());
  const double resz0 = std::max(1.0, norm(h_));

  // Least-norm starting points pushed into the cone interior.
  {
    Scaling unit;
    unit.w = VectorXd::Ones(m_);
    unit.lambda_l = VectorXd::Ones(m_);
    for (const Block& b : blocks_) {
      BlockScaling bs;
      bs.g = MatrixXd::Identity(2 * b.dim, 2 * b.dim);
      bs.g_inv = bs.g;
      bs.w_inv = bs.g;
      bs.lambda = VectorXd::Ones(2 * b.dim);
      unit.blocks.push_back(std::move(bs));
    }
    const MatrixXd hm = reduced_matrix(unit);
    if (!factor(hm)) {
      res.status = IpmStatus::kNumericalFailure;
      return res;
    }
    x_ = llt_.solve(apply_gt(h_));
    s_ = sub(h_, apply_g(x_));
    const VectorXd u = llt_.solve(-c_);
    z_ = apply_g(u);
    for (ConeVec* v : {&s_, &z_}) {
      const double t = cone_violation(*v);
      if (t >= -1e-8 * std::max(1.0, norm(*v))) add_identity(1.0 + t, *v);
    }
  }
  tau_ = 1.0;
  kappa_ = 1.0;

  // Iterations since the relative gap last shrank by a tenth.
  double best_relgap = std::numeric_limits<double>::infinity();
  int flat = 0;

  for (int iter = 0;; ++iter) {
    res.iterations = iter;
    const ConeVec gx = apply_g(x_);
    const VectorXd gtz = apply_gt(z_);
    r_x_ = gtz + tau_ * c_;
    r_z_ = s_;
    axpy(1.0, gx, r_z_);
    axpy(-tau_, h_, r_z_);
    const double cx = c_.dot(x_);
    const double hz = dot(h_, z_);
    r_tau_ = kappa_ + cx + hz;
    const double gap = dot(s_, z_);
    const double mu = (gap + tau_ * kappa_) / (degree_ + 1);

    const double pcost = cx / tau_;
    const double dcost = -hz / tau_;
    const double gap_n = gap / (tau_ * tau_);
    const double pres = norm(r_z_) / tau_ / resz0;
    const double dres = r_x_.norm() / tau_ / resx0;
    const double scale = std::max(std::abs(pcost), std::abs(dcost));
    const double relgap = scale > 1e-300 ? gap_n / scale : std::numeric_limits<double>::infinity();
    res.primal_residual = pres;
    res.dual_residual = dres;
    res.gap = gap_n;
    res.relative_gap = relgap;

    if (pres <= cfg_.feastol && dres <= cfg_.feastol &&
        (gap_n <= cfg_.abstol || relgap <= cfg_.reltol)) {
      res.status = IpmStatus::kOptimal;
      break;
    }
    if (hz < 0.0) {
      const double pinf = gtz.norm() / resx0 / (-hz);
      if (pinf <= cfg_.feastol) {
        res.status = IpmStatus::kPrimalInfeasible;
        break;
      }
    }
    if (cx < 0.0) {
      ConeVec t = gx;
      axpy(1.0, s_, t);
      const double dinf = norm(t) / resz0 / (-cx);
      if (dinf <= cfg_.feastol) {
        res.status = IpmStatus::kDualInfeasible;
        break;
      }
    }
    // Stalls leave the iterate measured above untouched.
    const bool usable = pres <= cfg_.feastol && dres <= cfg_.feastol &&
                        (gap_n <= cfg_.reduced_abstol || relgap <= cfg_.reduced_reltol);
    auto stall = [&](IpmStatus status) {
      res.status = usable ? IpmStatus::kOptimal : status;
      res.reduced_accuracy = usable;
    };
    if (relgap < 0.9 * best_relgap) {
      best_relgap = relgap;
      flat = 0;
    } else {
      ++flat;
    }
    if (iter >= cfg_.max_iterations || (usable && flat >= kStallIterations)) {
      stall(IpmStatus::kMaxIterations);
      break;
    }

    const auto sc = nt_scaling(s_, z_);
    if (!sc) {
      stall(IpmStatus::kNumericalFailure);
      break;
    }
    const MatrixXd hm = reduced_matrix(*sc);
    if (!factor(hm)) {
      stall(IpmStatus::kNumericalFailure);
      break;
    }
    {
      auto [x2, z2] = solve_kkt(*sc, hm, -c_, h_);
      x2_ = std::move(x2);
      z2_ = std::move(z2);
      denom_base_ = c_.dot(x2_) + dot(h_, z2_);
    }

    const ConeVec lam = lambda_vec(*sc);
    const ConeVec lam_sq = jordan(lam, lam);

    // Affine scaling (predictor) direction.
    ConeVec psi = lam_sq;
    psi.l *= -1.0;
    for (MatrixXd& m : psi.s) m *= -1.0;
    const Direction aff = direction(*sc, hm, 1.0, psi, -tau_ * kappa_);
    double alpha_aff = std::min({1.0, max_step(*sc, aff.ds_scaled), max_step(*sc, aff.dz_scaled),
                                 scalar_step(tau_, aff.dtau), scalar_step(kappa_, aff.dkappa)});
    alpha_aff = std::max(0.0, alpha_aff);
    const double sigma = std::pow(1.0 - alpha_aff, 3.0);

    // Combined direction with second-order correction.
    psi = lam_sq;
    psi.l *= -1.0;
    for (MatrixXd& m : psi.s) m *= -1.0;
    add_identity(sigma * mu, psi);
    axpy(-1.0, jordan(aff.ds_scaled, aff.dz_scaled), psi);
    const double psi_tau = sigma * mu - tau_ * kappa_ - aff.dtau * aff.dkappa;
    const Direction dir = direction(*sc, hm, 1.0 - sigma, psi, psi_tau);

    const double alpha_max = std::min({max_step(*sc, dir.ds_scaled), max_step(*sc, dir.dz_scaled),
                                       scalar_step(tau_, dir.dtau), scalar_step(kappa_, dir.dkappa)});
    const double alpha = std::min(1.0, cfg_.step_fraction * alpha_max);
    if (!(alpha > 1e-14)) {
      stall(IpmStatus::kNumericalFailure);
      break;
    }

    x_ += alpha * dir.dx;
    axpy(alpha, dir.ds, s_);
    axpy(alpha, dir.dz, z_);
    tau_ += alpha * dir.dtau;
    kappa_ += alpha * dir.dkappa;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      project_structure(s_.s[b], blocks_[b].dim);
      project_structure(z_.s[b], blocks_[b].dim);
    }
  }

  // Recover solution in the caller's units.
  const std::size_t nb = blocks_.size();
  if (res.status == IpmStatus::kPrimalInfeasible) {
    const double hz = dot(h_, z_);
    res.farkas_ray = z_.l.cwiseProduct(row_scale_) / (-hz);
    return res;
  }
  const VectorXd x = x_ / tau_;
  res.X.reserve(nb);
  for (std::size_t b = 0; b < nb; ++b) res.X.push_back(hermitian_from(blocks_[b], x));
  res.y = z_.l.cwiseProduct(row_scale_) * (c_scale_ / tau_);
  res.primal_objective = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    res.primal_objective += linalg::trace_product(prob_.objective[b], res.X[b]);
  }
  res.dual_objective = 0.0;
  for (int r = 0; r < m_; ++r) res.dual_objective += res.y(r) * prob_.rows[static_cast<std::size_t>(r)].rhs;
  for (std::size_t b = 0; b < nb; ++b) {
    CMatrix zb = -prob_.objective[b];
    for (int r = 0; r < m_; ++r) zb += res.y(r) * prob_.rows[static_cast<std::size_t>(r)].coeffs[b];
    res.Z.push_back(0.5 * (zb + zb.adjoint()));
  }
  return res;
}

}  // namespace

IpmResult solve(const HermitianSdp& problem, const IpmConfig& config) {
  problem.validate();
  Ipm ipm(problem, config);
  return ipm.run();
}

}  // namespace secswipt::conic
