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

#include "barrier_sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Inverse of a Hermitian matrix if it is positive definite.
bool pd_inverse(const CMat& f, CMat* inv, double* logdet) {
  Eigen::LLT<CMat> llt(f);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::VectorXd d = llt.matrixL().toDenseMatrix().diagonal().real();
  if ((d.array() <= 0.0).any()) return false;
  if (logdet != nullptr) *logdet = 2.0 * d.array().log().sum();
  if (inv != nullptr) *inv = llt.solve(CMat::Identity(f.rows(), f.cols()));
  return true;
}

CMat block_at(const LmiProblem::Block& blk, const Eigen::VectorXd& x) {
  CMat f = blk.F0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x(j) != 0.0) f += x(j) * blk.F[static_cast<std::size_t>(j)];
  }
  return f;
}

// Barrier value, or +inf outside the domain.
double barrier_value(const LmiProblem& p, const Eigen::VectorXd& x, double t) {
  const Eigen::VectorXd s = p.b - p.A * x;
  if ((s.array() <= 0.0).any()) return kInf;
  double v = -t * p.c.dot(x) - s.array().log().sum();
  for (const auto& blk : p.blocks) {
    double ld = 0.0;
    if (!pd_inverse(block_at(blk, x), nullptr, &ld)) return kInf;
    v -= ld;
  }
  return v;
}

// Centering by damped Newton. Returns false if a step could not be taken.
// `stop` lets phase one exit as soon as its goal is met.
template <typename Stop>
bool center(const LmiProblem& p, Eigen::VectorXd& x, double t, Stop stop) {
  const auto n = x.size();
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd s = p.b - p.A * x;
    Eigen::VectorXd grad = -t * p.c;
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const Eigen::VectorXd a = p.A.row(i).transpose();
      grad += a / s(i);
      hess += a * a.transpose() / (s(i) * s(i));
    }
    for (const auto& blk : p.blocks) {
      CMat inv;
      if (!pd_inverse(block_at(blk, x), &inv, nullptr)) return false;
      std::vector<CMat> g(static_cast<std::size_t>(n));
      for (Eigen::Index j = 0; j < n; ++j) {
        g[static_cast<std::size_t>(j)] = inv * blk.F[static_cast<std::size_t>(j)];
        grad(j) -= g[static_cast<std::size_t>(j)].trace().real();
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
          const double v = (g[static_cast<std::size_t>(i)].cwiseProduct(
                                g[static_cast<std::size_t>(j)].transpose()))
                               .sum()
                               .real();
          hess(i, j) += v;
          if (j != i) hess(j, i) += v;
        }
      }
    }
    const Eigen::VectorXd dx = -hess.ldlt().solve(grad);
    const double dec2 = -grad.dot(dx);
    if (!(dec2 >= 0.0) || !dx.allFinite()) return false;
    if (dec2 / 2.0 <= 1e-12) return true;
    double step = 1.0;
    const double f0 = barrier_value(p, x, t);
    while (step > 1e-14) {
      const double f1 = barrier_value(p, x + step * dx, t);
      if (f1 <= f0 - 0.25 * step * dec2) break;
      step *= 0.5;
    }
    if (step <= 1e-14) return dec2 < 1e-6;
    x += step * dx;
    if (stop(x)) return true;
  }
  return true;
}

double degrees(const LmiProblem& p) {
  double nu = static_cast<double>(p.b.size());
  for (const auto& blk : p.blocks) nu += static_cast<double>(blk.F0.rows());
  return nu;
}

// Strictly feasible point via phase one: minimize u subject to the rows
// relaxed by u, each block shifted by u*I, and u >= -1.
bool phase_one(const LmiProblem& p, Eigen::VectorXd& x) {
  const auto n = p.c.size();
  LmiProblem q;
  q.c = Eigen::VectorXd::Zero(n + 1);
  q.c(n) = -1.0;
  q.A = Eigen::MatrixXd::Zero(p.A.rows() + 1, n + 1);
  q.A.topLeftCorner(p.A.rows(), n) = p.A;
  q.A.col(n).head(p.A.rows()).setConstant(-1.0);
  q.A(p.A.rows(), n) = -1.0;
  q.b.resize(p.b.size() + 1);
  q.b.head(p.b.size()) = p.b;
  q.b(p.b.size()) = 1.0;
  for (const auto& blk : p.blocks) {
    LmiProblem::Block nb;
    nb.F0 = blk.F0;
    nb.F = blk.F;
    nb.F.push_back(CMat::Identity(blk.F0.rows(), blk.F0.cols()));
    q.blocks.push_back(std::move(nb));
  }
  x = Eigen::VectorXd::Zero(n);
  double u = (p.A * x - p.b).maxCoeff();
  for (const auto& blk : p.blocks) {
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<CMat>(blk.F0).eigenvalues();
    u = std::max(u, -ev.minCoeff());
  }
  Eigen::VectorXd z(n + 1);
  z.head(n) = x;
  z(n) = std::max(u, 0.0) + 1.0;
  const double nu = degrees(q);
  auto done = [&](const Eigen::VectorXd& v) {
    return v(n) < 0.0 && std::isfinite(barrier_value(p, v.head(n), 1.0));
  };
  for (double t = 1.0; t < 1e12; t *= 8.0) {
    if (!center(q, z, t, done)) break;
    if (done(z)) {
      x = z.head(n);
      return true;
    }
    if (nu / t < 1e-9) break;
  }
  return false;
}

}  // namespace

BarrierResult barrier_solve(const LmiProblem& p, double gap_tol) {
  BarrierResult res;
  Eigen::VectorXd x;
  if (!phase_one(p, x)) return res;
  res.feasible = true;
  const double nu = degrees(p);
  auto never = [](const Eigen::VectorXd&) { return false; };
  double t = 1.0;
  for (; t < 1e16; t *= 6.0) {
    if (!center(p, x, t, never)) break;
    if (nu / t < gap_tol) {
      res.converged = true;
      break;
    }
  }
  res.x = x;
  res.objective = p.c.dot(x);
  res.gap_bound = nu / t;
  return res;
}

namespace {

// Real coordinates of an M x M Hermitian matrix: diagonal, then the real and
// imaginary parts of each strictly upper entry.
std::vector<CMat> hermitian_basis(int m) {
  std::vector<CMat> out;
  for (int i = 0; i < m; ++i) {
    CMat e = CMat::Zero(m, m);
    e(i, i) = 1.0;
    out.push_back(e);
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      CMat re = CMat::Zero(m, m);
      re(i, j) = 1.0;
      re(j, i) = 1.0;
      out.push_back(re);
      CMat im = CMat::Zero(m, m);
      im(i, j) = cd(0.0, 1.0);
      im(j, i) = cd(0.0, -1.0);
      out.push_back(im);
    }
  }
  return out;
}

double tr(const CMat& a, const CMat& b) { return (a.cwiseProduct(b.transpose())).sum().real(); }

}  // namespace

RelaxationResult solve_relaxation(const RelaxationData& d) {
  const int m = static_cast<int>(d.h.size());
  const int k = static_cast<int>(d.g.size());
  const std::vector<CMat> basis = hermitian_basis(m);
  const int nb = static_cast<int>(basis.size());
  const int n = 2 * nb;  // S coordinates then Q coordinates, in units of P_bar
  const double ge = (1.0 + d.gamma0) / std::exp2(d.r_bar) - 1.0;

  CMat W = CMat::Zero(m, m);
  for (int i = 0; i < k; ++i) W += d.mu[static_cast<std::size_t>(i)] * d.zeta * d.g[i] * d.g[i].adjoint();
  const CMat H = d.h * d.h.adjoint();

  // Row r in physical form: tr(Ls S) + tr(Lq Q) <= rhs.
  struct Row {
    CMat Ls, Lq;
    double rhs;
  };
  std::vector<Row> rows;
  rows.push_back({-H, d.gamma0 * H, -d.gamma0 * d.sigma0_sq});
  for (int i = 0; i < k; ++i) {
    const CMat G = d.g[i] * d.g[i].adjoint();
    rows.push_back({G, -ge * G, ge * d.sigma_sq[static_cast<std::size_t>(i)]});
  }
  rows.push_back({CMat::Identity(m, m), CMat::Identity(m, m), d.P_bar});

  LmiProblem p;
  p.c.resize(n);
  for (int j = 0; j < nb; ++j) {
    p.c(j) = tr(W, basis[j]) * d.P_bar;
    p.c(nb + j) = p.c(j);
  }
  const double cscale = p.c.cwiseAbs().maxCoeff();
  p.c /= cscale;
  p.A.resize(static_cast<Eigen::Index>(rows.size()), n);
  p.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    for (int j = 0; j < nb; ++j) {
      p.A(ri, j) = tr(rows[r].Ls, basis[j]) * d.P_bar;
      p.A(ri, nb + j) = tr(rows[r].Lq, basis[j]) * d.P_bar;
    }
    p.b(ri) = rows[r].rhs;
    const double s = p.A.row(ri).cwiseAbs().maxCoeff();
    p.A.row(ri) /= s;
    p.b(ri) /= s;
  }
  for (int blk = 0; blk < 2; ++blk) {
    LmiProblem::Block b;
    b.F0 = CMat::Zero(m, m);
    for (int j = 0; j < n; ++j) {
      b.F.push_back((j >= blk * nb && j < (blk + 1) * nb) ? basis[j - blk * nb] : CMat::Zero(m, m));
    }
    p.blocks.push_back(std::move(b));
  }

  const BarrierResult br = barrier_solve(p);
  RelaxationResult out;
  out.feasible = br.feasible;
  out.converged = br.converged;
  if (!br.feasible) return out;
  out.S = CMat::Zero(m, m);
  out.Q = CMat::Zero(m, m);
  for (int j = 0; j < nb; ++j) {
    out.S += br.x(j) * d.P_bar * basis[j];
    out.Q += br.x(nb + j) * d.P_bar * basis[j];
  }
  out.objective = tr(W, out.S) + tr(W, out.Q);
  return out;
}

}  // namespace oracle
