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

#include "secswipt/sdr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "secswipt/errors.hpp"

namespace secswipt {

namespace {

constexpr double kGammaClamp = 1e-13;
// gamma_e at or below this is treated as zero leakage and solved on the face.
constexpr double kFaceGamma = 1e-12;

// Rows in solver order: IR, ER_1..ER_K, power.
int num_rows(const SdrInstance& inst) { return inst.K + 2; }

double row_scale(const SdrInstance& inst, int r) {
  if (r == 0) return 1.0 / inst.sigma0_sq;
  if (r <= inst.K) return 1.0 / inst.sigma_sq[static_cast<std::size_t>(r - 1)];
  return 1.0 / inst.P_bar;
}

// Physical slack c_r - <A_r, (S, Q)> of each row.
Eigen::VectorXd physical_slacks(const SdrInstance& inst, const CMatrix& S, const CMatrix& Q) {
  Eigen::VectorXd out(num_rows(inst));
  out(0) = linalg::trace_product(inst.H, S) -
           inst.gamma0 * (linalg::trace_product(inst.H, Q) + inst.sigma0_sq);
  for (int k = 0; k < inst.K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    out(k + 1) = inst.gamma_e * (linalg::trace_product(inst.G[ku], Q) + inst.sigma_sq[ku]) -
                 linalg::trace_product(inst.G[ku], S);
  }
  out(inst.K + 1) = inst.P_bar - S.trace().real() - Q.trace().real();
  return out;
}

double min_eig(const CMatrix& a) { return linalg::hermitian_evd(a).eigenvalues.minCoeff(); }
double max_eig(const CMatrix& a) { return linalg::hermitian_evd(a).eigenvalues.maxCoeff(); }

struct Duals {
  double lambda = 0.0;
  std::vector<double> beta;
  double theta = 0.0;
};

CMatrix dual_matrix_s(const SdrInstance& inst, const Duals& d) {
  CMatrix a = inst.obj_weights + d.lambda * inst.H;
  for (int k = 0; k < inst.K; ++k) a -= d.beta[static_cast<std::size_t>(k)] * inst.G[static_cast<std::size_t>(k)];
  a.diagonal().array() -= d.theta;
  return a;
}

CMatrix dual_matrix_q(const SdrInstance& inst, const Duals& d) {
  CMatrix b = inst.obj_weights - (d.lambda * inst.gamma0) * inst.H;
  for (int k = 0; k < inst.K; ++k) {
    b += (d.beta[static_cast<std::size_t>(k)] * inst.gamma_e) * inst.G[static_cast<std::size_t>(k)];
  }
  b.diagonal().array() -= d.theta;
  return b;
}

double dual_value(const SdrInstance& inst, const Duals& d) {
  double v = -d.lambda * inst.gamma0 * inst.sigma0_sq + d.theta * inst.P_bar;
  for (int k = 0; k < inst.K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    v += d.beta[ku] * inst.gamma_e * inst.sigma_sq[ku];
  }
  return v;
}

KktResiduals residuals(const SdrInstance& inst, const CMatrix& S, const CMatrix& Q,
                       const Duals& d, const CMatrix& face = {}) {
  KktResiduals r;
  r.primal_infeasibility = sdr_constraint_violation(inst, S, Q);
  const CMatrix A = dual_matrix_s(inst, d);
  const CMatrix B = dual_matrix_q(inst, d);
  const double a_top = face.size() == 0 ? max_eig(A) : max_eig(face.adjoint() * A * face);
  double dinf = std::max({0.0, a_top, max_eig(B), -d.lambda, -d.theta});
  for (double b : d.beta) dinf = std::max(dinf, -b);
  r.dual_infeasibility = dinf;
  r.complementarity_s = std::abs(linalg::trace_product(A, S));
  r.complementarity_q = std::abs(linalg::trace_product(B, Q));
  const Eigen::VectorXd slack = physical_slacks(inst, S, Q);
  double rows = d.lambda * slack(0) + d.theta * slack(inst.K + 1);
  for (int k = 0; k < inst.K; ++k) rows += d.beta[static_cast<std::size_t>(k)] * slack(k + 1);
  r.complementarity_rows = std::abs(rows);
  r.objective_gap = std::abs(sdr_objective(inst, S, Q) - dual_value(inst, d));
  return r;
}

double comp_measure(const KktResiduals& r) {
  return r.complementarity_s + r.complementarity_q + r.complementarity_rows;
}

// Re-solves A(y) S = 0, B(y) Q = 0 in the least-squares sense for the duals
// of the active rows, the others pinned at zero.
bool refine_duals(const SdrInstance& inst, const CMatrix& S, const CMatrix& Q,
                  const std::vector<bool>& active, Duals& d) {
  const int m = num_rows(inst);
  std::vector<int> cols;
  for (int r = 0; r < m; ++r) {
    if (active[static_cast<std::size_t>(r)]) cols.push_back(r);
  }
  if (cols.empty()) return false;
  const double p = inst.P_bar;
  const CMatrix Sn = S / p;
  const CMatrix Qn = Q / p;
  const Eigen::Index n = inst.M;

  // d(A S)/d y_r and d(B Q)/d y_r, then the constant parts.
  auto derivative = [&](int r, bool for_s) -> CMatrix {
    if (r == 0) return for_s ? CMatrix(inst.H * Sn) : CMatrix(-inst.gamma0 * inst.H * Qn);
    if (r <= inst.K) {
      const CMatrix& Gk = inst.G[static_cast<std::size_t>(r - 1)];
      return for_s ? CMatrix(-Gk * Sn) : CMatrix(inst.gamma_e * Gk * Qn);
    }
    return for_s ? CMatrix(-Sn) : CMatrix(-Qn);
  };
  auto stack = [&](const CMatrix& a, const CMatrix& b) {
    Eigen::VectorXd v(4 * n * n);
    Eigen::Index idx = 0;
    for (const CMatrix* mat : {&a, &b}) {
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
          v(idx++) = (*mat)(i, j).real();
          v(idx++) = (*mat)(i, j).imag();
        }
      }
    }
    return v;
  };

  Eigen::MatrixXd J(4 * n * n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    J.col(static_cast<Eigen::Index>(c)) = stack(derivative(cols[c], true), derivative(cols[c], false));
  }
  const Eigen::VectorXd rhs = -stack(inst.obj_weights * Sn, inst.obj_weights * Qn);
  Eigen::VectorXd colnorm = J.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < colnorm.size(); ++c) {
    if (!(colnorm(c) > 0.0)) return false;
    J.col(c) /= colnorm(c);
  }
  const Eigen::VectorXd sol = J.completeOrthogonalDecomposition().solve(rhs).cwiseQuotient(colnorm);
  if (!sol.allFinite()) return false;

  Duals out;
  out.beta.assign(static_cast<std::size_t>(inst.K), 0.0);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const double v = sol(static_cast<Eigen::Index>(c));
    if (v < 0.0) return false;
    const int r = cols[c];
    if (r == 0) {
      out.lambda = v;
    } else if (r <= inst.K) {
      out.beta[static_cast<std::size_t>(r - 1)] = v;
    } else {
      out.theta = v;
    }
  }
  d = std::move(out);
  return true;
}

// Orthonormal basis of the common null space of the eavesdropper channels
// when gamma_e is zero; nullopt otherwise.
std::optional<CMatrix> zero_leakage_face(const SdrInstance& inst) {
  if (inst.gamma_e > kFaceGamma || inst.K == 0) return std::nullopt;
  CMatrix stacked(inst.K, inst.M);
  for (int k = 0; k < inst.K; ++k) stacked.row(k) = inst.g[static_cast<std::size_t>(k)].adjoint();
  return linalg::nullspace(stacked).basis;
}

// The relaxation restricted to S = F X F^H: the ER rows hold identically
// and drop out. Rows: IR, power.
conic::HermitianSdp face_conic(const SdrInstance& inst, const CMatrix& F) {
  const double p = inst.P_bar;
  const Eigen::Index nf = F.cols();
  const CMatrix Hn = (p / inst.sigma0_sq) * inst.H;
  conic::HermitianSdp sdp;
  sdp.block_dims = {static_cast<int>(nf), inst.M};
  sdp.objective = {p * F.adjoint() * inst.obj_weights * F, p * inst.obj_weights};
  sdp.rows.push_back({{CMatrix(-F.adjoint() * Hn * F), inst.gamma0 * Hn}, -inst.gamma0});
  sdp.rows.push_back({{CMatrix::Identity(nf, nf), CMatrix::Identity(inst.M, inst.M)}, 1.0});
  return sdp;
}

SdrSolution solve_on_face(const SdrInstance& inst, const CMatrix& F, const SolverConfig& cfg,
                          SdrSolution out) {
  const int power = inst.K + 1;
  if (F.cols() == 0) {
    // S = 0 is forced, so the IR row cannot hold. The G_k span C^M, so
    // equal beta_k can dominate lambda H on the S block with theta = 0.
    out.status = SdrStatus::kInfeasible;
    const double lam = 1.0 / (inst.gamma0 * inst.sigma0_sq);
    CMatrix g_sum = CMatrix::Zero(inst.M, inst.M);
    for (const CMatrix& Gk : inst.G) g_sum += Gk;
    const double beta = lam * inst.h.squaredNorm() / min_eig(g_sum);
    out.infeasibility_ray.assign(static_cast<std::size_t>(inst.K + 2), beta);
    out.infeasibility_ray.front() = lam;
    out.infeasibility_ray.back() = 0.0;
    return out;
  }
  out.face = F;
  const conic::IpmResult res = conic::solve(face_conic(inst, F), cfg.ipm);
  out.iterations = res.iterations;
  if (res.status == conic::IpmStatus::kPrimalInfeasible) {
    out.status = SdrStatus::kInfeasible;
    out.infeasibility_ray.assign(static_cast<std::size_t>(inst.K + 2), 0.0);
    out.infeasibility_ray.front() = res.farkas_ray(0) * row_scale(inst, 0);
    out.infeasibility_ray.back() = res.farkas_ray(1) * row_scale(inst, power);
    return out;
  }
  if (res.X.size() == 2) {
    out.S = inst.P_bar * F * res.X[0] * F.adjoint();
    out.S = 0.5 * (out.S + out.S.adjoint());
    out.Q = inst.P_bar * res.X[1];
  }
  Duals d;
  d.beta.assign(static_cast<std::size_t>(inst.K), 0.0);
  if (res.y.size() == 2) {
    d.lambda = res.y(0) * row_scale(inst, 0);
    d.theta = res.y(1) * row_scale(inst, power);
  }
  out.objective = sdr_objective(inst, out.S, out.Q);
  out.status = res.status == conic::IpmStatus::kOptimal ? SdrStatus::kOptimal
                                                         : SdrStatus::kNumericalFailure;
  out.lambda = d.lambda;
  out.beta = d.beta;
  out.theta = d.theta;
  out.kkt = residuals(inst, out.S, out.Q, d, F);
  if (out.status == SdrStatus::kOptimal && inst.nontrivial) {
    out.dual_floor_violated = out.lambda < cfg.dual_floor || out.theta < cfg.dual_floor;
  }
  return out;
}

void write_matrix(const CMatrix& a, std::ostream& out) {
  char buf[64];
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g", a(i, j).real(), a(i, j).imag());
      out << (j == 0 ? "" : " ") << buf;
    }
    out << '\n';
  }
}

}  // namespace

std::string_view to_string(SdrStatus status) {
  switch (status) {
    case SdrStatus::kOptimal:
      return "optimal";
    case SdrStatus::kInfeasible:
      return "infeasible";
    case SdrStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

EnergyDirection max_energy_direction(const SystemParams& params, const ChannelSet& ch) {
  params.validate();
  ch.validate(params);
  const linalg::HermitianEvd evd = linalg::hermitian_evd(energy_weight_matrix(ch, params));
  EnergyDirection out;
  out.psi = evd.max_eigenvalue();
  out.eta = evd.top_eigenvector();
  const double ir = std::log2(1.0 + params.P_bar * std::norm(out.eta.dot(ch.h)) / params.sigma0_sq);
  out.R_bar = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ch.g.size(); ++k) {
    const double er = std::log2(1.0 + params.P_bar * std::norm(out.eta.dot(ch.g[k])) / params.sigma_sq[k]);
    out.R_bar = std::min(out.R_bar, ir - er);
  }
  return out;
}

SdrInstance build_instance(const SystemParams& params, const ChannelSet& ch, double gamma0) {
  // A zero budget is a legal (infeasible) instance; everything else must
  // pass the usual validation.
  SystemParams checked = params;
  if (params.P_bar == 0.0) checked.P_bar = 1.0;
  checked.validate();
  ch.validate(checked);
  const double lower = std::exp2(params.r_bar) - 1.0;
  if (!std::isfinite(gamma0) || !(gamma0 > 0.0)) {
    throw DomainError("target IR SINR must be positive and finite");
  }
  if (gamma0 < lower * (1.0 - 1e-12)) {
    throw DomainError("target IR SINR " + std::to_string(gamma0) + " below 2^r - 1 = " +
                      std::to_string(lower));
  }
  SdrInstance inst;
  inst.M = params.M;
  inst.K = params.K;
  inst.h = ch.h;
  inst.g = ch.g;
  inst.H = ch.h * ch.h.adjoint();
  inst.G.reserve(ch.g.size());
  for (const CVector& gk : ch.g) inst.G.push_back(gk * gk.adjoint());
  inst.obj_weights = energy_weight_matrix(ch, params);
  inst.gamma0 = gamma0;
  inst.gamma_e = (1.0 + gamma0) / std::exp2(params.r_bar) - 1.0;
  if (inst.gamma_e < 0.0 && inst.gamma_e > -kGammaClamp * (1.0 + gamma0)) inst.gamma_e = 0.0;
  inst.gamma_e = std::max(inst.gamma_e, 0.0);
  inst.r_bar = params.r_bar;
  inst.sigma0_sq = params.sigma0_sq;
  inst.sigma_sq = params.sigma_sq;
  inst.P_bar = params.P_bar;
  if (params.P_bar > 0.0) {
    inst.nontrivial = params.r_bar > std::max(0.0, max_energy_direction(params, ch).R_bar);
  }
  return inst;
}

conic::HermitianSdp to_conic(const SdrInstance& inst) {
  if (!(inst.P_bar > 0.0)) throw ValidationError("conic form needs a positive power budget");
  const Eigen::Index n = inst.M;
  const double p = inst.P_bar;
  const CMatrix I = CMatrix::Identity(n, n);
  conic::HermitianSdp sdp;
  sdp.block_dims = {inst.M, inst.M};
  sdp.objective = {p * inst.obj_weights, p * inst.obj_weights};

  const CMatrix Hn = (p / inst.sigma0_sq) * inst.H;
  sdp.rows.push_back({{-Hn, inst.gamma0 * Hn}, -inst.gamma0});
  for (int k = 0; k < inst.K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const CMatrix Gn = (p / inst.sigma_sq[ku]) * inst.G[ku];
    sdp.rows.push_back({{Gn, -inst.gamma_e * Gn}, inst.gamma_e});
  }
  sdp.rows.push_back({{I, I}, 1.0});
  return sdp;
}

double sdr_objective(const SdrInstance& inst, const CMatrix& S, const CMatrix& Q) {
  return linalg::trace_product(inst.obj_weights, S) + linalg::trace_product(inst.obj_weights, Q);
}

double sdr_constraint_violation(const SdrInstance& inst, const CMatrix& S, const CMatrix& Q) {
  // Each row is divided by P_bar times the size of its largest coefficient
  // matrix, so a violation reads as a fraction of the budget.
  const Eigen::VectorXd slack = physical_slacks(inst, S, Q);
  const double scale = inst.P_bar > 0.0 ? inst.P_bar : 1.0;
  double v = std::max(0.0, -slack(0)) / (scale * inst.H.norm() * std::max(1.0, inst.gamma0));
  for (int k = 0; k < inst.K; ++k) {
    const double gn = inst.G[static_cast<std::size_t>(k)].norm() * std::max(1.0, inst.gamma_e);
    v = std::max(v, std::max(0.0, -slack(k + 1)) / (scale * gn));
  }
  v = std::max(v, std::max(0.0, -slack(inst.K + 1)) / scale);
  v = std::max(v, -min_eig(S) / scale);
  v = std::max(v, -min_eig(Q) / scale);
  return v;
}

SdrSolution solve_sdr(const SdrInstance& inst, const SolverConfig& cfg) {
  SdrSolution out;
  out.beta.assign(static_cast<std::size_t>(inst.K), 0.0);
  const Eigen::Index n = inst.M;
  out.S = CMatrix::Zero(n, n);
  out.Q = CMatrix::Zero(n, n);

  if (!(inst.P_bar > 0.0)) {
    // No power: the IR row alone is unmeetable. Ray: lambda scaled so the
    // certificate value is -1, theta large enough to keep the S block PSD.
    out.status = SdrStatus::kInfeasible;
    const double lam = 1.0 / (inst.gamma0 * inst.sigma0_sq);
    out.infeasibility_ray.assign(static_cast<std::size_t>(inst.K + 2), 0.0);
    out.infeasibility_ray.front() = lam;
    out.infeasibility_ray.back() = lam * inst.h.squaredNorm();
    return out;
  }
  if (const std::optional<CMatrix> face = zero_leakage_face(inst)) {
    return solve_on_face(inst, *face, cfg, std::move(out));
  }

  const conic::IpmResult res = conic::solve(to_conic(inst), cfg.ipm);
  out.iterations = res.iterations;

  if (res.status == conic::IpmStatus::kPrimalInfeasible) {
    out.status = SdrStatus::kInfeasible;
    out.infeasibility_ray.resize(static_cast<std::size_t>(inst.K + 2));
    for (int r = 0; r < num_rows(inst); ++r) {
      out.infeasibility_ray[static_cast<std::size_t>(r)] = res.farkas_ray(r) * row_scale(inst, r);
    }
    return out;
  }
  if (res.X.size() == 2) {
    out.S = inst.P_bar * res.X[0];
    out.Q = inst.P_bar * res.X[1];
  }
  Duals d;
  d.beta.assign(static_cast<std::size_t>(inst.K), 0.0);
  if (res.y.size() == num_rows(inst)) {
    d.lambda = res.y(0) * row_scale(inst, 0);
    for (int k = 0; k < inst.K; ++k) d.beta[static_cast<std::size_t>(k)] = res.y(k + 1) * row_scale(inst, k + 1);
    d.theta = res.y(inst.K + 1) * row_scale(inst, inst.K + 1);
  }
  out.objective = sdr_objective(inst, out.S, out.Q);

  if (res.status != conic::IpmStatus::kOptimal) {
    out.status = SdrStatus::kNumericalFailure;
    out.lambda = d.lambda;
    out.beta = d.beta;
    out.theta = d.theta;
    out.kkt = residuals(inst, out.S, out.Q, d);
    return out;
  }
  out.status = SdrStatus::kOptimal;
  out.kkt = residuals(inst, out.S, out.Q, d);

  if (cfg.refine_duals) {
    // A row is active when its (solver-scaled) slack is smaller than its
    // multiplier; complementary pairs have exactly one of the two near zero.
    const Eigen::VectorXd slack = physical_slacks(inst, out.S, out.Q);
    std::vector<bool> active(static_cast<std::size_t>(num_rows(inst)));
    for (int r = 0; r < num_rows(inst); ++r) {
      const double s = std::max(0.0, slack(r) * row_scale(inst, r));
      active[static_cast<std::size_t>(r)] = res.y(r) > s;
    }
    Duals trial = d;
    if (refine_duals(inst, out.S, out.Q, active, trial)) {
      const KktResiduals r = residuals(inst, out.S, out.Q, trial);
      const double df_cap = std::max(out.kkt.dual_infeasibility, 1e-12 * inst.obj_weights.norm());
      if (r.dual_infeasibility <= df_cap && comp_measure(r) < comp_measure(out.kkt)) {
        d = std::move(trial);
        out.kkt = r;
        out.duals_refined = true;
      }
    }
  }
  out.lambda = d.lambda;
  out.beta = d.beta;
  out.theta = d.theta;
  if (inst.nontrivial) {
    out.dual_floor_violated = out.lambda < cfg.dual_floor || out.theta < cfg.dual_floor;
  }
  return out;
}

KktMatrices kkt_matrices(const SdrInstance& inst, const SdrSolution& sol) {
  if (sol.status != SdrStatus::kOptimal) {
    throw StateError("KKT matrices need an optimal relaxation, got " + std::string(to_string(sol.status)));
  }
  Duals d{sol.lambda, sol.beta, sol.theta};
  KktMatrices out;
  out.A = dual_matrix_s(inst, d);
  out.B = dual_matrix_q(inst, d);
  out.D_star = inst.obj_weights - (d.lambda * inst.gamma0) * inst.H;
  for (int k = 0; k < inst.K; ++k) out.D_star -= d.beta[static_cast<std::size_t>(k)] * inst.G[static_cast<std::size_t>(k)];
  out.D_star.diagonal().array() -= d.theta;
  return out;
}

double ir_capacity(const SystemParams& params, const ChannelSet& ch) {
  return std::log2(1.0 + params.P_bar * ch.h.squaredNorm() / params.sigma0_sq);
}

std::vector<double> gamma_search_grid(const SystemParams& params, const ChannelSet& ch, double r,
                                      int points) {
  if (points < 2) throw ValidationError("search grid needs at least 2 points");
  const double upper = params.P_bar * ch.h.squaredNorm() / params.sigma0_sq;
  // At r = 0 the lower end 2^r - 1 vanishes; start a fixed number of decades
  // below the upper end instead.
  const double lower = r > 0.0 ? std::exp2(r) - 1.0 : upper * 1e-9;
  if (!(lower < upper)) return {};
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double span = std::log(upper / lower);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = lower * std::exp(span * i / (points - 1));
  }
  grid.front() = lower;
  grid.back() = upper;
  return grid;
}

double min_power(const SdrInstance& inst, const SolverConfig& cfg) {
  const std::optional<CMatrix> face = zero_leakage_face(inst);
  if (face && face->cols() == 0) return std::numeric_limits<double>::infinity();
  conic::HermitianSdp sdp = face ? face_conic(inst, *face) : to_conic(inst);
  sdp.rows.pop_back();
  sdp.objective = {-CMatrix::Identity(sdp.block_dims[0], sdp.block_dims[0]),
                   -CMatrix::Identity(inst.M, inst.M)};
  const conic::IpmResult res = conic::solve(sdp, cfg.ipm);
  if (res.status != conic::IpmStatus::kOptimal) return std::numeric_limits<double>::infinity();
  return -res.primal_objective * inst.P_bar;
}

GammaRescue rescue_gamma(const SystemParams& params, const ChannelSet& ch,
                         const std::vector<double>& grid, const SolverConfig& cfg) {
  GammaRescue out;
  if (grid.empty()) return out;
  auto power_at = [&](double g) {
    ++out.sdp_solves;
    return min_power(build_instance(params, ch, g), cfg);
  };
  auto try_gamma = [&](double g) {
    ++out.sdp_solves;
    return solve_sdr(build_instance(params, ch, g), cfg).status == SdrStatus::kOptimal;
  };

  std::size_t best = 0;
  double best_p = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double pw = power_at(grid[i]);
    if (pw < best_p) {
      best_p = pw;
      best = i;
    }
  }
  if (!std::isfinite(best_p)) return out;

  // Golden section on log(gamma0) between the neighbours of the best point.
  const std::size_t last = grid.size() - 1;
  double lo = std::log(grid[best == 0 ? 0 : best - 1]);
  double hi = std::log(grid[std::min(best + 1, last)]);
  double arg = grid[best];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = power_at(std::exp(x1));
  double f2 = power_at(std::exp(x2));
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    if (f1 <= f2) {
      if (f1 < best_p) {
        best_p = f1;
        arg = std::exp(x1);
      }
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = power_at(std::exp(x1));
    } else {
      if (f2 < best_p) {
        best_p = f2;
        arg = std::exp(x2);
      }
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = power_at(std::exp(x2));
    }
    // Stop once the budget is met with some margin.
    if (best_p < params.P_bar * (1.0 - 1e-6)) break;
  }
  if (best_p <= params.P_bar && try_gamma(arg)) out.gamma0 = arg;
  return out;
}

FeasibilityReport check_feasibility(const SystemParams& params, const ChannelSet& ch,
                                    const FeasibilityConfig& cfg) {
  params.validate();
  ch.validate(params);
  if (!(cfg.rate_tol > 0.0)) throw ValidationError("rate_tol must be positive");
  FeasibilityReport rep;
  rep.r_capacity = ir_capacity(params, ch);

  std::size_t hint = 0;
  auto achievable = [&](double r) {
    const SystemParams p = params.with_rate(r);
    const std::vector<double> grid = gamma_search_grid(p, ch, r, cfg.grid_points);
    if (grid.empty()) return false;
    int failures = 0;
    // Start from the last successful grid index; neighbours of a feasible
    // gamma0 tend to stay feasible as r moves a little.
    for (std::size_t step = 0; step < grid.size(); ++step) {
      const std::size_t i = (hint + step) % grid.size();
      const SdrSolution sol = solve_sdr(build_instance(p, ch, grid[i]), cfg.solver);
      ++rep.sdp_solves;
      if (sol.status == SdrStatus::kOptimal) {
        hint = i;
        return true;
      }
      if (sol.status == SdrStatus::kNumericalFailure) ++failures;
    }
    rep.numerical_failures += failures;
    if (failures == static_cast<int>(grid.size())) {
      throw NumericalError("feasibility probe at r = " + std::to_string(r) +
                               ": every relaxation failed numerically",
                           failures);
    }
    const GammaRescue rescue = rescue_gamma(p, ch, grid, cfg.solver);
    rep.sdp_solves += rescue.sdp_solves;
    return rescue.gamma0.has_value();
  };

  double lo = std::max(0.0, max_energy_direction(params, ch).R_bar);
  double hi = rep.r_capacity;
  if (lo >= hi) {
    rep.r_max = lo;
  } else {
    while (hi - lo > cfg.rate_tol) {
      const double mid = 0.5 * (lo + hi);
      if (achievable(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    rep.r_max = lo;
  }
  rep.feasible = params.r_bar <= rep.r_max;
  return rep;
}

void write_conic_listing(const conic::HermitianSdp& problem, std::ostream& out) {
  problem.validate();
  out << "# hermitian-sdp listing\n";
  out << "# maximize sum_b Re Tr(C_b X_b) s.t. sum_b Re Tr(A_rb X_b) <= c_r, X_b PSD\n";
  out << "# matrices are dense, row-major, each entry written as \"re im\"\n";
  out << "blocks " << problem.block_dims.size() << '\n';
  out << "dims";
  for (int d : problem.block_dims) out << ' ' << d;
  out << '\n';
  out << "rows " << problem.rows.size() << '\n';
  out << "objective\n";
  for (std::size_t b = 0; b < problem.objective.size(); ++b) {
    out << "block " << b << '\n';
    write_matrix(problem.objective[b], out);
  }
  char buf[64];
  for (std::size_t r = 0; r < problem.rows.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", problem.rows[r].rhs);
    out << "row " << r << " rhs " << buf << '\n';
    for (std::size_t b = 0; b < problem.rows[r].coeffs.size(); ++b) {
      out << "block " << b << '\n';
      write_matrix(problem.rows[r].coeffs[b], out);
    }
  }
  out << "end\n";
}

}  // namespace secswipt
