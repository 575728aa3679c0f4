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

#include "secswipt/system_model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "secswipt/errors.hpp"

namespace secswipt {

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

void require_vector(const CVector& v, int size, const std::string& what) {
  if (v.size() != size) {
    throw ValidationError(what + ": expected length " + std::to_string(size) + ", got " +
                          std::to_string(v.size()));
  }
  if (!linalg::all_finite(v)) throw ValidationError(what + ": non-finite entry");
}

void require_beams(const BeamformingSolution& beams, const SystemParams& params) {
  require_vector(beams.v0, params.M, "v0");
  for (std::size_t i = 0; i < beams.W.size(); ++i) {
    require_vector(beams.W[i], params.M, "w" + std::to_string(i + 1));
  }
}

// |v^H x|^2
double gain(const CVector& v, const CVector& x) { return std::norm(v.dot(x)); }

double interference(const std::vector<CVector>& beams, const CVector& x) {
  double acc = 0.0;
  for (const CVector& w : beams) acc += gain(w, x);
  return acc;
}

}  // namespace

void SystemParams::validate() const {
  if (M <= 1) throw ValidationError("M must exceed 1");
  if (K < 1) throw ValidationError("K must be at least 1");
  if (!finite_positive(P_bar)) throw ValidationError("P_bar must be positive");
  if (!finite_positive(sigma0_sq)) throw ValidationError("sigma0_sq must be positive");
  if (sigma_sq.size() != static_cast<std::size_t>(K)) {
    throw ValidationError("sigma_sq must have K entries");
  }
  for (double s : sigma_sq) {
    if (!finite_positive(s)) throw ValidationError("sigma_sq entries must be positive");
  }
  if (!(zeta > 0.0 && zeta < 1.0)) throw ValidationError("zeta must lie in (0, 1)");
  if (mu.size() != static_cast<std::size_t>(K)) throw ValidationError("mu must have K entries");
  for (double m : mu) {
    if (!(std::isfinite(m) && m >= 0.0)) throw ValidationError("mu entries must be >= 0");
  }
  if (!(std::isfinite(r_bar) && r_bar >= 0.0)) throw ValidationError("r_bar must be >= 0");
}

SystemParams SystemParams::with_rate(double r) const {
  SystemParams out = *this;
  out.r_bar = r;
  return out;
}

CMatrix ChannelSet::stacked_er() const {
  const Eigen::Index m = h.size();
  CMatrix out(static_cast<Eigen::Index>(g.size()), m);
  for (std::size_t k = 0; k < g.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = g[k].adjoint();
  }
  return out;
}

void ChannelSet::validate(const SystemParams& params) const {
  require_vector(h, params.M, "h");
  if (g.size() != static_cast<std::size_t>(params.K)) {
    throw ValidationError("expected " + std::to_string(params.K) + " ER channels, got " +
                          std::to_string(g.size()));
  }
  for (std::size_t k = 0; k < g.size(); ++k) require_vector(g[k], params.M, "g" + std::to_string(k + 1));
}

void ChannelGenSpec::validate(const SystemParams& params) const {
  if (!finite_positive(rho_h_sq)) {
    throw ValidationError("rho_h_sq must be positive (degenerate IR channel)");
  }
  if (rho_g_sq.size() != static_cast<std::size_t>(params.K)) {
    throw ValidationError("rho_g_sq must have K entries");
  }
  for (double r : rho_g_sq) {
    if (!finite_positive(r)) throw ValidationError("rho_g_sq entries must be positive");
    if (!(r > rho_h_sq)) {
      throw ValidationError("ER channels must be stronger on average than the IR channel");
    }
  }
}

std::string_view to_string(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::kOptimal:
      return "optimal";
    case SchemeTag::kSub1:
      return "sub1";
    case SchemeTag::kSub2:
      return "sub2";
    case SchemeTag::kTrivial:
      return "trivial";
  }
  return "unknown";
}

SchemeTag scheme_from_string(std::string_view name) {
  if (name == "optimal") return SchemeTag::kOptimal;
  if (name == "sub1") return SchemeTag::kSub1;
  if (name == "sub2") return SchemeTag::kSub2;
  if (name == "trivial") return SchemeTag::kTrivial;
  throw ValidationError("unknown scheme '" + std::string(name) + "'");
}

double BeamformingSolution::total_power() const {
  double p = v0.squaredNorm();
  for (const CVector& w : W) p += w.squaredNorm();
  return p;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  // splitmix64 finalizer over a mix of both words.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ChannelSet generate_channels(const SystemParams& params, const ChannelGenSpec& spec,
                             std::uint64_t trial) {
  params.validate();
  spec.validate(params);
  std::mt19937_64 rng(trial_seed(spec.seed, trial));
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](double variance) {
    CVector v(params.M);
    const double s = std::sqrt(variance / 2.0);
    for (int i = 0; i < params.M; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      v(i) = Complex(s * re, s * im);
    }
    return v;
  };
  ChannelSet ch;
  ch.h = draw(spec.rho_h_sq);
  ch.g.reserve(static_cast<std::size_t>(params.K));
  for (int k = 0; k < params.K; ++k) ch.g.push_back(draw(spec.rho_g_sq[static_cast<std::size_t>(k)]));
  return ch;
}

SinrPair compute_sinrs(const ChannelSet& ch, const BeamformingSolution& beams,
                       const SystemParams& params) {
  ch.validate(params);
  require_beams(beams, params);
  SinrPair out;
  out.ir = gain(beams.v0, ch.h) / (interference(beams.W, ch.h) + params.sigma0_sq);
  out.er.reserve(ch.g.size());
  for (std::size_t k = 0; k < ch.g.size(); ++k) {
    out.er.push_back(gain(beams.v0, ch.g[k]) /
                     (interference(beams.W, ch.g[k]) + params.sigma_sq[k]));
  }
  return out;
}

double compute_secrecy_rate(const ChannelSet& ch, const BeamformingSolution& beams,
                            const SystemParams& params) {
  const SinrPair sinr = compute_sinrs(ch, beams, params);
  double rate = std::numeric_limits<double>::infinity();
  for (double er : sinr.er) {
    rate = std::min(rate, std::log2(1.0 + sinr.ir) - std::log2(1.0 + er));
  }
  return rate;
}

EnergyReport compute_energy(const ChannelSet& ch, const BeamformingSolution& beams,
                            const SystemParams& params) {
  ch.validate(params);
  require_beams(beams, params);
  EnergyReport out;
  out.per_er.reserve(ch.g.size());
  for (std::size_t k = 0; k < ch.g.size(); ++k) {
    const double e = params.zeta * (gain(beams.v0, ch.g[k]) + interference(beams.W, ch.g[k]));
    out.per_er.push_back(e);
    out.weighted_sum += params.mu[k] * e;
  }
  return out;
}

Metrics evaluate_metrics(const ChannelSet& ch, const BeamformingSolution& beams,
                         const SystemParams& params) {
  Metrics m;
  SinrPair sinr = compute_sinrs(ch, beams, params);
  m.sinr_ir = sinr.ir;
  m.sinr_er = std::move(sinr.er);
  m.secrecy_rate = compute_secrecy_rate(ch, beams, params);
  EnergyReport energy = compute_energy(ch, beams, params);
  m.energy_per_er = std::move(energy.per_er);
  m.weighted_sum_energy = energy.weighted_sum;
  return m;
}

CMatrix energy_weight_matrix(const ChannelSet& ch, const SystemParams& params) {
  const Eigen::Index m = ch.h.size();
  CMatrix w = CMatrix::Zero(m, m);
  for (std::size_t k = 0; k < ch.g.size(); ++k) {
    w.noalias() += (params.mu[k] * params.zeta) * (ch.g[k] * ch.g[k].adjoint());
  }
  return w;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace secswipt
