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

// MISO downlink with one information receiver (IR) and K energy receivers
// (ERs). Powers are in Watts, harvested energy in Joules per unit slot.

#ifndef SECSWIPT_SYSTEM_MODEL_HPP_
#define SECSWIPT_SYSTEM_MODEL_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "secswipt/linalg.hpp"

namespace secswipt {

struct SystemParams {
  int M = 4;                     // transmit antennas, > 1
  int K = 3;                     // energy receivers, >= 1
  double P_bar = 1.0;            // sum-power budget [W]
  double sigma0_sq = 1e-8;       // IR noise power [W]
  std::vector<double> sigma_sq;  // ER noise powers [W], size K
  double zeta = 0.5;             // harvesting efficiency, in (0, 1)
  std::vector<double> mu;        // energy weights, size K, >= 0
  double r_bar = 0.0;            // secrecy-rate target [bit/s/Hz], >= 0

  // Throws ValidationError on any violated invariant.
  void validate() const;

  // Same parameters with a different secrecy target.
  SystemParams with_rate(double r) const;
};

// h is the IR channel, g[k] the channel of ER k (conjugated convention, so
// the received amplitude of beam v is v^H h).
struct ChannelSet {
  CVector h;
  std::vector<CVector> g;

  // G = [g_1, ..., g_K]^H, K x M.
  CMatrix stacked_er() const;
  void validate(const SystemParams& params) const;
};

struct ChannelGenSpec {
  double rho_h_sq = 1e-7;         // IR average channel power per entry
  std::vector<double> rho_g_sq;   // ER average channel powers, size K
  std::uint64_t seed = 1;

  void validate(const SystemParams& params) const;
};

enum class SchemeTag { kOptimal, kSub1, kSub2, kTrivial };

std::string_view to_string(SchemeTag tag);
// Accepts "optimal", "sub1", "sub2", "trivial"; throws ValidationError.
SchemeTag scheme_from_string(std::string_view name);

struct BeamformingSolution {
  CVector v0;              // information beam
  std::vector<CVector> W;  // energy beams w_1..w_d
  SchemeTag scheme = SchemeTag::kOptimal;

  int d() const { return static_cast<int>(W.size()); }
  double total_power() const;
};

struct Metrics {
  double sinr_ir = 0.0;
  std::vector<double> sinr_er;
  double secrecy_rate = 0.0;  // unclamped; may be negative
  std::vector<double> energy_per_er;
  double weighted_sum_energy = 0.0;
};

// Seed of the independent stream used by Monte Carlo trial `trial`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

// Draws h then g_1..g_K, entries in index order, each entry CSCG with the
// configured variance, from the stream trial_seed(spec.seed, trial).
ChannelSet generate_channels(const SystemParams& params, const ChannelGenSpec& spec,
                             std::uint64_t trial = 0);

struct SinrPair {
  double ir = 0.0;
  std::vector<double> er;
};

SinrPair compute_sinrs(const ChannelSet& ch, const BeamformingSolution& beams,
                       const SystemParams& params);

// min_k log2(1 + SINR_0) - log2(1 + SINR_k), not clamped at zero.
double compute_secrecy_rate(const ChannelSet& ch, const BeamformingSolution& beams,
                            const SystemParams& params);

struct EnergyReport {
  std::vector<double> per_er;
  double weighted_sum = 0.0;
};

EnergyReport compute_energy(const ChannelSet& ch, const BeamformingSolution& beams,
                            const SystemParams& params);

Metrics evaluate_metrics(const ChannelSet& ch, const BeamformingSolution& beams,
                         const SystemParams& params);

// Sum_k mu_k zeta g_k g_k^H.
CMatrix energy_weight_matrix(const ChannelSet& ch, const SystemParams& params);

// Unit conversions used at the configuration boundary.
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace secswipt

#endif  // SECSWIPT_SYSTEM_MODEL_HPP_
