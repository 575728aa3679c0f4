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

// Closed-form low-complexity designs. Both send a single energy beam in the
// null space of the IR channel; they differ in where the information beam
// points:
//   zero-forcing  - inside the null space of every ER channel (no leakage),
//                   with the least power that meets the secrecy target;
//   matched       - along h, with the power split chosen on the feasible set.

#ifndef SECSWIPT_SUBOPTIMAL_HPP_
#define SECSWIPT_SUBOPTIMAL_HPP_

#include "secswipt/system_model.hpp"

namespace secswipt {

// Best single energy beam confined to the null space of h.
struct EnergyStage {
  CMatrix X_tilde;       // M x (M-1) orthonormal basis of null(h^H)
  double psi_tilde = 0.0;
  CVector eta_tilde;     // unit (M-1)-vector
  CVector direction;     // X_tilde * eta_tilde, unit M-vector
};

// Throws DegenerateChannel when h = 0.
EnergyStage null_h_energy_stage(const SystemParams& params, const ChannelSet& ch);

struct SchemeIDesign {
  CMatrix V_tilde;       // M x (M-K) orthonormal basis of null(G)
  double P0_tilde = 0.0;
  CVector v0;
  CVector w1;
  double E = 0.0;        // psi_tilde * (P_bar - P0_tilde)
  EnergyStage energy;

  BeamformingSolution beams() const;
};

// Throws SchemeInapplicable (K >= M), DegenerateChannel (h orthogonal to
// null(G)) or SchemeInfeasible (required information power above P_bar).
SchemeIDesign scheme1(const SystemParams& params, const ChannelSet& ch);

enum class PowerBranch { kMaxPower, kMinPower };

struct Scheme2Config {
  int grid_points = 10000;
  double boundary_tol = 1e-10;  // bisection width relative to P_bar
};

struct SchemeIIDesign {
  double P0_hat = 0.0;
  double P0_hat_min = 0.0;
  double P0_hat_max = 0.0;
  PowerBranch branch = PowerBranch::kMinPower;
  bool disconnected = false;  // feasible grid points do not form one run
  int feasible_grid_points = 0;
  CVector v0;
  CVector w1;
  double E = 0.0;
  EnergyStage energy;

  BeamformingSolution beams() const;
};

// Secrecy rate of the matched design as a function of the information power.
double scheme2_rate(const SystemParams& params, const ChannelSet& ch, const EnergyStage& stage,
                    double P0);

// Throws SchemeInfeasible when no power split meets the target.
SchemeIIDesign scheme2(const SystemParams& params, const ChannelSet& ch,
                       const Scheme2Config& cfg = {});

}  // namespace secswipt

#endif  // SECSWIPT_SUBOPTIMAL_HPP_
