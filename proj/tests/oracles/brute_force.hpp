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

// Exhaustive search over one information beam and one energy beam for two
// antennas and one energy receiver.
//
// Only the two powers and one direction angle per beam are gridded. With
// everything else fixed, the best information beam maximizes |v'h|^2 at its
// value of |v'g|^2, so it lies on the boundary of the joint numerical range
// of (hh', gg'): the top eigenvector of cos(t) hh' + sin(t) gg'. Likewise the
// best energy beam minimizes |w'h|^2 at its |w'g|^2: the top eigenvector of
// sin(t) gg' - cos(t) hh'. Common phases do not matter. A pattern search
// polishes the best grid point. The energy search spends the full budget and
// solves the power split in closed form on the secrecy boundary.

#ifndef SECSWIPT_TESTS_ORACLES_BRUTE_FORCE_HPP_
#define SECSWIPT_TESTS_ORACLES_BRUTE_FORCE_HPP_

#include <complex>

#include <Eigen/Dense>

namespace oracle {

struct TwoAntennaInstance {
  Eigen::Vector2cd h;
  Eigen::Vector2cd g;
  double sigma0_sq = 1.0;
  double sigma1_sq = 1.0;
  double zeta = 0.5;
  double mu = 1.0;
  double P_bar = 1.0;
};

struct BruteForcePoint {
  bool found = false;
  double value = 0.0;  // energy [J] or secrecy rate [bit/s/Hz]
  double p0 = 0.0;     // information power fraction
  double p1 = 0.0;     // energy power fraction
  double t_info = 0.0;
  double t_energy = 0.0;
  Eigen::Vector2cd v0;
  Eigen::Vector2cd w1;
};

// Largest weighted energy with secrecy rate >= r_bar; `n` points per axis.
BruteForcePoint brute_force_energy(const TwoAntennaInstance& in, double r_bar, int n = 100);

// Largest secrecy rate.
BruteForcePoint brute_force_rate(const TwoAntennaInstance& in, int n = 100);

}  // namespace oracle

#endif  // SECSWIPT_TESTS_ORACLES_BRUTE_FORCE_HPP_
