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

// Rate-energy region sweeps and Monte Carlo aggregation over fading draws.

#ifndef SECSWIPT_EXPERIMENTS_HPP_
#define SECSWIPT_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "secswipt/optimal.hpp"
#include "secswipt/suboptimal.hpp"
#include "secswipt/system_model.hpp"

namespace secswipt {

struct REPoint {
  double r_target = 0.0;            // bit/s/Hz
  bool feasible = false;
  bool failed = false;              // solver error rather than infeasibility
  std::optional<double> energy;     // J per slot, only when feasible
  SchemeTag scheme = SchemeTag::kOptimal;
  std::optional<double> gamma0;     // optimal scheme, non-trivial points
  std::optional<int> trial;
  std::string note;                 // why a point is missing
};

struct RERegion {
  SchemeTag scheme = SchemeTag::kOptimal;
  std::vector<REPoint> points;      // strictly increasing r_target
  SystemParams params;
  std::string channel_ref;
  double r_max = 0.0;
  // Largest increase of energy between consecutive feasible points; the
  // optimal boundary must not rise by more than kMonotoneSlack.
  double max_energy_increase = 0.0;
  bool monotone = true;
};

inline constexpr double kMonotoneSlack = 1e-6;

struct SweepConfig {
  SearchConfig search;
  Scheme2Config scheme2;
};

// Largest secrecy target the scheme can serve on this channel.
double scheme_rate_limit(const SystemParams& params, const ChannelSet& ch, SchemeTag scheme,
                         const SweepConfig& cfg = {});

// Evenly spaced targets 0..r_max, n_points of them.
std::vector<double> rate_grid(double r_max, int n_points);

// Sweeps the scheme over its own rate range.
RERegion sweep_region(const SystemParams& params, const ChannelSet& ch, SchemeTag scheme,
                      int n_points, const SweepConfig& cfg = {});

// Sweeps the scheme over given targets (strictly increasing, >= 0).
RERegion sweep_region_on(const SystemParams& params, const ChannelSet& ch, SchemeTag scheme,
                         const std::vector<double>& rates, double r_max,
                         const SweepConfig& cfg = {});

struct TrialFailure {
  int trial = 0;
  std::string category;  // numerical | degenerate | validation | other
  std::string message;
};

struct PointStats {
  double mean_energy = 0.0;  // over feasible trials; NaN when none
  int feasible = 0;
  int infeasible = 0;
  int failed = 0;            // trial quarantined
};

struct SchemeSummary {
  SchemeTag scheme = SchemeTag::kOptimal;
  std::vector<PointStats> normalized;  // one per fraction
  std::vector<PointStats> absolute;    // one per absolute rate
};

struct MonteCarloConfig {
  int n_trials = 50;
  int n_points = 20;
  std::vector<SchemeTag> schemes{SchemeTag::kOptimal, SchemeTag::kSub1, SchemeTag::kSub2};
  SweepConfig sweep;
  int threads = 1;
  bool absolute_grid = true;
  // Test hook run on each trial's channels before solving; may throw or
  // alter the channels.
  std::function<void(int trial, ChannelSet& ch)> trial_hook;
};

struct MonteCarloSummary {
  int n_trials = 0;
  std::vector<double> fractions;       // normalized grid, fractions of r_max
  std::vector<double> absolute_rates;  // common absolute grid
  std::vector<std::uint64_t> trial_seeds;
  std::vector<double> trial_r_max;     // NaN for quarantined trials
  std::vector<SchemeSummary> schemes;
  std::vector<TrialFailure> failures;
  // Per-trial regions on the normalized grid, trial-major then scheme.
  std::vector<RERegion> regions;
};

MonteCarloSummary monte_carlo(const SystemParams& params, const ChannelGenSpec& spec,
                              const MonteCarloConfig& cfg);

// CSV with header r_target_bpshz,energy_mj_per_slot,feasible,scheme,gamma0,trial.
void emit_region_csv(const std::vector<RERegion>& regions, std::ostream& out);
void emit_region_csv(const std::vector<RERegion>& regions, const std::string& path);

// Parses the CSV written above (for tests and tooling). Throws
// ValidationError on malformed input.
std::vector<REPoint> read_region_csv(std::istream& in);

}  // namespace secswipt

#endif  // SECSWIPT_EXPERIMENTS_HPP_
