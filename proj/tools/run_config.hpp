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

// Run configuration for the command-line tool and the channel file format.
//
// Config file schema (JSON; every key optional, unknown keys rejected):
//
//   system:      M, K, zeta, mu (number or list), r_bar,
//                P_bar_w | P_bar_dbm,
//                sigma0_sq_w | sigma0_sq_dbm,
//                sigma_sq_w | sigma_sq_dbm (number or list of K)
//   generation:  rho_h_sq | rho_h_sq_db, rho_g_sq | rho_g_sq_db (number or
//                list of K), seed
//   channels:    path to a channel file (replaces generation)
//   solver:      feastol, reltol, abstol, max_iterations
//   search:      grid_points, rel_tol, max_refinement
//   feasibility: rate_tol
//   scheme2:     grid_points, boundary_tol
//   experiment:  points, trials, threads, absolute_grid
//   output:      path
//
// Defaults: M=4, K=3, P_bar=30 dBm, zeta=0.5, all noise -50 dBm, ER path
// loss -30 dB, IR path loss -70 dB, mu=1, r_bar=0, seed=1.

#ifndef SECSWIPT_TOOLS_RUN_CONFIG_HPP_
#define SECSWIPT_TOOLS_RUN_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "secswipt/experiments.hpp"
#include "secswipt/system_model.hpp"

namespace secswipt::cli {

using Json = nlohmann::ordered_json;

struct RunConfig {
  SystemParams system;
  ChannelGenSpec generation;
  std::optional<std::string> channels_path;  // set: generation unused
  SweepConfig sweep;
  double rate_tol = 1e-4;
  int points = 20;
  int trials = 50;
  int threads = 1;
  bool absolute_grid = true;
  std::optional<std::string> output_path;

  void validate() const;
};

RunConfig default_config();

// Applies a config tree on top of `base`. Throws ValidationError naming the
// offending key.
RunConfig apply_config(const RunConfig& base, const Json& tree);

RunConfig load_config(const std::string& path);

// Canonical form (SI units) of the resolved config.
Json config_to_json(const RunConfig& cfg);

Json complex_vector_to_json(const CVector& v);
CVector complex_vector_from_json(const Json& j, const std::string& what);

Json channels_to_json(const ChannelSet& ch);
ChannelSet channels_from_json(const Json& j);
ChannelSet read_channels(const std::string& path);
void write_channels(const ChannelSet& ch, const std::string& path);

// Channels named by the config: the channel file, or generation trial 0.
ChannelSet resolve_channels(const RunConfig& cfg);

// Writes `text` to `path` (binary, truncating); throws Error with the path.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace secswipt::cli

#endif  // SECSWIPT_TOOLS_RUN_CONFIG_HPP_
