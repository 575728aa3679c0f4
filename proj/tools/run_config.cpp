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

#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "secswipt/errors.hpp"

namespace secswipt::cli {

namespace {

void check_keys(const Json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ValidationError("config: '" + where + "' must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (allowed.count(it.key()) == 0) {
      throw ValidationError("config: unknown key '" + where + "." + it.key() + "'");
    }
  }
}

double get_number(const Json& j, const std::string& key) {
  if (!j.is_number()) throw ValidationError("config: '" + key + "' must be a number");
  return j.get<double>();
}

int get_int(const Json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ValidationError("config: '" + key + "' must be an integer");
  return j.get<int>();
}

// A number (broadcast to n entries) or a list of exactly n numbers.
std::vector<double> get_list(const Json& j, const std::string& key, int n,
                             const std::function<double(double)>& convert) {
  std::vector<double> out;
  if (j.is_number()) {
    out.assign(static_cast<std::size_t>(n), convert(j.get<double>()));
  } else if (j.is_array()) {
    if (static_cast<int>(j.size()) != n) {
      throw ValidationError("config: '" + key + "' needs " + std::to_string(n) + " entries");
    }
    for (const Json& x : j) out.push_back(convert(get_number(x, key)));
  } else {
    throw ValidationError("config: '" + key + "' must be a number or a list");
  }
  return out;
}

double identity(double x) { return x; }

// Looks up a quantity given either in linear units (`linear_key`) or in a
// logarithmic one (`log_key`); at most one may be present.
const Json* pick_unit(const Json& obj, const std::string& where, const std::string& linear_key,
                      const std::string& log_key, bool* is_log) {
  const bool has_lin = obj.contains(linear_key);
  const bool has_log = obj.contains(log_key);
  if (has_lin && has_log) {
    throw ValidationError("config: give only one of '" + where + "." + linear_key + "' and '" +
                          where + "." + log_key + "'");
  }
  *is_log = has_log;
  if (has_lin) return &obj.at(linear_key);
  if (has_log) return &obj.at(log_key);
  return nullptr;
}

}  // namespace

void RunConfig::validate() const {
  system.validate();
  if (!channels_path) generation.validate(system);
  if (points < 2) throw ValidationError("points must be at least 2");
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (threads < 1) throw ValidationError("threads must be at least 1");
  if (!(rate_tol > 0.0)) throw ValidationError("feasibility.rate_tol must be positive");
  if (sweep.search.grid_points < 2) throw ValidationError("search.grid_points must be at least 2");
  if (!(sweep.search.rel_tol > 0.0)) throw ValidationError("search.rel_tol must be positive");
  if (sweep.scheme2.grid_points < 2) throw ValidationError("scheme2.grid_points must be at least 2");
  if (!(sweep.scheme2.boundary_tol > 0.0)) {
    throw ValidationError("scheme2.boundary_tol must be positive");
  }
}

RunConfig default_config() {
  RunConfig c;
  c.system.M = 4;
  c.system.K = 3;
  c.system.P_bar = dbm_to_watts(30.0);
  c.system.zeta = 0.5;
  c.system.sigma0_sq = dbm_to_watts(-50.0);
  c.system.sigma_sq.assign(3, dbm_to_watts(-50.0));
  c.system.mu.assign(3, 1.0);
  c.system.r_bar = 0.0;
  c.generation.rho_h_sq = db_to_linear(-70.0);
  c.generation.rho_g_sq.assign(3, db_to_linear(-30.0));
  c.generation.seed = 1;
  return c;
}

RunConfig apply_config(const RunConfig& base, const Json& tree) {
  RunConfig c = base;
  check_keys(tree, "config",
             {"system", "generation", "channels", "solver", "search", "feasibility", "scheme2",
              "experiment", "output"});

  if (tree.contains("system")) {
    const Json& s = tree.at("system");
    check_keys(s, "system",
               {"M", "K", "zeta", "mu", "r_bar", "P_bar_w", "P_bar_dbm", "sigma0_sq_w",
                "sigma0_sq_dbm", "sigma_sq_w", "sigma_sq_dbm"});
    const int old_k = c.system.K;
    if (s.contains("M")) c.system.M = get_int(s.at("M"), "system.M");
    if (s.contains("K")) c.system.K = get_int(s.at("K"), "system.K");
    if (c.system.K < 1) throw ValidationError("config: system.K must be at least 1");
    const int k = c.system.K;
    // Per-ER lists follow K when only K changed and the old values were uniform.
    auto resize_uniform = [&](std::vector<double>& v, const char* name) {
      if (static_cast<int>(v.size()) == k) return;
      if (!v.empty() && std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) {
        v.assign(static_cast<std::size_t>(k), v[0]);
      } else {
        throw ValidationError(std::string("config: K changed from ") + std::to_string(old_k) +
                              "; give '" + name + "' explicitly");
      }
    };
    if (s.contains("zeta")) c.system.zeta = get_number(s.at("zeta"), "system.zeta");
    if (s.contains("r_bar")) c.system.r_bar = get_number(s.at("r_bar"), "system.r_bar");
    if (s.contains("mu")) {
      c.system.mu = get_list(s.at("mu"), "system.mu", k, identity);
    } else {
      resize_uniform(c.system.mu, "system.mu");
    }
    bool log = false;
    if (const Json* j = pick_unit(s, "system", "P_bar_w", "P_bar_dbm", &log)) {
      const double v = get_number(*j, "system.P_bar");
      c.system.P_bar = log ? dbm_to_watts(v) : v;
    }
    if (const Json* j = pick_unit(s, "system", "sigma0_sq_w", "sigma0_sq_dbm", &log)) {
      const double v = get_number(*j, "system.sigma0_sq");
      c.system.sigma0_sq = log ? dbm_to_watts(v) : v;
    }
    if (const Json* j = pick_unit(s, "system", "sigma_sq_w", "sigma_sq_dbm", &log)) {
      c.system.sigma_sq = get_list(*j, "system.sigma_sq", k,
                                   log ? std::function<double(double)>(dbm_to_watts) : identity);
    } else {
      resize_uniform(c.system.sigma_sq, "system.sigma_sq");
    }
    if (!tree.contains("generation") || !tree.at("generation").contains("rho_g_sq")) {
      if (!tree.contains("generation") || !tree.at("generation").contains("rho_g_sq_db")) {
        resize_uniform(c.generation.rho_g_sq, "generation.rho_g_sq");
      }
    }
  }

  if (tree.contains("generation")) {
    const Json& g = tree.at("generation");
    check_keys(g, "generation", {"rho_h_sq", "rho_h_sq_db", "rho_g_sq", "rho_g_sq_db", "seed"});
    bool log = false;
    if (const Json* j = pick_unit(g, "generation", "rho_h_sq", "rho_h_sq_db", &log)) {
      const double v = get_number(*j, "generation.rho_h_sq");
      c.generation.rho_h_sq = log ? db_to_linear(v) : v;
    }
    if (const Json* j = pick_unit(g, "generation", "rho_g_sq", "rho_g_sq_db", &log)) {
      c.generation.rho_g_sq =
          get_list(*j, "generation.rho_g_sq", c.system.K,
                   log ? std::function<double(double)>(db_to_linear) : identity);
    }
    if (g.contains("seed")) {
      const Json& sd = g.at("seed");
      if (!sd.is_number_unsigned() && !(sd.is_number_integer() && sd.get<std::int64_t>() >= 0)) {
        throw ValidationError("config: 'generation.seed' must be a non-negative integer");
      }
      c.generation.seed = sd.get<std::uint64_t>();
    }
  }

  if (tree.contains("channels")) {
    if (!tree.at("channels").is_string()) {
      throw ValidationError("config: 'channels' must be a file path");
    }
    if (tree.contains("generation")) {
      throw ValidationError("config: give either 'channels' or 'generation', not both");
    }
    c.channels_path = tree.at("channels").get<std::string>();
  }

  if (tree.contains("solver")) {
    const Json& s = tree.at("solver");
    check_keys(s, "solver", {"feastol", "reltol", "abstol", "max_iterations"});
    conic::IpmConfig& ipm = c.sweep.search.solver.ipm;
    if (s.contains("feastol")) ipm.feastol = get_number(s.at("feastol"), "solver.feastol");
    if (s.contains("reltol")) ipm.reltol = get_number(s.at("reltol"), "solver.reltol");
    if (s.contains("abstol")) ipm.abstol = get_number(s.at("abstol"), "solver.abstol");
    if (s.contains("max_iterations")) {
      ipm.max_iterations = get_int(s.at("max_iterations"), "solver.max_iterations");
    }
  }
  if (tree.contains("search")) {
    const Json& s = tree.at("search");
    check_keys(s, "search", {"grid_points", "rel_tol", "max_refinement"});
    SearchConfig& sc = c.sweep.search;
    if (s.contains("grid_points")) sc.grid_points = get_int(s.at("grid_points"), "search.grid_points");
    if (s.contains("rel_tol")) sc.rel_tol = get_number(s.at("rel_tol"), "search.rel_tol");
    if (s.contains("max_refinement")) {
      sc.max_refinement = get_int(s.at("max_refinement"), "search.max_refinement");
    }
  }
  if (tree.contains("feasibility")) {
    const Json& s = tree.at("feasibility");
    check_keys(s, "feasibility", {"rate_tol"});
    if (s.contains("rate_tol")) c.rate_tol = get_number(s.at("rate_tol"), "feasibility.rate_tol");
  }
  if (tree.contains("scheme2")) {
    const Json& s = tree.at("scheme2");
    check_keys(s, "scheme2", {"grid_points", "boundary_tol"});
    if (s.contains("grid_points")) {
      c.sweep.scheme2.grid_points = get_int(s.at("grid_points"), "scheme2.grid_points");
    }
    if (s.contains("boundary_tol")) {
      c.sweep.scheme2.boundary_tol = get_number(s.at("boundary_tol"), "scheme2.boundary_tol");
    }
  }
  if (tree.contains("experiment")) {
    const Json& s = tree.at("experiment");
    check_keys(s, "experiment", {"points", "trials", "threads", "absolute_grid"});
    if (s.contains("points")) c.points = get_int(s.at("points"), "experiment.points");
    if (s.contains("trials")) c.trials = get_int(s.at("trials"), "experiment.trials");
    if (s.contains("threads")) c.threads = get_int(s.at("threads"), "experiment.threads");
    if (s.contains("absolute_grid")) {
      if (!s.at("absolute_grid").is_boolean()) {
        throw ValidationError("config: 'experiment.absolute_grid' must be true or false");
      }
      c.absolute_grid = s.at("absolute_grid").get<bool>();
    }
  }
  if (tree.contains("output")) {
    const Json& s = tree.at("output");
    check_keys(s, "output", {"path"});
    if (s.contains("path")) {
      if (!s.at("path").is_string()) throw ValidationError("config: 'output.path' must be a string");
      c.output_path = s.at("path").get<std::string>();
    }
  }
  c.sweep.search.feasibility.rate_tol = c.rate_tol;
  c.sweep.search.feasibility.grid_points = c.sweep.search.grid_points;
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config '" + path + "'");
  Json tree;
  try {
    tree = Json::parse(f);
  } catch (const std::exception& e) {
    throw ValidationError("config '" + path + "': " + e.what());
  }
  return apply_config(default_config(), tree);
}

Json config_to_json(const RunConfig& cfg) {
  Json j;
  const SystemParams& s = cfg.system;
  j["system"] = {{"M", s.M},
                 {"K", s.K},
                 {"zeta", s.zeta},
                 {"mu", s.mu},
                 {"r_bar", s.r_bar},
                 {"P_bar_w", s.P_bar},
                 {"sigma0_sq_w", s.sigma0_sq},
                 {"sigma_sq_w", s.sigma_sq}};
  if (cfg.channels_path) {
    j["channels"] = *cfg.channels_path;
  } else {
    j["generation"] = {{"rho_h_sq", cfg.generation.rho_h_sq},
                       {"rho_g_sq", cfg.generation.rho_g_sq},
                       {"seed", cfg.generation.seed}};
  }
  const conic::IpmConfig& ipm = cfg.sweep.search.solver.ipm;
  j["solver"] = {{"feastol", ipm.feastol},
                 {"reltol", ipm.reltol},
                 {"abstol", ipm.abstol},
                 {"max_iterations", ipm.max_iterations}};
  j["search"] = {{"grid_points", cfg.sweep.search.grid_points},
                 {"rel_tol", cfg.sweep.search.rel_tol},
                 {"max_refinement", cfg.sweep.search.max_refinement}};
  j["feasibility"] = {{"rate_tol", cfg.rate_tol}};
  j["scheme2"] = {{"grid_points", cfg.sweep.scheme2.grid_points},
                  {"boundary_tol", cfg.sweep.scheme2.boundary_tol}};
  j["experiment"] = {{"points", cfg.points},
                     {"trials", cfg.trials},
                     {"threads", cfg.threads},
                     {"absolute_grid", cfg.absolute_grid}};
  if (cfg.output_path) j["output"] = {{"path", *cfg.output_path}};
  return j;
}

Json complex_vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

CVector complex_vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + " must be a list of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ValidationError(what + "[" + std::to_string(i) + "] must be [re, im]");
    }
    v(static_cast<Eigen::Index>(i)) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return v;
}

Json channels_to_json(const ChannelSet& ch) {
  Json j;
  j["h"] = complex_vector_to_json(ch.h);
  j["g"] = Json::array();
  for (const CVector& g : ch.g) j["g"].push_back(complex_vector_to_json(g));
  return j;
}

ChannelSet channels_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("h") || !j.contains("g")) {
    throw ValidationError("channel file needs 'h' and 'g'");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "h" && it.key() != "g") {
      throw ValidationError("channel file: unknown key '" + it.key() + "'");
    }
  }
  ChannelSet ch;
  ch.h = complex_vector_from_json(j.at("h"), "h");
  if (!j.at("g").is_array()) throw ValidationError("'g' must be a list of channel vectors");
  for (std::size_t k = 0; k < j.at("g").size(); ++k) {
    ch.g.push_back(complex_vector_from_json(j.at("g")[k], "g[" + std::to_string(k) + "]"));
  }
  return ch;
}

ChannelSet read_channels(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open channel file '" + path + "'");
  try {
    return channels_from_json(Json::parse(f));
  } catch (const ValidationError& e) {
    throw ValidationError("channel file '" + path + "': " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("channel file '" + path + "': " + e.what());
  }
}

void write_channels(const ChannelSet& ch, const std::string& path) {
  write_text_file(path, channels_to_json(ch).dump(2) + "\n");
}

ChannelSet resolve_channels(const RunConfig& cfg) {
  ChannelSet ch = cfg.channels_path ? read_channels(*cfg.channels_path)
                                    : generate_channels(cfg.system, cfg.generation, 0);
  ch.validate(cfg.system);
  return ch;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw Error("write to '" + path + "' failed");
}

}  // namespace secswipt::cli
