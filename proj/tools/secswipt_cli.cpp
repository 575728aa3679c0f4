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

// secswipt: beamforming design, feasibility, rate-energy regions and Monte
// Carlo runs from the command line.
//
// Exit codes: 0 success, 1 error, 2 infeasible secrecy target.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "run_config.hpp"
#include "secswipt/errors.hpp"
#include "secswipt/experiments.hpp"
#include "secswipt/optimal.hpp"
#include "secswipt/sdr.hpp"
#include "secswipt/suboptimal.hpp"

namespace secswipt::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct Flags {
  std::string config_path;
  std::string channels_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string scheme = "optimal";
  std::optional<double> rate;
  std::optional<int> points;
  std::optional<int> trials;
  std::optional<int> threads;
  std::string dump_sdp;
  std::string write_channels_path;
  std::optional<int> zero_ir_trial;
};

RunConfig resolve(const Flags& f) {
  RunConfig c = f.config_path.empty() ? default_config() : load_config(f.config_path);
  if (!f.channels_path.empty()) {
    if (f.seed) throw ValidationError("--seed applies to generated channels, not --channels");
    c.channels_path = f.channels_path;
  }
  if (f.seed) {
    if (c.channels_path) throw ValidationError("--seed conflicts with the configured channel file");
    c.generation.seed = *f.seed;
  }
  if (f.rate) c.system.r_bar = *f.rate;
  if (f.points) c.points = *f.points;
  if (f.trials) c.trials = *f.trials;
  if (f.threads) c.threads = *f.threads;
  if (!f.out.empty()) c.output_path = f.out;
  c.validate();
  return c;
}

std::vector<SchemeTag> schemes_of(const std::string& name) {
  if (name == "all") return {SchemeTag::kOptimal, SchemeTag::kSub1, SchemeTag::kSub2};
  if (name == "optimal") return {SchemeTag::kOptimal};
  if (name == "sub1") return {SchemeTag::kSub1};
  if (name == "sub2") return {SchemeTag::kSub2};
  throw ValidationError("unknown scheme '" + name + "' (optimal, sub1, sub2 or all)");
}

std::string format_double_text(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json provenance(const RunConfig& cfg, const char* command) {
  Json j;
  j["tool"] = "secswipt";
  j["command"] = command;
  j["config"] = config_to_json(cfg);
  j["seed"] = cfg.channels_path ? Json(nullptr) : Json(cfg.generation.seed);
  return j;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path) {
    write_text_file(*cfg.output_path, text);
  } else {
    std::cout << text;
  }
}

Json beams_json(const BeamformingSolution& b) {
  Json j;
  j["v0"] = complex_vector_to_json(b.v0);
  j["W"] = Json::array();
  for (const CVector& w : b.W) j["W"].push_back(complex_vector_to_json(w));
  return j;
}

Json metrics_json(const ChannelSet& ch, const BeamformingSolution& b, const SystemParams& p) {
  const Metrics m = evaluate_metrics(ch, b, p);
  Json j;
  j["sinr_ir"] = m.sinr_ir;
  j["sinr_er"] = m.sinr_er;
  j["secrecy_rate_bpshz"] = m.secrecy_rate;
  j["energy_per_er_j"] = m.energy_per_er;
  j["weighted_sum_energy_j"] = m.weighted_sum_energy;
  j["total_power_w"] = b.total_power();
  return j;
}

const char* gamma_status(GammaStatus s) {
  switch (s) {
    case GammaStatus::kOptimal:
      return "optimal";
    case GammaStatus::kInfeasible:
      return "infeasible";
    case GammaStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

Json samples_json(const std::vector<GammaSample>& samples) {
  Json out = Json::array();
  for (const GammaSample& s : samples) {
    out.push_back({{"gamma0", s.gamma0},
                   {"value_j", number_or_null(s.value)},
                   {"status", gamma_status(s.status)}});
  }
  return out;
}

enum class Outcome { kOk, kInfeasible, kInapplicable, kError };

struct SchemeRun {
  Json json;
  Outcome outcome = Outcome::kOk;
};

SchemeRun run_scheme(const RunConfig& cfg, const ChannelSet& ch, SchemeTag tag,
                     const std::string& dump_sdp) {
  SchemeRun run;
  Json& j = run.json;
  j["scheme"] = std::string(to_string(tag));
  const SystemParams& p = cfg.system;
  try {
    BeamformingSolution beams;
    Json details;
    switch (tag) {
      case SchemeTag::kOptimal:
      case SchemeTag::kTrivial: {
        const OptimalResult res = solve_optimal(p, ch, cfg.sweep.search);
        beams = res.beams;
        details["trivial"] = res.trivial;
        details["energy_j"] = res.energy;
        details["relaxation_value_j"] = res.sdr_objective;
        if (!res.trivial) {
          details["gamma0"] = res.trace.best_gamma0;
          details["gamma0_trace"] = {{"grid", samples_json(res.trace.grid)},
                                     {"refinement", samples_json(res.trace.refinement)},
                                     {"refinement_iterations", res.trace.refinement_iterations}};
          details["rank_reduction"] = {{"pass_through", res.reduction.pass_through},
                                       {"null_dim", res.reduction.null_dim},
                                       {"q_rank_before", res.reduction.q_rank_before}};
          details["duals"] = {{"lambda", res.sdr.lambda},
                              {"beta", res.sdr.beta},
                              {"theta", res.sdr.theta}};
          if (!dump_sdp.empty()) {
            std::ostringstream os;
            write_conic_listing(to_conic(build_instance(p, ch, res.trace.best_gamma0)), os);
            write_text_file(dump_sdp, os.str());
          }
        }
        break;
      }
      case SchemeTag::kSub1: {
        const SchemeIDesign d = scheme1(p, ch);
        beams = d.beams();
        details["info_power_w"] = d.P0_tilde;
        details["energy_gain"] = d.energy.psi_tilde;
        details["energy_j"] = d.E;
        break;
      }
      case SchemeTag::kSub2: {
        const SchemeIIDesign d = scheme2(p, ch, cfg.sweep.scheme2);
        beams = d.beams();
        details["info_power_w"] = d.P0_hat;
        details["info_power_min_w"] = d.P0_hat_min;
        details["info_power_max_w"] = d.P0_hat_max;
        details["branch"] = d.branch == PowerBranch::kMaxPower ? "max_power" : "min_power";
        details["disconnected"] = d.disconnected;
        details["energy_j"] = d.E;
        break;
      }
    }
    j["status"] = "ok";
    j["beams"] = beams_json(beams);
    j["metrics"] = metrics_json(ch, beams, p);
    j["details"] = details;
  } catch (const InfeasibleTarget& e) {
    run.outcome = Outcome::kInfeasible;
    j["status"] = "infeasible";
    j["message"] = e.what();
    j["r_max_bpshz"] = number_or_null(e.r_max());
  } catch (const SchemeInfeasible& e) {
    run.outcome = Outcome::kInfeasible;
    j["status"] = "infeasible";
    j["message"] = e.what();
    j["r_max_bpshz"] = number_or_null(scheme_rate_limit(p, ch, tag, cfg.sweep));
  } catch (const SchemeInapplicable& e) {
    run.outcome = Outcome::kInapplicable;
    j["status"] = "inapplicable";
    j["message"] = e.what();
  } catch (const Error& e) {
    run.outcome = Outcome::kError;
    j["status"] = "error";
    j["message"] = e.what();
  }
  return run;
}

int cmd_solve(const Flags& f) {
  const RunConfig cfg = resolve(f);
  const ChannelSet ch = resolve_channels(cfg);
  if (!f.write_channels_path.empty()) write_channels(ch, f.write_channels_path);
  const std::vector<SchemeTag> tags = schemes_of(f.scheme);
  Json out = provenance(cfg, "solve");
  out["channels"] = channels_to_json(ch);
  out["results"] = Json::array();
  bool infeasible = false;
  bool error = false;
  for (SchemeTag tag : tags) {
    SchemeRun run = run_scheme(cfg, ch, tag, f.dump_sdp);
    const std::string name(to_string(tag));
    switch (run.outcome) {
      case Outcome::kOk:
        break;
      case Outcome::kInfeasible: {
        infeasible = true;
        const Json& r = run.json["r_max_bpshz"];
        std::cerr << name << ": infeasible target " << cfg.system.r_bar << " bit/s/Hz; r_max = "
                  << (r.is_null() ? std::string("unknown") : r.dump()) << "\n";
        break;
      }
      case Outcome::kInapplicable:
        std::cerr << name << ": " << run.json["message"].get<std::string>() << "\n";
        if (tags.size() == 1) error = true;
        break;
      case Outcome::kError:
        std::cerr << name << ": error: " << run.json["message"].get<std::string>() << "\n";
        error = true;
        break;
    }
    out["results"].push_back(std::move(run.json));
  }
  emit(cfg, out.dump(2) + "\n");
  if (error) return kExitError;
  return infeasible ? kExitInfeasible : kExitOk;
}

Json region_meta(const RERegion& reg) {
  int feasible = 0;
  int failed = 0;
  for (const REPoint& p : reg.points) {
    feasible += p.feasible ? 1 : 0;
    failed += p.failed ? 1 : 0;
  }
  Json j;
  j["scheme"] = std::string(to_string(reg.scheme));
  j["r_max_bpshz"] = number_or_null(reg.r_max);
  j["points"] = reg.points.size();
  j["feasible_points"] = feasible;
  j["failed_points"] = failed;
  j["monotone"] = reg.monotone;
  j["max_energy_increase_j"] = reg.max_energy_increase;
  Json notes = Json::array();
  for (const REPoint& p : reg.points) {
    if (p.failed) notes.push_back({{"r_target_bpshz", p.r_target}, {"note", p.note}});
  }
  j["failures"] = notes;
  return j;
}

std::string sidecar_path(const RunConfig& cfg, const char* suffix) {
  return *cfg.output_path + suffix;
}

int cmd_region(const Flags& f) {
  const RunConfig cfg = resolve(f);
  const ChannelSet ch = resolve_channels(cfg);
  if (!f.write_channels_path.empty()) write_channels(ch, f.write_channels_path);
  const std::vector<SchemeTag> tags = schemes_of(f.scheme);
  std::vector<RERegion> regions;
  if (tags.size() == 1) {
    regions.push_back(sweep_region(cfg.system, ch, tags[0], cfg.points, cfg.sweep));
  } else {
    // Shared targets taken from the optimal limit so curves line up.
    const double r_max = scheme_rate_limit(cfg.system, ch, SchemeTag::kOptimal, cfg.sweep);
    const std::vector<double> rates = rate_grid(r_max, cfg.points);
    for (SchemeTag tag : tags) {
      regions.push_back(sweep_region_on(cfg.system, ch, tag, rates, r_max, cfg.sweep));
    }
  }
  const std::string ref = cfg.channels_path ? "file=" + *cfg.channels_path
                                            : "seed=" + std::to_string(cfg.generation.seed) +
                                                  ",trial=0";
  for (RERegion& r : regions) r.channel_ref = ref;

  std::ostringstream csv;
  emit_region_csv(regions, csv);
  emit(cfg, csv.str());
  if (cfg.output_path) {
    Json meta = provenance(cfg, "region");
    meta["channel_ref"] = ref;
    meta["channels"] = channels_to_json(ch);
    meta["csv"] = *cfg.output_path;
    meta["regions"] = Json::array();
    for (const RERegion& r : regions) meta["regions"].push_back(region_meta(r));
    write_text_file(sidecar_path(cfg, ".meta.json"), meta.dump(2) + "\n");
  }
  int code = kExitOk;
  for (const RERegion& r : regions) {
    if (r.scheme == SchemeTag::kOptimal && !r.monotone) {
      std::cerr << "optimal boundary rises by " << r.max_energy_increase
                << " J between consecutive targets\n";
      code = kExitError;
    }
  }
  return code;
}

Json stats_json(const std::vector<PointStats>& stats, const std::vector<double>& axis,
                const char* axis_name) {
  Json out = Json::array();
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const PointStats& s = stats[i];
    out.push_back({{axis_name, axis[i]},
                   {"mean_energy_mj", number_or_null(s.mean_energy * 1e3)},
                   {"feasible", s.feasible},
                   {"infeasible", s.infeasible},
                   {"failed", s.failed}});
  }
  return out;
}

int cmd_montecarlo(const Flags& f) {
  const RunConfig cfg = resolve(f);
  if (cfg.channels_path) throw ValidationError("montecarlo draws its own channels; drop --channels");
  MonteCarloConfig mc;
  mc.n_trials = cfg.trials;
  mc.n_points = cfg.points;
  mc.schemes = schemes_of(f.scheme);
  mc.sweep = cfg.sweep;
  mc.threads = cfg.threads;
  mc.absolute_grid = cfg.absolute_grid;
  if (f.zero_ir_trial) {
    const int bad = *f.zero_ir_trial;
    mc.trial_hook = [bad](int t, ChannelSet& ch) {
      if (t == bad) ch.h.setZero();
    };
  }
  const MonteCarloSummary sum = monte_carlo(cfg.system, cfg.generation, mc);

  std::ostringstream csv;
  emit_region_csv(sum.regions, csv);
  emit(cfg, csv.str());

  Json js = provenance(cfg, "montecarlo");
  if (f.zero_ir_trial) js["zeroed_ir_trial"] = *f.zero_ir_trial;
  js["n_trials"] = sum.n_trials;
  js["trial_seeds"] = sum.trial_seeds;
  Json rmax = Json::array();
  for (double r : sum.trial_r_max) rmax.push_back(number_or_null(r));
  js["trial_r_max_bpshz"] = rmax;
  js["schemes"] = Json::array();
  for (const SchemeSummary& s : sum.schemes) {
    js["schemes"].push_back({{"scheme", std::string(to_string(s.scheme))},
                             {"normalized", stats_json(s.normalized, sum.fractions, "fraction")},
                             {"absolute",
                              stats_json(s.absolute, sum.absolute_rates, "r_target_bpshz")}});
  }
  Json failures = Json::array();
  for (const TrialFailure& tf : sum.failures) {
    failures.push_back({{"trial", tf.trial}, {"category", tf.category}, {"message", tf.message}});
  }
  js["failures"] = failures;
  if (cfg.output_path) {
    write_text_file(sidecar_path(cfg, ".summary.json"), js.dump(2) + "\n");
  } else {
    std::cerr << js.dump(2) << "\n";
  }
  for (const TrialFailure& tf : sum.failures) {
    std::cerr << "trial " << tf.trial << " quarantined (" << tf.category << "): " << tf.message
              << "\n";
  }
  return kExitOk;
}

int cmd_feasibility(const Flags& f) {
  const RunConfig cfg = resolve(f);
  const ChannelSet ch = resolve_channels(cfg);
  FeasibilityConfig fc = cfg.sweep.search.feasibility;
  fc.solver = cfg.sweep.search.solver;
  const FeasibilityReport rep = check_feasibility(cfg.system, ch, fc);
  std::cout << "r_bar_bpshz " << format_double_text(cfg.system.r_bar) << "\n"
            << "r_max_bpshz " << format_double_text(rep.r_max) << "\n"
            << "ir_capacity_bpshz " << format_double_text(rep.r_capacity) << "\n"
            << "verdict " << (rep.feasible ? "feasible" : "infeasible") << "\n";
  if (cfg.output_path) {
    Json j = provenance(cfg, "feasibility");
    j["channels"] = channels_to_json(ch);
    j["r_bar_bpshz"] = cfg.system.r_bar;
    j["r_max_bpshz"] = rep.r_max;
    j["ir_capacity_bpshz"] = rep.r_capacity;
    j["feasible"] = rep.feasible;
    j["relaxations_solved"] = rep.sdp_solves;
    j["numerical_failures"] = rep.numerical_failures;
    write_text_file(*cfg.output_path, j.dump(2) + "\n");
  }
  return rep.feasible ? kExitOk : kExitInfeasible;
}

void add_common(CLI::App* app, Flags& f, bool with_scheme) {
  app->add_option("--config", f.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app->add_option("--channels", f.channels_path, "channel file instead of generated channels")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", f.seed, "channel generation seed");
  app->add_option("--out", f.out, "output file (default: stdout)");
  app->add_option("--rate", f.rate, "secrecy-rate target [bit/s/Hz]");
  if (with_scheme) {
    app->add_option("--scheme", f.scheme, "optimal, sub1, sub2 or all")
        ->check(CLI::IsMember({"optimal", "sub1", "sub2", "all"}));
  }
  app->add_option("--points", f.points, "rate targets per region");
  app->add_option("--trials", f.trials, "Monte Carlo trials");
}

}  // namespace
}  // namespace secswipt::cli

int main(int argc, char** argv) {
  using namespace secswipt::cli;
  CLI::App app{"Secrecy beamforming design for SWIPT downlinks"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* solve = app.add_subcommand("solve", "design beams for one channel and target");
  add_common(solve, f, true);
  solve->add_option("--dump-sdp", f.dump_sdp, "write the relaxation at the chosen SINR");
  solve->add_option("--write-channels", f.write_channels_path, "save the channels used");

  CLI::App* region = app.add_subcommand("region", "sweep the rate-energy boundary");
  add_common(region, f, true);
  region->add_option("--write-channels", f.write_channels_path, "save the channels used");

  CLI::App* mc = app.add_subcommand("montecarlo", "average boundaries over fading draws");
  add_common(mc, f, true);
  mc->add_option("--threads", f.threads, "worker threads");
  mc->add_option("--zero-ir-trial", f.zero_ir_trial, "testing: zero the IR channel of one trial");

  CLI::App* feas = app.add_subcommand("feasibility", "largest achievable secrecy rate");
  add_common(feas, f, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (solve->parsed()) return cmd_solve(f);
    if (region->parsed()) return cmd_region(f);
    if (mc->parsed()) return cmd_montecarlo(f);
    if (feas->parsed()) return cmd_feasibility(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
