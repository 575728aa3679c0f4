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

#include "secswipt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "secswipt/errors.hpp"

namespace secswipt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string category_of(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) return "numerical";
  if (dynamic_cast<const ReconstructionError*>(&e) != nullptr) return "numerical";
  if (dynamic_cast<const DegenerateChannel*>(&e) != nullptr) return "degenerate";
  if (dynamic_cast<const ValidationError*>(&e) != nullptr) return "validation";
  return "other";
}

// Solves one target with the given scheme; never throws.
REPoint solve_point(const SystemParams& base, const ChannelSet& ch, SchemeTag scheme, double r,
                    double r_max, const SweepConfig& cfg) {
  REPoint pt;
  pt.r_target = r;
  pt.scheme = scheme;
  const SystemParams params = base.with_rate(r);
  try {
    switch (scheme) {
      case SchemeTag::kOptimal:
      case SchemeTag::kTrivial: {
        // Targets past the probed limit are infeasible by the same test
        // that produced the limit; skip the costly search.
        if (std::isfinite(r_max) && r > r_max) {
          pt.note = "above r_max";
          break;
        }
        SearchConfig sc = cfg.search;
        sc.report_r_max = false;
        const OptimalResult res = solve_optimal(params, ch, sc);
        pt.feasible = true;
        pt.energy = res.energy;
        if (!res.trivial) pt.gamma0 = res.trace.best_gamma0;
        break;
      }
      case SchemeTag::kSub1: {
        const SchemeIDesign d = scheme1(params, ch);
        pt.feasible = true;
        pt.energy = d.E;
        break;
      }
      case SchemeTag::kSub2: {
        const SchemeIIDesign d = scheme2(params, ch, cfg.scheme2);
        pt.feasible = true;
        pt.energy = d.E;
        break;
      }
    }
  } catch (const InfeasibleTarget& e) {
    pt.note = "infeasible";
  } catch (const SchemeInfeasible& e) {
    pt.note = "infeasible";
  } catch (const SchemeInapplicable& e) {
    pt.note = std::string("inapplicable: ") + e.what();
  } catch (const std::exception& e) {
    pt.failed = true;
    pt.note = category_of(e) + ": " + e.what();
  }
  if (pt.energy && *pt.energy < 0.0) pt.energy = 0.0;
  return pt;
}

void fill_monotone(RERegion& reg) {
  reg.max_energy_increase = 0.0;
  const REPoint* prev = nullptr;
  for (const REPoint& p : reg.points) {
    if (!p.feasible) continue;
    if (prev != nullptr) {
      reg.max_energy_increase = std::max(reg.max_energy_increase, *p.energy - *prev->energy);
    }
    prev = &p;
  }
  reg.monotone = reg.max_energy_increase <= kMonotoneSlack;
}

template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

PointStats aggregate(const std::vector<const REPoint*>& pts, int quarantined) {
  PointStats st;
  st.failed = quarantined;
  double sum = 0.0;
  for (const REPoint* p : pts) {
    if (p->failed) {
      ++st.failed;
    } else if (p->feasible) {
      ++st.feasible;
      sum += *p->energy;
    } else {
      ++st.infeasible;
    }
  }
  st.mean_energy = st.feasible > 0 ? sum / st.feasible : kNaN;
  return st;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

}  // namespace

double scheme_rate_limit(const SystemParams& params, const ChannelSet& ch, SchemeTag scheme,
                         const SweepConfig& cfg) {
  params.validate();
  ch.validate(params);
  switch (scheme) {
    case SchemeTag::kOptimal:
    case SchemeTag::kTrivial: {
      FeasibilityConfig fc = cfg.search.feasibility;
      fc.grid_points = cfg.search.grid_points;
      fc.solver = cfg.search.solver;
      return check_feasibility(params, ch, fc).r_max;
    }
    case SchemeTag::kSub1: {
      if (params.K >= params.M) {
        throw SchemeInapplicable("zero-forcing scheme needs fewer ERs than antennas");
      }
      const CMatrix V = linalg::svd_right_null(ch.stacked_er()).basis;
      const double pn2 = (V.adjoint() * ch.h).squaredNorm();
      return std::log2(1.0 + params.P_bar * pn2 / params.sigma0_sq);
    }
    case SchemeTag::kSub2: {
      const EnergyStage st = null_h_energy_stage(params, ch);
      const int n = cfg.scheme2.grid_points;
      double best = 0.0;
      for (int i = 1; i <= n; ++i) {
        best = std::max(best, scheme2_rate(params, ch, st, params.P_bar * i / n));
      }
      return best;
    }
  }
  return 0.0;
}

std::vector<double> rate_grid(double r_max, int n_points) {
  if (n_points < 2) throw ValidationError("n_points must be at least 2");
  if (!(r_max >= 0.0) || !std::isfinite(r_max)) {
    throw ValidationError("r_max must be finite and non-negative");
  }
  std::vector<double> out(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    out[static_cast<std::size_t>(i)] = r_max * i / (n_points - 1);
  }
  out.back() = r_max;
  // A zero range collapses to a single target.
  if (r_max == 0.0) out.resize(1);
  return out;
}

RERegion sweep_region(const SystemParams& params, const ChannelSet& ch, SchemeTag scheme,
                      int n_points, const SweepConfig& cfg) {
  if (n_points < 2) throw ValidationError("n_points must be at least 2");
  double r_max = 0.0;
  try {
    r_max = scheme_rate_limit(params, ch, scheme, cfg);
  } catch (const SchemeInapplicable& e) {
    RERegion reg;
    reg.scheme = scheme;
    reg.params = params;
    reg.r_max = kNaN;
    return reg;
  }
  return sweep_region_on(params, ch, scheme, rate_grid(r_max, n_points), r_max, cfg);
}

RERegion sweep_region_on(const SystemParams& params, const ChannelSet& ch, SchemeTag scheme,
                         const std::vector<double>& rates, double r_max, const SweepConfig& cfg) {
  params.validate();
  ch.validate(params);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] >= 0.0) || (i > 0 && !(rates[i] > rates[i - 1]))) {
      throw ValidationError("rate targets must be non-negative and strictly increasing");
    }
  }
  RERegion reg;
  reg.scheme = scheme;
  reg.params = params;
  reg.r_max = r_max;
  reg.points.reserve(rates.size());
  for (double r : rates) reg.points.push_back(solve_point(params, ch, scheme, r, r_max, cfg));
  fill_monotone(reg);
  return reg;
}

MonteCarloSummary monte_carlo(const SystemParams& params, const ChannelGenSpec& spec,
                              const MonteCarloConfig& cfg) {
  params.validate();
  spec.validate(params);
  if (cfg.n_trials < 1) throw ValidationError("n_trials must be at least 1");
  if (cfg.n_points < 2) throw ValidationError("n_points must be at least 2");
  if (cfg.schemes.empty()) throw ValidationError("no schemes requested");

  const auto n_trials = static_cast<std::size_t>(cfg.n_trials);
  MonteCarloSummary sum;
  sum.n_trials = cfg.n_trials;
  for (int i = 0; i < cfg.n_points; ++i) {
    sum.fractions.push_back(static_cast<double>(i) / (cfg.n_points - 1));
  }
  sum.trial_seeds.resize(n_trials);
  sum.trial_r_max.assign(n_trials, kNaN);

  // Phase 1: channels and the optimal rate limit of every trial.
  std::vector<ChannelSet> channels(n_trials);
  std::vector<std::optional<TrialFailure>> quarantine(n_trials);
  parallel_for(cfg.n_trials, cfg.threads, [&](int t) {
    const auto tu = static_cast<std::size_t>(t);
    sum.trial_seeds[tu] = trial_seed(spec.seed, static_cast<std::uint64_t>(t));
    try {
      channels[tu] = generate_channels(params, spec, static_cast<std::uint64_t>(t));
      if (cfg.trial_hook) cfg.trial_hook(t, channels[tu]);
      channels[tu].validate(params);
      if (!(channels[tu].h.squaredNorm() > 0.0)) throw DegenerateChannel("IR channel is zero");
      sum.trial_r_max[tu] = scheme_rate_limit(params, channels[tu], SchemeTag::kOptimal, cfg.sweep);
    } catch (const std::exception& e) {
      quarantine[tu] = TrialFailure{t, category_of(e), e.what()};
    }
  });

  double abs_top = 0.0;
  for (std::size_t t = 0; t < n_trials; ++t) {
    if (!quarantine[t]) abs_top = std::max(abs_top, sum.trial_r_max[t]);
  }
  if (cfg.absolute_grid) {
    for (int i = 0; i < cfg.n_points; ++i) {
      sum.absolute_rates.push_back(abs_top * i / (cfg.n_points - 1));
    }
    if (abs_top == 0.0) sum.absolute_rates.resize(1);
  }

  // Phase 2: per-trial sweeps, written into index-keyed slots.
  const std::size_t n_schemes = cfg.schemes.size();
  std::vector<RERegion> normalized(n_trials * n_schemes);
  std::vector<RERegion> absolute(n_trials * n_schemes);
  parallel_for(cfg.n_trials, cfg.threads, [&](int t) {
    const auto tu = static_cast<std::size_t>(t);
    if (quarantine[tu]) return;
    const double r_max = sum.trial_r_max[tu];
    std::vector<double> rates;
    for (double f : sum.fractions) {
      const double r = f * r_max;
      if (rates.empty() || r > rates.back()) rates.push_back(r);
    }
    try {
      for (std::size_t s = 0; s < n_schemes; ++s) {
        const SchemeTag tag = cfg.schemes[s];
        RERegion& reg = normalized[tu * n_schemes + s];
        reg = sweep_region_on(params, channels[tu], tag, rates, r_max, cfg.sweep);
        reg.channel_ref = "seed=" + std::to_string(spec.seed) + ",trial=" + std::to_string(t);
        for (REPoint& p : reg.points) p.trial = t;
        if (cfg.absolute_grid) {
          RERegion& ab = absolute[tu * n_schemes + s];
          ab = sweep_region_on(params, channels[tu], tag, sum.absolute_rates, r_max, cfg.sweep);
          ab.channel_ref = reg.channel_ref;
          for (REPoint& p : ab.points) p.trial = t;
        }
      }
    } catch (const std::exception& e) {
      quarantine[tu] = TrialFailure{t, category_of(e), e.what()};
    }
  });

  int quarantined = 0;
  for (std::size_t t = 0; t < n_trials; ++t) {
    if (quarantine[t]) {
      sum.failures.push_back(*quarantine[t]);
      sum.trial_r_max[t] = kNaN;
      ++quarantined;
    }
  }

  // Ordered reduction over (trial, point).
  auto point_at = [](const RERegion& reg, std::size_t i) -> const REPoint* {
    // A zero r_max collapses the normalized grid to one target.
    if (reg.points.empty()) return nullptr;
    return &reg.points[std::min(i, reg.points.size() - 1)];
  };
  for (std::size_t s = 0; s < n_schemes; ++s) {
    SchemeSummary ss;
    ss.scheme = cfg.schemes[s];
    for (std::size_t i = 0; i < sum.fractions.size(); ++i) {
      std::vector<const REPoint*> pts;
      for (std::size_t t = 0; t < n_trials; ++t) {
        if (quarantine[t]) continue;
        if (const REPoint* p = point_at(normalized[t * n_schemes + s], i)) pts.push_back(p);
      }
      ss.normalized.push_back(aggregate(pts, quarantined));
    }
    for (std::size_t i = 0; i < sum.absolute_rates.size(); ++i) {
      std::vector<const REPoint*> pts;
      for (std::size_t t = 0; t < n_trials; ++t) {
        if (quarantine[t]) continue;
        pts.push_back(&absolute[t * n_schemes + s].points[i]);
      }
      ss.absolute.push_back(aggregate(pts, quarantined));
    }
    sum.schemes.push_back(std::move(ss));
  }
  for (std::size_t t = 0; t < n_trials; ++t) {
    if (quarantine[t]) continue;
    for (std::size_t s = 0; s < n_schemes; ++s) {
      sum.regions.push_back(std::move(normalized[t * n_schemes + s]));
    }
  }
  return sum;
}

void emit_region_csv(const std::vector<RERegion>& regions, std::ostream& out) {
  out << "r_target_bpshz,energy_mj_per_slot,feasible,scheme,gamma0,trial\n";
  for (const RERegion& reg : regions) {
    for (const REPoint& p : reg.points) {
      out << format_double(std::max(0.0, p.r_target)) << ',';
      if (p.feasible && p.energy) out << format_double(*p.energy * 1e3);
      out << ',' << (p.feasible ? "true" : "false") << ',' << to_string(p.scheme) << ',';
      if (p.gamma0) out << format_double(*p.gamma0);
      out << ',';
      if (p.trial) out << *p.trial;
      out << '\n';
    }
  }
}

void emit_region_csv(const std::vector<RERegion>& regions, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  emit_region_csv(regions, f);
  f.flush();
  if (!f) throw Error("write to '" + path + "' failed");
}

std::vector<REPoint> read_region_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("missing CSV header");
  if (line != "r_target_bpshz,energy_mj_per_slot,feasible,scheme,gamma0,trial") {
    throw ValidationError("unexpected CSV header '" + line + "'");
  }
  std::vector<REPoint> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 6) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 6 fields");
    }
    REPoint p;
    p.r_target = parse_double(f[0], line_no);
    if (f[2] == "true") {
      p.feasible = true;
    } else if (f[2] != "false") {
      throw ValidationError("line " + std::to_string(line_no) + ": bad feasible flag");
    }
    if (!f[1].empty()) p.energy = parse_double(f[1], line_no) * 1e-3;
    if (p.feasible != p.energy.has_value()) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": energy must be present exactly for feasible points");
    }
    try {
      p.scheme = scheme_from_string(f[3]);
    } catch (const std::exception&) {
      throw ValidationError("line " + std::to_string(line_no) + ": bad scheme '" + f[3] + "'");
    }
    if (!f[4].empty()) p.gamma0 = parse_double(f[4], line_no);
    if (!f[5].empty()) p.trial = static_cast<int>(parse_double(f[5], line_no));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace secswipt
