// Copyright 2026 The lcg-sim Authors
//
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

// lcg_sim: heralding, Wigner grids, optimization and rank reduction from JSON configs.
//
// Exit codes: 0 ok, 2 config error, 3 numerical stability, 4 budget exceeded.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lcg/characterize.hpp"
#include "lcg/gbs.hpp"
#include "lcg/serialize.hpp"
#include "lcg/stellar.hpp"

#ifndef LCG_VERSION
#define LCG_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace lcg;

namespace {

struct BudgetExceeded : Error {
  using Error::Error;
};

using Clock = std::chrono::steady_clock;

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void check_schema(const json& j) {
  if (!j.is_object()) throw ConfigError("/: expected an object");
  if (!j.contains("schema")) throw ConfigError("/schema: missing");
  if (j["schema"] != kSchema) throw ConfigError("/schema: expected \"" + std::string(kSchema) + "\"");
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Common {
  std::string config, out = ".", checkpoint;
  std::int64_t seed = -1;
  int threads = 0;
  double budget = 0;
};

json provenance(const std::string& config_text, std::uint64_t seed) {
  return {{"version", LCG_VERSION}, {"config_hash", fnv1a(config_text)}, {"seed", seed}, {"hbar", kHbar}};
}

std::uint64_t pick_seed(const Common& c, const json& cfg) {
  if (c.seed >= 0) return static_cast<std::uint64_t>(c.seed);
  if (cfg.contains("seed")) {
    if (!cfg["seed"].is_number_unsigned()) throw ConfigError("/seed: expected a non-negative integer");
    return cfg["seed"].get<std::uint64_t>();
  }
  return 0;
}

void check_budget(const Common& c, Clock::time_point t0) {
  if (c.budget > 0 && std::chrono::duration<double>(Clock::now() - t0).count() > c.budget)
    throw BudgetExceeded("budget of " + g17(c.budget) + " s exceeded");
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int cmd_herald(const Common& c) {
  const auto t0 = Clock::now();
  json cfg = read_json(c.config);
  check_schema(cfg);
  require_keys(cfg, "", {"schema", "circuit", "seed"});
  if (!cfg.contains("circuit")) throw ConfigError("/circuit: missing");
  CircuitSpec spec = circuit_from_json(cfg["circuit"]);
  const std::uint64_t seed = pick_seed(c, cfg);

  auto h = herald(spec);
  auto sq = squeezing_summary(h.state);
  const double xi = gkp_nonlinear_squeezing(h.state).db;
  check_budget(c, t0);

  json summary = {{"log_prob", h.log_prob},
                  {"delta_x_dB", sq.x.db},
                  {"delta_p_dB", sq.p.db},
                  {"delta_s_dB", sq.delta_s_db},
                  {"xi_dB", xi},
                  {"n_weights", h.state.full_count()},
                  {"runtime_ms", ms_since(t0)},
                  {"seed", seed},
                  {"conventions", {{"hbar", kHbar}}},
                  {"provenance", provenance(cfg.dump(), seed)}};
  fs::create_directories(c.out);
  save_state(h.state, (fs::path(c.out) / "state.json").string());
  write_json(fs::path(c.out) / "summary.json", summary);
  return 0;
}

struct Range {
  double lo, hi;
  int n;
};

Range parse_range(const std::string& s) {
  Range r{};
  char tail;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &r.lo, &r.hi, &r.n, &tail) != 3 || r.n < 1 || !(r.hi >= r.lo))
    throw ConfigError("--grid: expected min:max:n, got \"" + s + "\"");
  return r;
}

int cmd_wigner(const Common& c, const std::string& grid) {
  const auto t0 = Clock::now();
  const auto comma = grid.find(',');
  if (comma == std::string::npos) throw ConfigError("--grid: expected \"xmin:xmax:n,pmin:pmax:n\"");
  Range x = parse_range(grid.substr(0, comma)), p = parse_range(grid.substr(comma + 1));
  LcogState s = load_state(c.checkpoint);
  if (s.num_modes != 1) throw ConfigError(c.checkpoint + ": Wigner grids need a single-mode state");
  auto pts = grid_points(x.lo, x.hi, x.n, p.lo, p.hi, p.n);
  auto w = wigner_grid(s, pts);
  check_budget(c, t0);
  std::ostringstream os;
  os << "x,p,W\n";
  for (std::size_t i = 0; i < pts.size(); ++i) os << g17(pts[i](0)) << ',' << g17(pts[i](1)) << ',' << g17(w[i]) << '\n';
  fs::path out = c.out;
  if (fs::is_directory(out)) out /= "wigner.csv";
  std::ifstream in(c.checkpoint);
  std::stringstream text;
  text << in.rdbuf();
  write_text(out, os.str());
  write_json(out.string() + ".json", {{"grid", grid},
                                      {"points", pts.size()},
                                      {"runtime_ms", ms_since(t0)},
                                      {"conventions", {{"hbar", kHbar}}},
                                      {"provenance", provenance(text.str(), 0)}});
  return 0;
}

int cmd_optimize(const Common& c) {
  const auto t0 = Clock::now();
  json cfg = read_json(c.config);
  check_schema(cfg);
  require_keys(cfg, "", {"schema", "circuit", "cost", "optimizer", "seed"});
  if (!cfg.contains("circuit")) throw ConfigError("/circuit: missing");
  CircuitSpec spec = circuit_from_json(cfg["circuit"]);
  CostSpec cost = cfg.contains("cost") ? cost_from_json(cfg["cost"]) : CostSpec{};
  const std::uint64_t seed = pick_seed(c, cfg);

  json o = cfg.value("optimizer", json::object());
  require_keys(o, "/optimizer", {"n_hops", "step", "temperature", "max_iter", "gtol", "random_start", "loss_eta"});
  LocalOptions lo;
  lo.max_iter = o.value("max_iter", lo.max_iter);
  lo.gtol = o.value("gtol", lo.gtol);
  const int n_hops = o.value("n_hops", 0);
  if (n_hops < 0) throw ConfigError("/optimizer/n_hops: must be non-negative");
  std::vector<double> etas = o.value("loss_eta", std::vector<double>{});
  for (double e : etas)
    if (!(e > 0 && e <= 1)) throw ConfigError("/optimizer/loss_eta: values must lie in (0, 1]");

  if (o.value("random_start", false)) {
    std::mt19937_64 rng(seed);
    Bounds b = param_bounds(spec);
    Vec x(b.lo.size());
    for (int i = 0; i < x.size(); ++i) x(i) = std::uniform_real_distribution<double>(b.lo(i), b.hi(i))(rng);
    spec = with_params(spec, x);
  }

  OptimizationReport rep;
  if (n_hops == 0) {
    lo.budget_seconds = c.budget;
    rep = local_minimize(spec, cost, lo);
    rep.seed = seed;
  } else {
    rep = basin_hop(spec, cost, n_hops, seed, lo, c.budget);
  }
  json out = report_to_json(rep);
  if (!etas.empty() && !rep.budget_exhausted) {
    json rows = json::array();
    for (const auto& r : reoptimize_with_loss(rep.spec, etas, cost, lo))
      rows.push_back({{"eta", r.eta}, {"original", report_to_json(r.original)},
                      {"reoptimized", report_to_json(r.reoptimized)}});
    out["loss_rows"] = rows;
  }
  out["runtime_ms"] = ms_since(t0);
  out["conventions"] = {{"hbar", kHbar}};
  out["provenance"] = provenance(cfg.dump(), seed);
  std::ostringstream trace;
  trace << "step,best_cost\n";
  for (std::size_t i = 0; i < rep.trace.size(); ++i) trace << i << ',' << g17(rep.trace[i]) << '\n';
  write_json(fs::path(c.out) / "report.json", out);
  write_text(fs::path(c.out) / "trace.csv", trace.str());
  if (rep.budget_exhausted) {
    std::cerr << "lcg_sim: budget exhausted; best point so far written\n";
    return 4;
  }
  if (rep.failed) throw NumericalStabilityError(rep.message);
  return 0;
}

int cmd_reduce(const Common& c, double eps, double k_std) {
  const auto t0 = Clock::now();
  LcogState s = load_state(c.checkpoint);
  ReduceOptions opt;
  opt.eps_out = eps;
  opt.k_std = k_std;
  auto rep = rank_reduce_report(s, opt);
  const double fid = normalized_overlap(s, rep.state);
  check_budget(c, t0);
  json j = reduce_report_to_json(rep);
  j["fidelity"] = fid;
  j["k_std"] = k_std;
  j["input_count"] = s.full_count();
  j["runtime_ms"] = ms_since(t0);
  j["conventions"] = {{"hbar", kHbar}};
  std::ifstream in(c.checkpoint);
  std::stringstream text;
  text << in.rdbuf();
  j["provenance"] = provenance(text.str(), 0);
  fs::create_directories(c.out);
  save_state(rep.state, (fs::path(c.out) / "state.json").string());
  write_json(fs::path(c.out) / "reduce.json", j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-combination-of-Gaussians simulator for heralded CV circuits"};
  app.require_subcommand(1);
  Common c;
  std::string grid = "-6:6:121,-6:6:121";
  double eps = 0.0, k_std = 6.0;

  auto common = [&](CLI::App* sub, bool config) {
    if (config) sub->add_option("--config", c.config, "JSON config")->required();
    sub->add_option("--out", c.out, "output directory (or CSV file for wigner)");
    sub->add_option("--seed", c.seed, "RNG seed (overrides the config)");
    sub->add_option("--threads", c.threads, "worker threads")->envname("LCG_SIM_THREADS");
    sub->add_option("--budget-seconds", c.budget, "wall-clock budget, 0 = unlimited");
  };
  auto* h = app.add_subcommand("herald", "herald a GBS circuit and write a checkpoint + summary");
  common(h, true);
  auto* w = app.add_subcommand("wigner", "evaluate the Wigner function of a checkpoint on a grid");
  common(w, false);
  w->add_option("--checkpoint", c.checkpoint)->required();
  w->add_option("--grid", grid, "xmin:xmax:n,pmin:pmax:n");
  auto* o = app.add_subcommand("optimize", "optimize circuit parameters");
  common(o, true);
  auto* r = app.add_subcommand("reduce", "rank-reduce a single-mode checkpoint");
  common(r, false);
  r->add_option("--checkpoint", c.checkpoint)->required();
  r->add_option("--eps", eps, "output ring radius, 0 = automatic");
  r->add_option("--kstd", k_std, "Chebyshev cutoff in standard deviations (mixed states)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c.threads > 0) set_num_threads(c.threads);
    if (*h) return cmd_herald(c);
    if (*w) return cmd_wigner(c, grid);
    if (*o) return cmd_optimize(c);
    if (*r) return cmd_reduce(c, eps, k_std);
  } catch (const ConfigError& e) {
    std::cerr << "lcg_sim: config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "lcg_sim: config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalStabilityError& e) {
    std::cerr << "lcg_sim: numerical stability: " << e.what() << '\n';
    return 3;
  } catch (const BudgetExceeded& e) {
    std::cerr << "lcg_sim: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "lcg_sim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
