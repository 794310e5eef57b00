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

#include "lcg/gbs.hpp"

#include <algorithm>
#include <cmath>

#include "lcg/grad.hpp"
#include "lcg/measure.hpp"
#include "lcg/phase_space.hpp"
#include "lcg/povm.hpp"

namespace lcg {

void CircuitSpec::check() const {
  if (N < 1) throw InvalidArgument("circuit needs at least one mode");
  if (r.size() != N) throw InvalidArgument("expected " + std::to_string(N) + " squeezing parameters");
  if (theta.size() != bs_count(topology, N))
    throw InvalidArgument("expected " + std::to_string(bs_count(topology, N)) + " beamsplitter parameters");
  if (eta.size() != 0 && eta.size() != N) throw InvalidArgument("losses must be empty or one per mode");
  for (int i = 0; i < eta.size(); ++i)
    if (!(eta(i) >= 0.0 && eta(i) <= 1.0)) throw InvalidArgument("transmissivity outside [0, 1]");
  if (static_cast<int>(pattern.size()) != N - 1) throw InvalidArgument("pattern needs N-1 entries");
  for (int n : pattern)
    if (n < 0) throw InvalidArgument("negative photon number in pattern");
  if (!(ring_infidelity > 0.0 && ring_infidelity < 1.0)) throw InvalidArgument("ring infidelity must lie in (0, 1)");
  if (ring_points < 0) throw InvalidArgument("ring_points must be non-negative");
  if (detector == DetectorKind::ppnrd && fanout < 1) throw InvalidArgument("ppnrd fanout must be positive");
  if (detector == DetectorKind::click)
    for (int n : pattern)
      if (n > 1) throw InvalidArgument("click pattern entries must be 0 or 1");
  if (!r.allFinite() || !theta.allFinite()) throw InvalidArgument("non-finite circuit parameter");
}

int bs_count(Topology t, int N) { return t == Topology::clements ? N * (N - 1) / 2 : N - 1; }
int param_count(Topology t, int N) { return N + bs_count(t, N); }

std::vector<std::pair<int, int>> bs_layout(Topology t, int N) {
  std::vector<std::pair<int, int>> out;
  switch (t) {
    case Topology::clements:
      for (int col = 0; col < N; ++col)
        for (int i = col % 2; i + 1 < N; i += 2) out.emplace_back(i, i + 1);
      break;
    case Topology::inverse_cascade:
      for (int k = 0; k + 1 < N; ++k) out.emplace_back(k, k + 1);
      break;
    case Topology::cascade:
      for (int k = N - 2; k >= 0; --k) out.emplace_back(k, k + 1);
      break;
  }
  return out;
}

Vec get_params(const CircuitSpec& spec) {
  Vec x(spec.r.size() + spec.theta.size());
  x << spec.r, spec.theta;
  return x;
}

CircuitSpec with_params(const CircuitSpec& spec, const Vec& x) {
  const int M = bs_count(spec.topology, spec.N);
  if (x.size() != spec.N + M) throw InvalidArgument("parameter count mismatch");
  CircuitSpec out = spec;
  out.r = x.head(spec.N);
  out.theta = x.tail(M);
  return out;
}

Bounds param_bounds(const CircuitSpec& spec) {
  const int M = bs_count(spec.topology, spec.N);
  Bounds b;
  b.lo.resize(spec.N + M);
  b.hi.resize(spec.N + M);
  b.lo.head(spec.N).setConstant(-kSqueezeBound);
  b.hi.head(spec.N).setConstant(kSqueezeBound);
  b.lo.tail(M).setConstant(kThetaMargin);
  b.hi.tail(M).setConstant(kPi / 2 - kThetaMargin);
  return b;
}

SymplecticStack build_symplectic(const CircuitSpec& spec, bool derivatives) {
  spec.check();
  const int N = spec.N;
  const auto layout = bs_layout(spec.topology, N);
  const int M = static_cast<int>(layout.size());
  Mat Sq = Mat::Identity(2 * N, 2 * N);
  for (int j = 0; j < N; ++j) Sq.block(2 * j, 2 * j, 2, 2) = squeeze_symplectic(-spec.r(j), 0.0);
  std::vector<Mat> B(M);
  for (int k = 0; k < M; ++k)
    B[k] = embed(beamsplitter_symplectic(spec.theta(k), 0.0), {layout[k].first, layout[k].second}, N);
  // prefix[k] = B_{k-1} ... B_0, suffix[k] = B_{M-1} ... B_k
  std::vector<Mat> prefix(M + 1), suffix(M + 1);
  prefix[0] = Mat::Identity(2 * N, 2 * N);
  for (int k = 0; k < M; ++k) prefix[k + 1] = B[k] * prefix[k];
  suffix[M] = Mat::Identity(2 * N, 2 * N);
  for (int k = M - 1; k >= 0; --k) suffix[k] = suffix[k + 1] * B[k];
  SymplecticStack out;
  out.S = prefix[M] * Sq;
  if (!derivatives) return out;
  out.dS.reserve(N + M);
  for (int j = 0; j < N; ++j) {
    Mat dSq = Mat::Zero(2 * N, 2 * N);
    dSq.block(2 * j, 2 * j, 2, 2) = -d_symplectic(OpKind::squeeze, {-spec.r(j), 0.0}, 0);
    out.dS.push_back(prefix[M] * dSq);
  }
  for (int k = 0; k < M; ++k) {
    Mat dB = Mat::Zero(2 * N, 2 * N);
    const int a = layout[k].first, b = layout[k].second;
    Mat d = d_symplectic(OpKind::beamsplitter, {spec.theta(k), 0.0}, 0);
    dB.block(2 * a, 2 * a, 2, 2) = d.block(0, 0, 2, 2);
    dB.block(2 * a, 2 * b, 2, 2) = d.block(0, 2, 2, 2);
    dB.block(2 * b, 2 * a, 2, 2) = d.block(2, 0, 2, 2);
    dB.block(2 * b, 2 * b, 2, 2) = d.block(2, 2, 2, 2);
    out.dS.push_back(suffix[k + 1] * dB * prefix[k] * Sq);
  }
  return out;
}

namespace {

Povm detector_povm(const CircuitSpec& spec, int n) {
  switch (spec.detector) {
    case DetectorKind::pnrd_coherent:
    {
      const int K = std::max(n + 1, spec.ring_points);
      const double eps = spec.eps > 0 ? spec.eps : default_ring_radius(n, spec.ring_infidelity, K);
      return fock_coherent_povm(n, eps, spec.reduced, K);
    }
    case DetectorKind::ppnrd:
      return ppnrd_povm(n, spec.fanout);
    case DetectorKind::click:
      return click_povm(n > 0 ? ClickOutcome::click : ClickOutcome::no_click);
  }
  throw InvalidArgument("unknown detector");
}

}  // namespace

HeraldResult herald(const CircuitSpec& spec, bool gradients) {
  auto stack = build_symplectic(spec, gradients);
  const int N = spec.N;
  LcogState s = vacuum(N);
  if (spec.reduced) s = as_reduced(s);
  if (gradients) s = attach_gradients(s, static_cast<int>(stack.dS.size()));
  std::vector<int> all(N);
  for (int i = 0; i < N; ++i) all[i] = i;
  s = apply_symplectic(s, stack.S, all, Vec(), gradients ? &stack.dS : nullptr);
  if (spec.eta.size()) {
    for (int i = 0; i < N; ++i)
      if (spec.eta(i) < 1.0) s = apply_channel(s, channel_loss(spec.eta(i), 0.0), {i});
  }
  std::vector<Povm> povms;
  for (int n : spec.pattern) povms.push_back(detector_povm(spec, n));
  auto res = herald_sequence(s, povms);
  return {std::move(res.state), res.log_prob};
}

CostValue cost_eval(const CircuitSpec& spec, const CostSpec& cost, bool gradient) {
  auto h = herald(spec, gradient);
  CostValue out;
  out.log_prob = h.log_prob;
  out.squeezing = squeezing_summary(h.state);
  const double dx = out.squeezing.x.value, dp = out.squeezing.p.value;
  switch (cost.kind) {
    case CostKind::sum_delta:
      out.value = dx + dp;
      if (gradient)
        out.grad = grad_effective_squeezing(h.state, Quadrature::x) + grad_effective_squeezing(h.state, Quadrature::p);
      break;
    case CostKind::sum_delta_minus_prob: {
      const double p = std::exp(h.log_prob);
      out.value = 0.5 * (dx + dp) - cost.c * p;
      if (gradient)
        out.grad = 0.5 * (grad_effective_squeezing(h.state, Quadrature::x) +
                          grad_effective_squeezing(h.state, Quadrature::p)) -
                   cost.c * p * grad_log_prob(h.state);
      break;
    }
    case CostKind::infidelity:
      if (!cost.target) throw InvalidArgument("infidelity cost needs a target state");
      out.value = 1.0 - overlap(h.state, *cost.target);
      if (gradient) out.grad = -grad_overlap(h.state, *cost.target);
      break;
  }
  return out;
}

namespace {

void fill_report(OptimizationReport& rep, const CircuitSpec& spec, const CostSpec& cost) {
  auto h = herald(spec, false);
  auto sq = squeezing_summary(h.state);
  rep.spec = spec;
  rep.delta_x_db = sq.x.db;
  rep.delta_p_db = sq.p.db;
  rep.delta_s_db = sq.delta_s_db;
  rep.xi_db = gkp_nonlinear_squeezing(h.state).db;
  rep.log_prob = h.log_prob;
  (void)cost;
}

Objective make_objective(const CircuitSpec& spec, const CostSpec& cost) {
  return [spec, cost](const Vec& x, Vec* g) {
    auto v = cost_eval(with_params(spec, x), cost, g != nullptr);
    if (g) *g = v.grad;
    return v.value;
  };
}

OptimizationReport from_local(const CircuitSpec& spec, const CostSpec& cost, const LocalResult& r) {
  OptimizationReport rep;
  rep.cost = r.f;
  rep.trace = r.trace;
  rep.iterations = r.iterations;
  rep.converged = r.converged;
  rep.failed = r.failed;
  rep.budget_exhausted = r.budget_exhausted;
  rep.message = r.message;
  CircuitSpec best = with_params(spec, r.x);
  if (r.failed) {
    rep.spec = best;
    return rep;
  }
  fill_report(rep, best, cost);
  return rep;
}

}  // namespace

OptimizationReport evaluate_report(const CircuitSpec& spec, const CostSpec& cost) {
  OptimizationReport rep;
  rep.cost = cost_eval(spec, cost, false).value;
  rep.trace = {rep.cost};
  fill_report(rep, spec, cost);
  return rep;
}

OptimizationReport local_minimize(const CircuitSpec& spec, const CostSpec& cost, const LocalOptions& opt) {
  spec.check();
  auto r = minimize_lbfgsb(make_objective(spec, cost), get_params(spec), param_bounds(spec), opt);
  return from_local(spec, cost, r);
}

OptimizationReport basin_hop(const CircuitSpec& spec, const CostSpec& cost, int n_hops, std::uint64_t seed,
                             const LocalOptions& local, double budget_seconds) {
  spec.check();
  HopOptions ho;
  ho.n_hops = n_hops;
  ho.seed = seed;
  ho.local = local;
  ho.budget_seconds = budget_seconds;
  auto r = basin_hop(make_objective(spec, cost), get_params(spec), param_bounds(spec), ho);
  auto rep = from_local(spec, cost, r);
  rep.seed = seed;
  return rep;
}

std::vector<LossRow> reoptimize_with_loss(const CircuitSpec& spec_opt, const std::vector<double>& eta_grid,
                                          const CostSpec& cost, const LocalOptions& opt) {
  std::vector<LossRow> rows;
  for (double eta : eta_grid) {
    CircuitSpec lossy = spec_opt;
    lossy.eta = Vec::Constant(spec_opt.N, eta);
    LossRow row;
    row.eta = eta;
    row.original = evaluate_report(lossy, cost);
    row.reoptimized = local_minimize(lossy, cost, opt);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string topology_name(Topology t) {
  switch (t) {
    case Topology::clements: return "clements";
    case Topology::cascade: return "cascade";
    case Topology::inverse_cascade: return "inverse_cascade";
  }
  return "";
}

Topology parse_topology(const std::string& s) {
  if (s == "clements") return Topology::clements;
  if (s == "cascade") return Topology::cascade;
  if (s == "inverse_cascade") return Topology::inverse_cascade;
  throw ConfigError("unknown topology '" + s + "'");
}

std::string detector_name(DetectorKind k) {
  switch (k) {
    case DetectorKind::pnrd_coherent: return "pnrd_coherent";
    case DetectorKind::ppnrd: return "ppnrd";
    case DetectorKind::click: return "click";
  }
  return "";
}

DetectorKind parse_detector(const std::string& s) {
  if (s == "pnrd_coherent") return DetectorKind::pnrd_coherent;
  if (s == "ppnrd") return DetectorKind::ppnrd;
  if (s == "click") return DetectorKind::click;
  throw ConfigError("unknown detector '" + s + "'");
}

}  // namespace lcg
