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

// Acceptance harness: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lcg/characterize.hpp"
#include "lcg/gbs.hpp"
#include "lcg/grad.hpp"
#include "lcg/measure.hpp"
#include "lcg/phase_space.hpp"
#include "lcg/povm.hpp"
#include "lcg/stellar.hpp"

using namespace lcg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// rho_nn of a normalised single-mode state with vacuum covariances.
double fock_population(const LcogState& s, int n) {
  return coherent_to_fock_diagonal(coherent_terms(s), n)(n);
}

// 1 / N for the (n+1)-point ring, summed directly.
double inverse_norm(int n, double eps) {
  double tail = 0;
  for (int j = 1; j < 60; ++j) {
    int m = n + j * (n + 1);
    tail += std::exp(std::lgamma(n + 1.0) + 2.0 * (m - n) * std::log(eps) - std::lgamma(m + 1.0));
  }
  return 1.0 / (1.0 + tail);
}

// Fock amplitudes of sum_k c_k |alpha_k> built from truncated coherent-state expansions.
double ring_oracle(int n, double eps) {
  const int K = n + 1, M = 160;
  std::vector<cd> c(K), psi(M + 1, 0.0);
  for (int k = 0; k < K; ++k)
    c[k] = std::exp(0.5 * eps * eps + 0.5 * std::lgamma(n + 1.0) - n * std::log(eps)) / double(K) *
           std::polar(1.0, -2 * kPi * k * n / K);
  for (int k = 0; k < K; ++k) {
    cd alpha = std::polar(eps, 2 * kPi * k / K);
    cd term = c[k] * std::exp(-0.5 * eps * eps);
    for (int m = 0; m <= M; ++m) {
      psi[m] += term;
      term *= alpha / std::sqrt(m + 1.0);
    }
  }
  double tot = 0;
  for (auto v : psi) tot += std::norm(v);
  return std::norm(psi[n]) / tot;
}

Outcome criterion1() {
  double worst = 0, worst_slope = 0;
  for (int n = 1; n <= 6; ++n) {
    std::vector<double> le, li;
    for (double target : {1e-3, 1e-4, 1e-5}) {
      double eps = default_ring_radius(n, target);
      std::vector<cd> amp(n + 1, 0.0);
      amp[n] = 1.0;
      auto s = normalized(fock_superposition_state(amp, eps));
      double ov = fock_population(s, n);
      double oracle = ring_oracle(n, eps);
      double inv = inverse_norm(n, eps);
      worst = std::max({worst, std::abs(ov - inv), std::abs(oracle - inv)});
      le.push_back(std::log(eps));
      li.push_back(std::log(1.0 - ov));
    }
    double mx = (le[0] + le[1] + le[2]) / 3, my = (li[0] + li[1] + li[2]) / 3, sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
      sxy += (le[i] - mx) * (li[i] - my);
      sxx += (le[i] - mx) * (le[i] - mx);
    }
    double slope = sxy / sxx;
    worst_slope = std::max(worst_slope, std::abs(slope / (2.0 * (n + 1)) - 1.0));
  }
  return {worst < 1e-9 && worst_slope < 0.05,
          fmt("max |overlap - 1/N| = %.2e, worst slope deviation %.2f%%", worst, 100 * worst_slope)};
}

Outcome criterion2() {
  LcogState s = apply_symplectic(vacuum(2), two_mode_squeeze_symplectic(0.5, 0.0), {0, 1});
  auto h = herald_fock(s, {2});
  const double t = std::tanh(0.5);
  const double exact = (1 - t * t) * std::pow(t, 4);
  const double p = std::exp(h.log_prob);
  const double fid = fock_population(h.state, 2);
  return {rel(p, exact) < 1e-5 && fid >= 1 - 1e-5,
          fmt("p = %.10f (exact %.10f, rel %.1e), fidelity to |2> = %.8f", p, exact, rel(p, exact), fid)};
}

CircuitSpec reference_circuit(int n) {
  CircuitSpec c;
  c.N = 4;
  c.topology = Topology::clements;
  std::vector<double> db = n == 8 ? std::vector<double>{-10.02, -13.15, -15.00, 12.04}
                                  : std::vector<double>{-8.20, -11.52, 12.22, -12.96};
  std::vector<double> th = n == 8 ? std::vector<double>{1.45, 0.46, 1.37, 0.68, 0.10, 1.27}
                                  : std::vector<double>{1.02, 0.95, 0.74, 0.74, 0.23, 1.46};
  c.r.resize(4);
  c.theta.resize(6);
  for (int i = 0; i < 4; ++i) c.r(i) = db_to_r(db[i]);
  for (int i = 0; i < 6; ++i) c.theta(i) = th[i];
  c.pattern = {n, n, n};
  return c;
}

Outcome criterion3() {
  struct Row {
    int n;
    double dx, dp, ds, p;
  };
  bool ok = true;
  std::string detail;
  for (Row row : {Row{8, 8.35, 11.73, 9.72, 3.47e-5}, Row{9, 8.37, 12.38, 9.93, 7.67e-6}}) {
    auto h = herald(reference_circuit(row.n));
    auto sq = squeezing_summary(h.state);
    const double p = std::exp(h.log_prob);
    bool r = std::abs(sq.x.db - row.dx) <= 0.2 && std::abs(sq.p.db - row.dp) <= 0.2 &&
             std::abs(sq.delta_s_db - row.ds) <= 0.2 && rel(p, row.p) <= 0.15;
    ok = ok && r;
    detail += fmt("n=%d: dx %.2f dp %.2f ds %.2f dB, p %.3e; ", row.n, sq.x.db, sq.p.db, sq.delta_s_db, p);
  }
  return {ok, detail};
}

// Stage-wise inverse cascade: the carrier meets a fresh squeezed vacuum on a
// beam splitter, the carrier port is heralded, and the output is rank-reduced.
struct Bifurcation {
  double delta_s_db, log_prob, direct_db;
};

Bifurcation bifurcate(const CircuitSpec& c) {
  auto squeezed = [&](int j) { return apply_symplectic(as_reduced(vacuum(1)), squeeze_symplectic(-c.r(j), 0.0), {0}); };
  LcogState carrier = squeezed(0);
  double log_prob = 0;
  for (int k = 0; k + 1 < c.N; ++k) {
    LcogState s = apply_symplectic(tensor(carrier, squeezed(k + 1)), beamsplitter_symplectic(c.theta(k), 0.0), {0, 1});
    const int n = c.pattern[k];
    const int K = std::max(n + 1, c.ring_points);
    auto m = post_select(s, 0, fock_coherent_povm(n, default_ring_radius(n, c.ring_infidelity, K), true, K));
    log_prob += m.log_prob;
    ReduceOptions ro;
    ro.points = K;
    carrier = rank_reduce_report(m.state, ro).state;
  }
  // Same circuit heralded in one shot on default rings, for comparison.
  CircuitSpec d = c;
  d.ring_points = 0;
  d.ring_infidelity = 1e-6;
  double direct = std::nan("");
  try {
    direct = squeezing_summary(herald(d).state).delta_s_db;
  } catch (const NumericalStabilityError&) {
  }
  return {squeezing_summary(carrier).delta_s_db, log_prob, direct};
}

Outcome criterion4() {
  // Best phase-less inverse-cascade point found by seeded local search at n = 8.
  CircuitSpec c;
  c.N = 4;
  c.topology = Topology::inverse_cascade;
  c.r.resize(4);
  c.theta.resize(3);
  c.r << -0.79900848842549466, 1.5316894728119679, -1.6453262092343641, 1.2451430098918943;
  c.theta << 0.88501682606922472, 0.78070784894912237, 1.27001028515745;
  // Wide rings keep the conditioning of every stage near unity.
  c.ring_points = 30;
  c.ring_infidelity = 1e-12;
  struct Row {
    int n;
    double ds, p;
  };
  bool ok = true;
  std::string detail;
  for (Row row : {Row{8, 8.62, 4.22e-5}, Row{10, 8.89, 2.19e-5}}) {
    c.pattern = {row.n, row.n, row.n};
    auto b = bifurcate(c);
    const double p = std::exp(b.log_prob);
    ok = ok && std::abs(b.delta_s_db - row.ds) <= 0.05 && rel(p, row.p) <= 0.05;
    detail += fmt("n=%d: ds %.2f dB (target %.2f, unreduced %.2f), p %.3e (target %.2e); ", row.n, b.delta_s_db,
                  row.ds, b.direct_db, p, row.p);
  }
  return {ok, detail};
}

Outcome criterion5() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0;
  int circuits = 0, skipped = 0;
  const double h = 1e-6;
  Vec alpha(2);
  alpha << 0.3, -0.2;
  const LcogState target = coherent_state(cd(0.3, 0.2));
  while (circuits < 20) {
    CircuitSpec c;
    c.N = 2 + static_cast<int>(U(rng) * 3);
    c.topology = static_cast<Topology>(static_cast<int>(U(rng) * 3));
    c.r.resize(c.N);
    c.theta.resize(bs_count(c.topology, c.N));
    for (int i = 0; i < c.N; ++i) c.r(i) = (U(rng) * 2 - 1) * 1.0;
    for (int i = 0; i < c.theta.size(); ++i) c.theta(i) = 0.2 + U(rng) * 1.1;
    for (int i = 0; i + 1 < c.N; ++i) c.pattern.push_back(static_cast<int>(U(rng) * 3));
    if (circuits % 2) c.eta = Vec::Constant(c.N, 0.9 + 0.1 * U(rng));
    c.ring_points = 10;
    c.ring_infidelity = 1e-12;
    try {
      auto hr = herald(c, true);
      Vec an_lp = grad_log_prob(hr.state);
      CVec an_ch = grad_char_fun(hr.state, alpha);
      Vec an_ov = grad_overlap(hr.state, target);
      Vec an_dx = grad_effective_squeezing(hr.state, Quadrature::x);
      Vec an_dp = grad_effective_squeezing(hr.state, Quadrature::p);
      Vec x = get_params(c);
      const int P = static_cast<int>(x.size());
      Vec fd_lp(P), fd_ov(P), fd_dx(P), fd_dp(P);
      CVec fd_ch(P);
      for (int i = 0; i < P; ++i) {
        Vec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        auto a = herald(with_params(c, xp)), b = herald(with_params(c, xm));
        fd_lp(i) = (a.log_prob - b.log_prob) / (2 * h);
        fd_ch(i) = (char_fun(a.state, alpha) - char_fun(b.state, alpha)) / (2 * h);
        fd_ov(i) = (overlap(a.state, target) - overlap(b.state, target)) / (2 * h);
        fd_dx(i) = (effective_squeezing(a.state, Quadrature::x).value -
                    effective_squeezing(b.state, Quadrature::x).value) / (2 * h);
        fd_dp(i) = (effective_squeezing(a.state, Quadrature::p).value -
                    effective_squeezing(b.state, Quadrature::p).value) / (2 * h);
      }
      auto err = [](const auto& a, const auto& f) {
        return (a - f).cwiseAbs().maxCoeff() / std::max(f.cwiseAbs().maxCoeff(), 1e-3);
      };
      worst = std::max({worst, err(an_lp, fd_lp), err(an_ch, fd_ch), err(an_ov, fd_ov), err(an_dx, fd_dx),
                        err(an_dp, fd_dp)});
      ++circuits;
    } catch (const NumericalStabilityError&) {
      ++skipped;
    }
  }
  return {worst < 1e-5, fmt("20 circuits (%d redrawn after stability errors), worst relative error %.2e",
                            skipped, worst)};
}

double ppnrd_fock(int k, int M, const std::function<double(int)>& pn) {
  double out = 0, cmk = std::exp(std::lgamma(M + 1.0) - std::lgamma(k + 1.0) - std::lgamma(M - k + 1.0));
  for (int n = k; n < 400; ++n) {
    double acc = 0, bin = 1;
    for (int i = 0; i <= k; ++i) {
      acc += bin * ((i % 2) ? -1.0 : 1.0) * std::pow(double(k - i) / M, n);
      bin = bin * (k - i) / (i + 1);
    }
    out += cmk * acc * pn(n);
  }
  return out;
}

Outcome criterion6() {
  double worst = 0, worst_sum = 0;
  for (double nbar : {0.3, 1.0, 2.0}) {
    auto st = thermal_state(nbar);
    auto pn = [&](int n) { return std::exp(n * std::log(nbar) - (n + 1) * std::log(nbar + 1)); };
    for (int M = 1; M <= 4; ++M) {
      double sum = 0;
      for (int k = 0; k <= M; ++k) {
        double p = outcome_probability(st, 0, ppnrd_povm(k, M));
        worst = std::max(worst, std::abs(p - ppnrd_fock(k, M, pn)));
        sum += p;
      }
      worst_sum = std::max(worst_sum, std::abs(sum - 1));
    }
  }
  for (cd alpha : {cd(0.4, 0.0), cd(0.8, -0.6), cd(0.0, 1.5)}) {
    auto st = coherent_state(alpha);
    const double a2 = std::norm(alpha);
    auto pn = [&](int n) { return std::exp(-a2 + n * std::log(a2) - std::lgamma(n + 1.0)); };
    for (int M = 1; M <= 4; ++M) {
      double sum = 0;
      for (int k = 0; k <= M; ++k) {
        double p = outcome_probability(st, 0, ppnrd_povm(k, M));
        worst = std::max(worst, std::abs(p - ppnrd_fock(k, M, pn)));
        sum += p;
      }
      worst_sum = std::max(worst_sum, std::abs(sum - 1));
    }
  }
  return {worst < 1e-8 && worst_sum < 1e-9,
          fmt("max |p - Fock formula| = %.2e, max |sum_k p - 1| = %.2e", worst, worst_sum)};
}

Outcome criterion7() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0, 1);
  CircuitSpec c;
  c.N = 4;
  c.r.resize(4);
  c.theta.resize(6);
  for (int i = 0; i < 4; ++i) c.r(i) = (U(rng) - 0.5) * 1.6;
  for (int i = 0; i < 6; ++i) c.theta(i) = 0.3 + U(rng) * 0.9;
  c.pattern = {4, 3, 2};
  c.ring_points = 12;
  c.ring_infidelity = 1e-14;
  auto pure = herald(c);
  auto rp = rank_reduce_report(pure.state);
  const double ov = normalized_overlap(pure.state, rp.state);
  auto a = squeezing_summary(pure.state), b = squeezing_summary(rp.state);
  const double shift = std::max(std::abs(a.x.db - b.x.db), std::abs(a.p.db - b.p.db));
  c.eta = Vec::Constant(4, 0.95);
  auto mixed = herald(c);
  ReduceOptions mo;
  mo.k_std = 6;
  auto rm = rank_reduce_report(mixed.state, mo);
  const double ovm = normalized_overlap(mixed.state, rm.state);
  const long count = rp.state.full_count();
  return {count == 100 && ov >= 1 - 1e-6 && shift < 1e-5 && ovm >= 1 - 1e-4,
          fmt("count %ld, pure overlap %.10f, squeezing shift %.1e dB, mixed overlap %.10f (r'=%d)", count, ov, shift,
              ovm, rm.rank)};
}

Outcome criterion8() {
  CircuitSpec c;
  c.N = 4;
  c.r.resize(4);
  c.theta.resize(6);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 4; ++i) c.r(i) = (U(rng) * 2 - 1) * 1.2;
  for (int i = 0; i < 6; ++i) c.theta(i) = 0.1 + U(rng) * (kPi / 2 - 0.2);
  c.pattern = {4, 4, 4};
  c.ring_points = 8;
  LocalOptions lo;
  lo.max_iter = 200;
  auto opt = local_minimize(c, CostSpec{}, lo);
  lo.max_iter = 100;
  auto rows = reoptimize_with_loss(opt.spec, {0.90, 0.95, 0.99}, CostSpec{}, lo);
  bool ok = !opt.failed;
  std::string detail = fmt("lossless optimum %.2f dB (p %.2e); ", opt.delta_s_db, std::exp(opt.log_prob));
  for (const auto& r : rows) {
    ok = ok && !r.reoptimized.failed && r.reoptimized.delta_s_db >= r.original.delta_s_db;
    detail += fmt("eta %.2f: %.2f -> %.2f dB, p %.2e -> %.2e; ", r.eta, r.original.delta_s_db,
                  r.reoptimized.delta_s_db, std::exp(r.original.log_prob), std::exp(r.reoptimized.log_prob));
  }
  return {ok, detail};
}

Outcome criterion9() {
  bool raised_povm = false, raised_herald = false;
  double p_bad = -1;
  try {
    fock_coherent_povm(8, 0.05);
  } catch (const NumericalStabilityError&) {
    raised_povm = true;
  }
  CircuitSpec c = reference_circuit(8);
  c.eps = 0.05;
  try {
    p_bad = std::exp(herald(c).log_prob);
  } catch (const NumericalStabilityError&) {
    raised_herald = true;
  }
  return {raised_povm && raised_herald,
          raised_herald ? std::string("under-radiused ring (eps = 0.05, n = 8) raised NumericalStabilityError")
                        : fmt("no error raised; p = %.3e", p_bad)};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<int, std::function<Outcome()>>> all = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (auto& [id, fn] : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s  %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), dt);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed ? 1 : 0;
}
