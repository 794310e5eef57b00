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

#include "lcg/optimize.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <random>

namespace lcg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double projected_gnorm(const Vec& x, const Vec& g, const Bounds& b) {
  return (b.clip(x - g) - x).cwiseAbs().maxCoeff();
}

}  // namespace

LocalResult minimize_lbfgsb(const Objective& fun, const Vec& x0, const Bounds& b, const LocalOptions& opt) {
  const auto t0 = Clock::now();
  LocalResult res;
  const int n = static_cast<int>(x0.size());
  Vec x = b.clip(x0);
  Vec g(n);
  double fx;
  auto eval = [&](const Vec& p, Vec* gp) -> double {
    ++res.evaluations;
    try {
      double v = fun(p, gp);
      if (!std::isfinite(v) || (gp && !gp->allFinite())) return std::numeric_limits<double>::infinity();
      return v;
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  fx = eval(x, &g);
  res.x = x;
  res.f = fx;
  res.g = g;
  if (!std::isfinite(fx)) {
    res.failed = true;
    res.message = "objective failed at the starting point";
    return res;
  }
  std::deque<Vec> S, Y;
  for (int it = 0; it < opt.max_iter; ++it) {
    if (projected_gnorm(x, g, b) < opt.gtol) {
      res.converged = true;
      res.message = "projected gradient below tolerance";
      break;
    }
    if (opt.budget_seconds > 0 && seconds_since(t0) > opt.budget_seconds) {
      res.budget_exhausted = true;
      res.message = "time budget exhausted";
      break;
    }
    // Variables pinned at a bound with the gradient pointing outward stay fixed.
    std::vector<char> fixed(n, 0);
    for (int i = 0; i < n; ++i) {
      if ((x(i) <= b.lo(i) && g(i) > 0) || (x(i) >= b.hi(i) && g(i) < 0)) fixed[i] = 1;
    }
    Vec q = g;
    for (int i = 0; i < n; ++i)
      if (fixed[i]) q(i) = 0;
    std::vector<double> alpha(S.size());
    for (int k = static_cast<int>(S.size()) - 1; k >= 0; --k) {
      alpha[k] = S[k].dot(q) / Y[k].dot(S[k]);
      q -= alpha[k] * Y[k];
    }
    if (!S.empty()) q *= S.back().dot(Y.back()) / Y.back().dot(Y.back());
    for (size_t k = 0; k < S.size(); ++k) {
      double beta = Y[k].dot(q) / Y[k].dot(S[k]);
      q += (alpha[k] - beta) * S[k];
    }
    Vec d = -q;
    for (int i = 0; i < n; ++i)
      if (fixed[i]) d(i) = 0;
    if (g.dot(d) >= 0) {
      S.clear();
      Y.clear();
      d = -g;
      for (int i = 0; i < n; ++i)
        if (fixed[i]) d(i) = 0;
    }
    double t = 1.0;
    if (S.empty()) t = std::min(1.0, 1.0 / std::max(d.cwiseAbs().maxCoeff(), 1e-300));
    Vec xn, gn(n);
    double fn = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      xn = b.clip(x + t * d);
      fn = eval(xn, &gn);
      if (std::isfinite(fn) && fn <= fx + 1e-4 * g.dot(xn - x)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (!S.empty()) {
        S.clear();
        Y.clear();
        continue;
      }
      res.message = "line search failed";
      break;
    }
    Vec s = xn - x, y = gn - g;
    const double df = fx - fn;
    x = xn;
    g = gn;
    fx = fn;
    ++res.iterations;
    res.trace.push_back(fx);
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      S.push_back(s);
      Y.push_back(y);
      if (static_cast<int>(S.size()) > opt.memory) {
        S.pop_front();
        Y.pop_front();
      }
    }
    if (df >= 0 && df <= opt.ftol * std::max({std::abs(fx), std::abs(fx + df), 1.0})) {
      res.converged = projected_gnorm(x, g, b) < std::sqrt(opt.gtol);
      res.message = "relative reduction below tolerance";
      break;
    }
  }
  if (res.message.empty()) res.message = "iteration limit reached";
  res.x = x;
  res.f = fx;
  res.g = g;
  return res;
}

LocalResult basin_hop(const Objective& fun, const Vec& x0, const Bounds& b, const HopOptions& opt) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> hop(-opt.step, opt.step);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LocalResult cur = minimize_lbfgsb(fun, x0, b, opt.local);
  LocalResult best = cur;
  std::vector<double> trace = {best.f};
  for (int h = 0; h < opt.n_hops; ++h) {
    if (opt.budget_seconds > 0 && seconds_since(t0) > opt.budget_seconds) {
      best.budget_exhausted = true;
      break;
    }
    Vec start = cur.x;
    for (int i = 0; i < start.size(); ++i) start(i) += hop(rng);
    start = b.clip(start);
    LocalResult trial = minimize_lbfgsb(fun, start, b, opt.local);
    const double u = unit(rng);
    if (!trial.failed) {
      bool accept = trial.f <= cur.f || (opt.temperature > 0 && u < std::exp(-(trial.f - cur.f) / opt.temperature));
      if (accept) cur = trial;
      if (trial.f < best.f) best = trial;
    }
    trace.push_back(best.f);
  }
  best.trace = trace;
  return best;
}

}  // namespace lcg
