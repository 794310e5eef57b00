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

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lcg/types.hpp"

namespace lcg {

// Returns f(x) and fills grad when it is non-null.
using Objective = std::function<double(const Vec& x, Vec* grad)>;

struct Bounds {
  Vec lo, hi;
  Vec clip(const Vec& x) const { return x.cwiseMax(lo).cwiseMin(hi); }
};

struct LocalOptions {
  int max_iter = 200;
  double gtol = 1e-7;
  double ftol = 1e-13;
  int memory = 10;
  double budget_seconds = 0.0;  // 0 = unlimited
};

struct LocalResult {
  Vec x;
  double f = 0;
  Vec g;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  bool failed = false;
  bool budget_exhausted = false;
  std::string message;
  std::vector<double> trace;  // best value after each iteration
};

// Projected limited-memory BFGS with a backtracking projected line search.
LocalResult minimize_lbfgsb(const Objective& f, const Vec& x0, const Bounds& b, const LocalOptions& opt = {});

struct HopOptions {
  int n_hops = 20;
  double step = 0.5;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  LocalOptions local;
  double budget_seconds = 0.0;
};

// Best-ever result over local minimizations started from perturbed accepted points.
LocalResult basin_hop(const Objective& f, const Vec& x0, const Bounds& b, const HopOptions& opt = {});

}  // namespace lcg
