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

#include <vector>

#include "lcg/lcog_state.hpp"

namespace lcg::detail {

// One output term of a pairwise product between two LCoGs.
struct PairJob {
  int m;
  int n;
  bool conj_a;
  bool conj_b;
  double offset;
};

struct PairPlan {
  std::vector<PairJob> jobs;
  int num_real = 0;
  bool reduced = false;
};

// Sector rules: R x R -> R, R x I -> I, I x I -> two I terms (b and conj b), -ln 2 each.
PairPlan plan_pairs(int na, int ka, bool ra, int nb, int kb, bool rb);

// Stable evaluation of Re sum exp(c).
// Neumaier-compensated accumulators; weighted sums here cancel heavily.
struct CompensatedSum {
  double sum = 0, comp = 0;
  void add(double t) {
    const double u = sum + t;
    comp += std::abs(sum) >= std::abs(t) ? (sum - u) + t : (t - u) + sum;
    sum = u;
  }
  double value() const { return sum + comp; }
};
struct ComplexCompensatedSum {
  CompensatedSum re, im;
  void add(cd t) {
    re.add(t.real());
    im.add(t.imag());
  }
  cd value() const { return {re.value(), im.value()}; }
};

struct RealSum {
  double log_abs = 0;  // log sum |exp(c)|
  double value = 0;    // Re sum exp(c - shift)
  double shift = 0;
  double kappa = 0;    // sum |exp(c)| / |Re sum exp(c)|
};
RealSum real_sum(const CVec& c);
RealSum real_sum(const CVec& c, int count);

// Conjugate a covariance only when it has an imaginary part.
inline bool is_real(const CMat& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

cd log_det(const CMat& a);

// Largest tolerated kappa * machine epsilon for a probability.
inline constexpr double kMaxRounding = 1e-5;

// Raises when the rounding error of a weighted sum can swamp its value.
double checked_log_prob(const RealSum& rs, const char* what);

}  // namespace lcg::detail
