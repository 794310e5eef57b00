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

#include <optional>
#include <vector>

#include "lcg/phase_space.hpp"
#include "lcg/types.hpp"

namespace lcg {

// Forward-mode partial derivatives carried alongside a state.
struct GradientTape {
  int n_g = 0;
  CMat d_log_weights;                     // n_w x n_g
  std::vector<CMat> d_means;              // n_g blocks of 2N x n_w
  std::vector<std::vector<CMat>> d_covs;  // [g][pool index]
  Vec d_log_prob;                         // accumulated d log p / d theta
};

// W(q) = Re sum_m exp(c_m) G_{mu_m, sigma_m}(q).
//
// Full form: conjugate pairs are stored explicitly and the sum is already real.
// Reduced form: the first num_k terms are real; every later term stands for
// itself plus its conjugate partner and carries the extra ln 2 in its weight.
struct LcogState {
  int num_modes = 0;
  CVec log_weights;
  CMat means;              // 2N x n_w
  std::vector<CMat> covs;  // covariance pool
  IVec cov_index;          // per-term pool index; empty when the pool has one entry
  int num_k = 0;
  bool reduced = false;
  int stellar_rank = 0;
  std::optional<GradientTape> tape;

  int num_weights() const { return static_cast<int>(log_weights.size()); }
  int dim() const { return 2 * num_modes; }
  bool shared_cov() const { return covs.size() == 1; }
  int cov_id(int m) const { return covs.size() == 1 ? 0 : cov_index(m); }
  const CMat& cov(int m) const { return covs[cov_id(m)]; }
  // Number of terms once written in full form.
  long full_count() const { return reduced ? 2L * num_weights() - num_k : num_weights(); }
  void check() const;
};

struct CoherentSuperposition {
  std::vector<cd> coeffs;
  std::vector<cd> alphas;
  cd z = 0.0;
};

// Wigner mean and log-weight of |alpha><beta|.
void coherent_outer(cd alpha, cd beta, cd& mu_x, cd& mu_p, cd& d);

LcogState vacuum(int num_modes);
LcogState gaussian_state(const Mat& cov, const Vec& mean);
LcogState coherent_state(cd alpha);
LcogState thermal_state(double nbar);
LcogState from_coherent_superposition(const CoherentSuperposition& spec, bool reduced = false);

LcogState tensor(const LcogState& a, const LcogState& b);

// Gates act on `modes`; S is 2k x 2k. dS / dd hold one derivative per tape parameter.
LcogState apply_symplectic(const LcogState& s, const Mat& S, const std::vector<int>& modes, const Vec& d = Vec(),
                           const std::vector<Mat>* dS = nullptr, const std::vector<Vec>* dd = nullptr);
LcogState apply_channel(const LcogState& s, const GaussianChannel& ch, const std::vector<int>& modes);

// log of Re sum exp(c); throws DegenerateState when the sum is not positive.
double log_norm(const LcogState& s);
LcogState normalized(const LcogState& s);

LcogState to_full_form(const LcogState& s);
LcogState to_reduced_form(const LcogState& s, double tol = 1e-9);

cd wigner(const LcogState& s, const Vec& q);

// Optional pruning of negligible terms; never applied implicitly.
LcogState prune(const LcogState& s, double rel_threshold = 1e-16);

}  // namespace lcg
