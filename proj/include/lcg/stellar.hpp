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

namespace lcg {

// Inverse of coherent_outer: a vacuum-covariance Gaussian with complex mean
// (mu_x, mu_p) and unit weight is exp(d) * W[|alpha><beta|].
void gaussian_to_coherent_outer(cd mu_x, cd mu_p, cd& alpha, cd& beta, cd& d);

// Operator exp(log_coeff) |alpha><beta|.
struct CoherentTerm {
  cd log_coeff;
  cd alpha;
  cd beta;
};

// Terms of a single-mode, unit-covariance state read as coherent outer products.
std::vector<CoherentTerm> coherent_terms(const LcogState& s);

// rho_mn for m, n <= cutoff.
CMat coherent_to_fock(const std::vector<CoherentTerm>& core, int cutoff);
// Entries rho_{m, col} for m <= cutoff.
CVec coherent_to_fock_column(const std::vector<CoherentTerm>& core, int cutoff, int col);
Vec coherent_to_fock_diagonal(const std::vector<CoherentTerm>& core, int cutoff);

// Coherent-ring representation of a truncated density matrix.
LcogState fock_density_to_ring(const CMat& rho, double eps);

struct ReduceOptions {
  double eps_out = 0.0;  // 0 picks the default radius for the output rank
  double k_std = 6.0;
  int rank = -1;         // overrides the state's recorded stellar rank
  double pure_tol = 1e-9;
  int points = 0;        // ring size for pure outputs; 0 means rank + 1
};

struct ReduceReport {
  LcogState state;
  bool mixed = false;
  int rank = 0;     // r (pure) or the Chebyshev cutoff r' (mixed)
  double nu = 0.0;  // thermal excess of the shared covariance
  double eps_out = 0.0;
  int pivot = 0;
  double photon_mean = 0.0;  // core moments, mixed path only
  double photon_variance = 0.0;
};

ReduceReport rank_reduce_report(const LcogState& s, const ReduceOptions& opt = {});
LcogState rank_reduce(const LcogState& s, double eps_out = 0.0, double k_std = 6.0);

}  // namespace lcg
