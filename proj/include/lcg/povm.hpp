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
#include "lcg/types.hpp"

namespace lcg {

enum class PovmKind { generaldyne, click, ppnrd, fock_thermal, fock_coherent, fock_superposition, custom };

// Single-mode measurement element W(q) = Re sum_n exp(d_n) G_{nu_n, omega_n}(q).
// Terms flagged as identity stand for the constant exp(d_n) / (2 pi hbar)
// and are applied as a partial trace. Probabilities are
// p = (2 pi hbar) * integral(W_rho W_Pi).
struct Povm {
  PovmKind kind = PovmKind::custom;
  CVec log_weights;
  CMat means;                   // 2 x n
  std::vector<CMat> covs;       // one shared entry or one per term
  std::vector<char> identity;   // per term
  int num_k = 0;
  bool reduced = false;

  int photon_number = -1;
  double eps = 0.0;
  int fanout = 0;
  int clicks = 0;
  double r = 0.0;
  // Exact 1 - fidelity of the ring approximation (fock kinds only).
  double predicted_infidelity = 0.0;
  // Sum |w| / |sum w| of the unnormalized weights.
  double conditioning = 1.0;

  int size() const { return static_cast<int>(log_weights.size()); }
  const CMat& cov(int n) const { return covs.size() == 1 ? covs[0] : covs[n]; }
  int cov_id(int n) const { return covs.size() == 1 ? 0 : n; }
};

Povm generaldyne(cd z, cd alpha);
Povm heterodyne(cd alpha);

enum class ClickOutcome { no_click, click };
Povm click_povm(ClickOutcome outcome);

Povm ppnrd_povm(int k, int M);
Povm fock_thermal_povm(int n, double r);

// Rings use `points` coherent states (0 means n + 1); only Fock components
// m = n (mod points) survive, so larger rings trade terms for conditioning.
double default_ring_radius(int n, double target_infidelity = 1e-6, int points = 0);
double fock_ring_infidelity(int n, double eps, int points = 0);

Povm fock_coherent_povm(int n, double eps = 0.0, bool reduced = false, int points = 0);

// Coherent-ring approximation of sum_m a_m |m>; exact on the first n+1 Fock coefficients.
struct RingDecomposition {
  std::vector<cd> coeffs;
  std::vector<cd> alphas;
  double eps = 0;
  double tail = 0;  // squared norm of the aliased tail, relative to sum |a|^2
};
RingDecomposition ring_decomposition(const std::vector<cd>& amplitudes, double eps, int points = 0);
double default_superposition_radius(int rank, double target_infidelity = 1e-6, int points = 0);
// Radius minimising sqrt(tail) + kappa * machine epsilon for these amplitudes.
double balanced_superposition_radius(const std::vector<cd>& amplitudes, int points = 0);

Povm fock_superposition_povm(const std::vector<cd>& amplitudes, double eps = 0.0, bool reduced = false,
                             int points = 0);
LcogState fock_superposition_state(const std::vector<cd>& amplitudes, double eps = 0.0, bool reduced = false,
                                   int points = 0);

// Projector built from a single-mode state; density=true divides by 2 pi hbar.
Povm povm_from_state(const LcogState& s, bool density = false);
Povm povm_to_full_form(const Povm& p);

}  // namespace lcg
