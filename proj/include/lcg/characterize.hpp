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

// Tr(rho_a rho_b). Equals the fidelity when one of the states is pure.
double overlap(const LcogState& a, const LcogState& b);
double purity(const LcogState& s);
// Tr(rho_a rho_b) / sqrt(Tr rho_a^2 Tr rho_b^2); 1 iff the states coincide.
double normalized_overlap(const LcogState& a, const LcogState& b);

// <D(alpha)> with alpha given as the real vector (Re a1, Im a1, Re a2, ...).
cd char_fun(const LcogState& s, const Vec& alpha);

enum class Quadrature { x, p };

// Default stabilizer amplitude |alpha|^2 = pi (square-root-2-pi-hbar grid spacing).
inline const double kQunaughtAmplitude = std::sqrt(kPi);

struct Squeezing {
  double value = 0;  // Delta (or xi)
  double db = 0;
};

Squeezing effective_squeezing(const LcogState& s, Quadrature q, double amplitude = kQunaughtAmplitude);
Vec stabilizer_point(Quadrature q, double amplitude = kQunaughtAmplitude);

struct SqueezingSummary {
  Squeezing x, p;
  double delta_s = 0;
  double delta_s_db = 0;
};
SqueezingSummary squeezing_summary(const LcogState& s, double amplitude = kQunaughtAmplitude);

enum class GkpLattice { square, qunaught };
struct GkpOperatorSpec {
  GkpLattice lattice = GkpLattice::qunaught;
  int j = 0;
};
// The displacement set as (coefficient, alpha vector) pairs; xi = sum coefficient * Re chi.
std::vector<std::pair<double, Vec>> gkp_displacements(const GkpOperatorSpec& spec);
Squeezing gkp_nonlinear_squeezing(const LcogState& s, const GkpOperatorSpec& spec = {});

std::vector<double> wigner_grid(const LcogState& s, const std::vector<Vec>& points);
// Regular single-mode grid, row-major in p then x.
std::vector<Vec> grid_points(double xmin, double xmax, int nx, double pmin, double pmax, int np);

struct PhotonMoments {
  double mean = 0;
  double variance = 0;
};
PhotonMoments photon_moments(const LcogState& s);

}  // namespace lcg
