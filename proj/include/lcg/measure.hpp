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
#include "lcg/povm.hpp"

namespace lcg {

struct MeasureResult {
  LcogState state;  // remaining modes, normalized; zero modes after a terminal measurement
  double log_prob = 0.0;
};

// Conditions `mode` on the POVM element and removes it. For generaldyne
// elements the probability is a density per unit phase-space area d^2 m.
MeasureResult post_select(const LcogState& s, int mode, const Povm& povm);

// Probability of the outcome; returns 0 instead of throwing when the outcome is impossible.
double outcome_probability(const LcogState& s, int mode, const Povm& povm);

// Homodyne on the quadrature at `angle` (0 = x, pi/2 = p); log_prob is a log density.
MeasureResult post_select_homodyne(const LcogState& s, int mode, double value, double angle = 0.0);

// Measures mode 0 repeatedly with the given elements.
MeasureResult herald_sequence(const LcogState& s, const std::vector<Povm>& povms);

// Photon-number heralding with coherent-ring PNRD elements; eps = 0 picks the default radius per n.
MeasureResult herald_fock(const LcogState& s, const std::vector<int>& pattern, double eps = 0.0, bool reduced = false);

// Marks a state whose terms are all real as reduced without changing it.
LcogState as_reduced(const LcogState& s);

}  // namespace lcg
