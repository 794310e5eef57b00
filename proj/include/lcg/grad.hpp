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

#include "lcg/characterize.hpp"
#include "lcg/lcog_state.hpp"

namespace lcg {

// Attaches a zero tape with n_params columns. Gate derivatives enter through
// apply_symplectic(..., dS, dd); measurements update the tape automatically.
LcogState attach_gradients(const LcogState& s, int n_params);

// d log p / d theta accumulated over all post-selections so far.
Vec grad_log_prob(const LcogState& s);
CVec grad_char_fun(const LcogState& s, const Vec& alpha);
// Gradient of Tr(rho(theta) rho_target) for a fixed target.
Vec grad_overlap(const LcogState& s, const LcogState& target);
// Gradient of Delta_q (linear units).
Vec grad_effective_squeezing(const LcogState& s, Quadrature q, double amplitude = kQunaughtAmplitude);

// Structural check that the tape matches its host state.
void check_tape(const LcogState& s);

}  // namespace lcg
