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

#include "lcg/types.hpp"

namespace lcg {

// Quadratures are interleaved: (x1, p1, x2, p2, ...).
Mat omega(int num_modes);
bool is_symplectic(const Mat& S, double tol = 1e-12);

Mat squeeze_symplectic(double r, double phi);
Mat beamsplitter_symplectic(double theta, double phi);
Mat two_mode_squeeze_symplectic(double r, double phi);
Mat rotation_symplectic(double phi);
Vec displacement_vector(cd alpha);

// Lift a 2k x 2k block acting on `modes` into the full 2N x 2N space.
Mat embed(const Mat& S, const std::vector<int>& modes, int num_modes);
Vec embed_vector(const Vec& d, const std::vector<int>& modes, int num_modes);

struct GaussianChannel {
  Mat X;
  Mat Y;
  Vec d;
};

void validate_channel(const GaussianChannel& ch);
GaussianChannel channel_loss(double eta, double nbar, int num_modes = 1);
GaussianChannel channel_gain(double G, int num_modes = 1);
GaussianChannel channel_random_displacement(double W, int num_modes = 1);

// sigma = S (I + nu) S^T with nu diagonal, pairs equal per mode.
struct WilliamsonDecomposition {
  Mat S;
  Mat nu;
};

WilliamsonDecomposition williamson(const Mat& sigma);
std::vector<double> symplectic_eigenvalues(const Mat& sigma);

enum class OpKind { squeeze, squeeze2, beamsplitter, rotation, displacement };

// params: squeeze/squeeze2/beamsplitter -> (r or theta, phi); rotation -> (phi);
// displacement -> (Re alpha, Im alpha). which indexes into params.
Mat d_symplectic(OpKind kind, const std::vector<double>& params, int which);
Vec d_displacement(const std::vector<double>& params, int which);

}  // namespace lcg
