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

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lcg {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using IVec = Eigen::VectorXi;

// Vacuum covariance is the identity.
inline constexpr double kHbar = 2.0;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLn2 = 0.69314718055994530942;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidArgument : Error {
  using Error::Error;
};
struct UnphysicalState : Error {
  using Error::Error;
};
struct DegenerateState : Error {
  using Error::Error;
};
struct NumericalStabilityError : Error {
  using Error::Error;
};
struct ReductionFailed : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

// Wrap the imaginary part of a log-weight into (-pi, pi].
inline cd wrap_phase(cd c) {
  double im = std::remainder(c.imag(), 2.0 * kPi);
  if (im <= -kPi) im += 2.0 * kPi;
  return {c.real(), im};
}

inline double db_to_r(double db) { return db * std::log(10.0) / 20.0; }
inline double r_to_db(double r) { return r * 20.0 / std::log(10.0); }
inline double delta_to_db(double delta) { return -10.0 * std::log10(delta * delta); }

// Number of worker threads used by the per-term loops (0 = library default).
void set_num_threads(int n);
int num_threads();

}  // namespace lcg
