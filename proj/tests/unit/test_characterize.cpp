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

#include <doctest.h>

#include "lcg/characterize.hpp"
#include "lcg/measure.hpp"
#include "lcg/phase_space.hpp"
#include "lcg/povm.hpp"

using namespace lcg;

TEST_CASE("overlaps and purity") {
  CHECK(overlap(vacuum(1), vacuum(1)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(overlap(coherent_state(1.0), vacuum(1)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(purity(thermal_state(1.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  auto a = normalized(fock_superposition_state({0.0, 1.0}, 0.5));
  auto b = normalized(fock_superposition_state({1.0, 0.0, 0.5}, 0.4));
  CHECK(normalized_overlap(a, a) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(overlap(a, b) == doctest::Approx(overlap(b, a)).epsilon(1e-12));
}

TEST_CASE("characteristic function") {
  Vec a(2);
  a << 1.0, 0.0;
  CHECK(char_fun(vacuum(1), a).real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  auto cat = normalized(fock_superposition_state({1.0, 0.0, 1.0}, 0.6));
  CHECK(std::abs(char_fun(cat, Vec::Zero(2)) - 1.0) < 1e-12);
  const double r = 0.5;
  auto sq = apply_symplectic(vacuum(1), squeeze_symplectic(r, 0), {0});
  Vec ap(2);
  ap << 0.0, 1.3;
  CHECK(std::abs(char_fun(sq, ap)) == doctest::Approx(std::exp(-0.5 * 1.69 * std::exp(-2 * r))).epsilon(1e-12));
}

TEST_CASE("effective squeezing") {
  auto v = effective_squeezing(vacuum(1), Quadrature::x);
  CHECK(v.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(v.db) < 1e-10);
  auto sq = apply_symplectic(vacuum(1), squeeze_symplectic(0.5, 0), {0});
  auto dx = effective_squeezing(sq, Quadrature::x);
  CHECK(dx.value * dx.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(dx.db == doctest::Approx(4.3429).epsilon(1e-4));
  auto s = squeezing_summary(sq);
  CHECK(s.x.db > 0);
  CHECK(s.p.db < 0);
}

TEST_CASE("GKP nonlinear squeezing") {
  GkpOperatorSpec sq{GkpLattice::square, 0};
  auto xi = gkp_nonlinear_squeezing(vacuum(1), sq);
  CHECK(xi.value == doctest::Approx(2 - std::exp(-kPi) - std::exp(-kPi / 4)).epsilon(1e-10));
  auto d0 = gkp_displacements({GkpLattice::square, 0});
  auto d1 = gkp_displacements({GkpLattice::square, 1});
  REQUIRE(d0.size() == d1.size());
  int flipped = 0;
  for (size_t i = 0; i < d0.size(); ++i) {
    CHECK((d0[i].second - d1[i].second).norm() == 0.0);
    CHECK(std::abs(std::abs(d0[i].first) - std::abs(d1[i].first)) == 0.0);
    if (d0[i].first != d1[i].first) ++flipped;
  }
  CHECK(flipped > 0);
}

TEST_CASE("Wigner grids") {
  CHECK(wigner_grid(vacuum(1), {Vec::Zero(2)})[0] == doctest::Approx(1 / (2 * kPi)).epsilon(1e-14));
  auto one = normalized(fock_superposition_state({0.0, 1.0}, 0.01));
  CHECK(std::abs(wigner_grid(one, {Vec::Zero(2)})[0] + 1 / (2 * kPi)) < 1e-4);
  const int n = 121;
  auto pts = grid_points(-6, 6, n, -6, 6, n);
  auto w = wigner_grid(normalized(fock_superposition_state({1.0, 0.0, 1.0}, 0.5)), pts);
  double sum = 0;
  for (double x : w) sum += x;
  const double cell = (12.0 / (n - 1)) * (12.0 / (n - 1));
  CHECK(sum * cell == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("photon statistics") {
  auto v = photon_moments(vacuum(1));
  CHECK(std::abs(v.mean) < 1e-14);
  CHECK(std::abs(v.variance) < 1e-14);
  auto t = photon_moments(thermal_state(1.5));
  CHECK(t.mean == doctest::Approx(1.5));
  CHECK(t.variance == doctest::Approx(3.75));
  auto c = photon_moments(coherent_state(2.0));
  CHECK(c.mean == doctest::Approx(4.0));
  CHECK(c.variance == doctest::Approx(4.0));
  auto f = photon_moments(normalized(fock_superposition_state({0.0, 0.0, 1.0}, 0.2)));
  CHECK(f.mean == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(std::abs(f.variance) < 1e-4);
}
