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

#include <random>

#include "lcg/characterize.hpp"
#include "lcg/measure.hpp"
#include "lcg/phase_space.hpp"
#include "lcg/povm.hpp"
#include "lcg/stellar.hpp"

using namespace lcg;

namespace {

LcogState random_two_mode(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-0.8, 0.8);
  Mat S = beamsplitter_symplectic(U(rng) + 1.0, U(rng)) * [&] {
    Mat q = Mat::Identity(4, 4);
    q.block(0, 0, 2, 2) = squeeze_symplectic(U(rng), U(rng));
    q.block(2, 2, 2, 2) = squeeze_symplectic(U(rng), U(rng));
    return q;
  }();
  Vec d(4);
  d << U(rng), U(rng), U(rng), U(rng);
  return apply_symplectic(vacuum(2), S, {0, 1}, d);
}

}  // namespace

TEST_CASE("generaldyne elements") {
  auto v = generaldyne(0.0, 0.0);
  CHECK(v.covs[0].isApprox(CMat::Identity(2, 2)));
  CHECK(v.means.norm() == 0.0);
  auto h = heterodyne(1.0);
  CHECK(h.covs[0].isApprox(CMat::Identity(2, 2)));
  CHECK(h.means(0, 0).real() == doctest::Approx(2.0));
  const double r = 0.3;
  auto g = generaldyne(r, 0.0);
  CHECK(g.covs[0](0, 0).real() == doctest::Approx(std::exp(-2 * r)));
  CHECK(g.covs[0](1, 1).real() == doctest::Approx(std::exp(2 * r)));
}

TEST_CASE("click detectors") {
  CHECK(outcome_probability(vacuum(1), 0, click_povm(ClickOutcome::no_click)) == doctest::Approx(1.0));
  CHECK(std::abs(outcome_probability(vacuum(1), 0, click_povm(ClickOutcome::click))) < 1e-15);
  const cd a(0.6, -0.9);
  CHECK(outcome_probability(coherent_state(a), 0, click_povm(ClickOutcome::click)) ==
        doctest::Approx(1 - std::exp(-std::norm(a))).epsilon(1e-12));
  auto s = random_two_mode(4);
  double sum = outcome_probability(s, 1, click_povm(ClickOutcome::click)) +
               outcome_probability(s, 1, click_povm(ClickOutcome::no_click));
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pseudo photon-number resolution") {
  const double a2 = 0.8;
  auto c = coherent_state(std::sqrt(a2));
  CHECK(outcome_probability(c, 0, ppnrd_povm(0, 1)) == doctest::Approx(std::exp(-a2)).epsilon(1e-12));
  // p(1 | n) = 2^(1-n) for n >= 1 with two detectors
  CHECK(outcome_probability(c, 0, ppnrd_povm(1, 2)) ==
        doctest::Approx(2 * std::exp(-a2) * (std::exp(a2 / 2) - 1)).epsilon(1e-12));
  auto s = random_two_mode(8);
  for (int M = 1; M <= 4; ++M) {
    double sum = 0;
    for (int k = 0; k <= M; ++k) sum += outcome_probability(s, 0, ppnrd_povm(k, M));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(ppnrd_povm(3, 2), InvalidArgument);
}

TEST_CASE("thermal-sum Fock elements") {
  auto z = fock_thermal_povm(0, 0.4);
  CHECK(z.log_weights.size() == 1);
  auto p = fock_thermal_povm(1, 0.5);
  REQUIRE(p.log_weights.size() == 2);
  CHECK((std::exp(p.log_weights(1)) / std::exp(p.log_weights(0))).real() == doctest::Approx(-0.75));
  CHECK(p.covs[0](0, 0).real() == doctest::Approx(5.0 / 3.0));
  // approaches |1><1| as r shrinks
  const double a2 = 0.5;
  auto c = coherent_state(std::sqrt(a2));
  const double exact = a2 * std::exp(-a2);
  double prev = 1;
  for (double r : {0.4, 0.2, 0.1, 0.05}) {
    double err = std::abs(outcome_probability(c, 0, fock_thermal_povm(1, r)) - exact);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("coherent rings") {
  const double eps = 0.7;
  auto zero = normalized(fock_superposition_state({1.0}, eps));
  CHECK(overlap(zero, vacuum(1)) == doctest::Approx(std::exp(-eps * eps)).epsilon(1e-12));

  auto rd = ring_decomposition({0.0, 1.0}, eps);
  REQUIRE(rd.alphas.size() == 2);
  CHECK(std::abs(rd.alphas[0] - cd(eps)) < 1e-15);
  CHECK(std::abs(rd.alphas[1] + cd(eps)) < 1e-15);
  CHECK(std::abs(rd.coeffs[1] / rd.coeffs[0] + 1.0) < 1e-14);

  auto flat = ring_decomposition({1.0, 0.0}, eps, 2);
  REQUIRE(flat.coeffs.size() == 2);
  CHECK(std::abs(flat.coeffs[0] - flat.coeffs[1]) < 1e-14);

  auto one = fock_superposition_state({0.0, 1.0}, eps);
  auto ref = povm_from_state(one);
  auto f1 = fock_coherent_povm(1, eps);
  CHECK(outcome_probability(coherent_state(0.4), 0, ref) ==
        doctest::Approx(outcome_probability(coherent_state(0.4), 0, f1)).epsilon(1e-12));

  // (|0> + |2>) / sqrt 2 against its Fock vector
  const double e2 = 0.3;
  auto sup = normalized(fock_superposition_state({1.0, 0.0, 1.0}, e2));
  CMat rho = coherent_to_fock(coherent_terms(sup), 20);
  const double fid = 0.5 * (rho(0, 0) + rho(2, 2) + rho(0, 2) + rho(2, 0)).real();
  CHECK(fid >= 1 - 10 * std::pow(e2, 6));

  // every ring term sits on the circle of radius sqrt(2 hbar) eps
  auto p = fock_coherent_povm(3, 0.9);
  for (int k = 0; k < p.num_k; ++k) CHECK(p.means.col(k).norm() == doctest::Approx(2 * 0.9));

  CHECK(fock_ring_infidelity(2, 0.5) ==
        doctest::Approx(2.0 * std::pow(0.5, 6) / 120.0).epsilon(1e-2));
  CHECK(fock_ring_infidelity(2, 0.5, 6) < fock_ring_infidelity(2, 0.5));
}

TEST_CASE("heterodyne and homodyne densities") {
  auto m = post_select(vacuum(2), 0, heterodyne(0.0));
  CHECK(std::exp(m.log_prob) == doctest::Approx(1 / (4 * kPi)).epsilon(1e-12));
  auto h = post_select_homodyne(vacuum(1), 0, 0.0);
  CHECK(std::exp(h.log_prob) == doctest::Approx(1 / std::sqrt(2 * kPi)).epsilon(1e-12));
  const double r = 0.6;
  auto sq = apply_symplectic(vacuum(1), squeeze_symplectic(r, 0), {0});
  CHECK(std::exp(post_select_homodyne(sq, 0, 0.0).log_prob) ==
        doctest::Approx(1 / std::sqrt(2 * kPi * std::exp(-2 * r))).epsilon(1e-12));
}

TEST_CASE("homodyne conditioning matches dense Gaussian algebra") {
  auto s = random_two_mode(12);
  const double x = 0.37;
  auto m = post_select_homodyne(s, 1, x);
  Mat sig = s.covs[0].real();
  Vec mu = s.means.col(0).real();
  const double v = sig(2, 2);
  Mat cA = sig.block(0, 0, 2, 2) - sig.block(0, 2, 2, 1) * sig.block(2, 0, 1, 2) / v;
  Vec mA = mu.head(2) + sig.block(0, 2, 2, 1) * (x - mu(2)) / v;
  CHECK((m.state.covs[0].real() - cA).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((m.state.means.col(0).real() - mA).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::exp(m.log_prob) ==
        doctest::Approx(std::exp(-0.5 * (x - mu(2)) * (x - mu(2)) / v) / std::sqrt(2 * kPi * v)).epsilon(1e-12));
}

TEST_CASE("heralding") {
  const double r = 0.5, t = std::tanh(r);
  LcogState tmsv = apply_symplectic(vacuum(2), two_mode_squeeze_symplectic(r, 0), {0, 1});
  auto h = herald_fock(tmsv, {2});
  CHECK(std::exp(h.log_prob) == doctest::Approx((1 - t * t) * std::pow(t, 4)).epsilon(1e-5));
  const double target = 1e-6;
  const double fid = coherent_to_fock_diagonal(coherent_terms(h.state), 2)(2);
  CHECK(fid >= 1 - 5 * target);

  Mat S = beamsplitter_symplectic(0.7, 0) * two_mode_squeeze_symplectic(0.4, 0);
  LcogState three = apply_symplectic(tensor(vacuum(2), vacuum(1)), [&] {
    Mat out = Mat::Identity(6, 6);
    out.block(0, 0, 4, 4) = S;
    return out;
  }(), {0, 1, 2});
  three = apply_symplectic(three, beamsplitter_symplectic(0.5, 0), {1, 2});
  CHECK(herald_fock(three, {1, 1}).state.full_count() == 16);
}
