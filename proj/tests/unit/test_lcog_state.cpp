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

#include "lcg/lcog_state.hpp"
#include "lcg/phase_space.hpp"
#include "lcg/stellar.hpp"

using namespace lcg;

namespace {

LcogState cat(double a, int sign) {
  return from_coherent_superposition({{1.0, double(sign)}, {a, -a}, 0.0});
}

// Fock vector of |alpha>, truncated.
CVec fock_coherent(cd alpha, int cutoff) {
  CVec v(cutoff);
  cd t = std::exp(-0.5 * std::norm(alpha));
  for (int m = 0; m < cutoff; ++m) {
    v(m) = t;
    t *= alpha / std::sqrt(m + 1.0);
  }
  return v;
}

}  // namespace

TEST_CASE("vacuum") {
  auto v = vacuum(1);
  CHECK(v.num_weights() == 1);
  CHECK(v.means.norm() == 0.0);
  CHECK(v.covs[0].isApprox(CMat::Identity(2, 2)));
  CHECK(vacuum(3).covs[0].isApprox(CMat::Identity(6, 6)));
  CHECK(log_norm(vacuum(2)) == 0.0);
}

TEST_CASE("coherent superpositions") {
  auto c = from_coherent_superposition({{1.0}, {2.0}, 0.0});
  CHECK(c.num_weights() == 1);
  CHECK(c.means(0, 0).real() == doctest::Approx(4.0));
  CHECK(std::abs(c.means(1, 0)) < 1e-15);

  // states come back normalised: each diagonal term carries 1 / (2 + 2 e^-2)
  auto even = cat(1.0, 1);
  CHECK(std::abs(log_norm(even)) < 1e-14);
  CHECK(std::exp(even.log_weights(0)).real() == doctest::Approx(1 / (2 + 2 * std::exp(-2.0))).epsilon(1e-12));
  CHECK(wigner(normalized(cat(1.0, -1)), Vec::Zero(2)).real() < 0);
}

TEST_CASE("tensor products") {
  auto vv = tensor(vacuum(1), vacuum(1));
  CHECK(vv.covs[0].isApprox(vacuum(2).covs[0]));
  auto a = cat(0.8, 1);
  auto b = from_coherent_superposition({{1.0, 0.5, -0.3}, {0.4, cd(0, 0.9), -1.1}, 0.0});
  CHECK(a.num_weights() == 4);
  CHECK(b.num_weights() == 9);
  auto ab = tensor(a, b);
  CHECK(ab.num_weights() == 36);
  CHECK(log_norm(ab) == doctest::Approx(log_norm(a) + log_norm(b)).epsilon(1e-12));
}

TEST_CASE("symplectic evolution") {
  auto v = vacuum(1);
  CHECK(apply_symplectic(v, Mat::Identity(2, 2), {0}).covs[0].isApprox(v.covs[0]));
  const double r = 0.4;
  auto s = apply_symplectic(v, squeeze_symplectic(r, 0), {0});
  CHECK(s.covs[0](0, 0).real() == doctest::Approx(std::exp(-2 * r)));
  CHECK(s.covs[0](1, 1).real() == doctest::Approx(std::exp(2 * r)));

  Mat sq = Mat::Identity(4, 4);
  sq.block(0, 0, 2, 2) = squeeze_symplectic(r, 0);
  sq.block(2, 2, 2, 2) = squeeze_symplectic(-r, 0);
  Mat S = beamsplitter_symplectic(kPi / 4, 0) * sq;
  auto two = apply_symplectic(vacuum(2), S, {0, 1});
  Mat tms = two_mode_squeeze_symplectic(r, 0);
  Mat want = tms * tms.transpose();
  // Same covariance up to the sign convention of the off-diagonal block.
  Mat got = two.covs[0].real();
  CHECK(got.diagonal().isApprox(want.diagonal(), 1e-12));
  CHECK((got.cwiseAbs() - want.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("channels on states") {
  auto c = from_coherent_superposition({{1.0}, {cd(0.7, -0.4)}, 0.0});
  auto dead = apply_channel(c, channel_loss(0.0, 0.0), {0});
  CHECK(dead.covs[0].isApprox(CMat::Identity(2, 2)));
  CHECK(dead.means.norm() < 1e-15);
  auto lossy = apply_channel(c, channel_loss(0.9, 0.0), {0});
  CHECK(lossy.covs[0].isApprox(CMat::Identity(2, 2)));
  CHECK(std::abs(lossy.means(0, 0) - std::sqrt(0.9) * c.means(0, 0)) < 1e-14);

  // lossy cat against its Fock-basis density matrix
  const double eta = 0.7;
  const cd a = 1.1;
  auto lc = normalized(apply_channel(cat(std::abs(a), 1), channel_loss(eta, 0.0), {0}));
  const int cutoff = 30;
  std::vector<cd> al = {a, -a}, co = {1.0, 1.0};
  CMat rho = CMat::Zero(cutoff, cutoff);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      // <alpha_j|alpha_i>^(1-eta) for the environment part
      cd env = std::exp((1 - eta) * (std::conj(al[j]) * al[i] - 0.5 * std::norm(al[i]) - 0.5 * std::norm(al[j])));
      rho += co[i] * std::conj(co[j]) * env * fock_coherent(std::sqrt(eta) * al[i], cutoff) *
             fock_coherent(std::sqrt(eta) * al[j], cutoff).adjoint();
    }
  rho /= rho.trace();
  CMat got = coherent_to_fock(coherent_terms(lc), cutoff - 1);
  CHECK((got - rho).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("stable log-norm") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const int n = 100000;
  LcogState s = vacuum(1);
  s.log_weights.resize(n);
  s.means = CMat::Zero(2, n);
  long double acc = 0;
  for (int i = 0; i < n; ++i) {
    s.log_weights(i) = cd(3 * g(rng), 0.0);
    if (i % 3 == 0) s.log_weights(i) += cd(-1.0, kPi);
    acc += (i % 3 == 0 ? -1.0L : 1.0L) * std::exp(static_cast<long double>(s.log_weights(i).real()));
  }
  s.num_k = n;
  CHECK(std::abs(log_norm(s) - static_cast<double>(std::log(acc))) < 1e-12);
  LcogState q = vacuum(1);
  q.log_weights = CVec::Constant(4, std::log(0.25));
  q.means = CMat::Zero(2, 4);
  q.num_k = 4;
  CHECK(std::abs(log_norm(q)) < 1e-15);
}

TEST_CASE("full and reduced forms") {
  auto v = vacuum(1);
  CHECK(to_full_form(v).num_weights() == 1);
  auto c = cat(1.2, 1);
  auto r = to_reduced_form(c);
  CHECK(c.num_weights() == 4);
  CHECK(r.num_weights() == 3);
  CHECK(r.full_count() == 4);
  auto f = to_full_form(r);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int i = 0; i < 20; ++i) {
    Vec q(2);
    q << U(rng), U(rng);
    CHECK(std::abs(wigner(r, q).real() - wigner(c, q).real()) < 1e-12);
    CHECK(std::abs(wigner(f, q).real() - wigner(c, q).real()) < 1e-12);
  }
}
