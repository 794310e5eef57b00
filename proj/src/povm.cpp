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

#include "lcg/povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lcg/detail.hpp"

namespace lcg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double log_binom(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

Povm single_gaussian(const Mat& cov, const Vec& mean, cd log_weight) {
  Povm p;
  p.log_weights = CVec::Constant(1, log_weight);
  p.means = mean.cast<cd>();
  p.covs = {cov.cast<cd>()};
  p.identity = {0};
  p.num_k = 1;
  return p;
}

// Unnormalized weights of |psi><psi| for psi = sum_k c_k |alpha_k>.
CVec outer_weights(const std::vector<cd>& c, const std::vector<cd>& a) {
  const size_t K = c.size();
  CVec w(K * K);
  for (size_t k = 0; k < K; ++k) {
    for (size_t l = 0; l < K; ++l) {
      cd mx, mp, d;
      coherent_outer(a[k], a[l], mx, mp, d);
      w(k * K + l) = std::log(c[k]) + std::conj(std::log(c[l])) + d;
    }
  }
  return w;
}

}  // namespace

Povm generaldyne(cd z, cd alpha) {
  Mat S = squeeze_symplectic(std::abs(z), std::arg(z));
  Povm p = single_gaussian((kHbar / 2.0) * S * S.transpose(), displacement_vector(alpha), -std::log(2 * kPi * kHbar));
  p.kind = PovmKind::generaldyne;
  return p;
}

Povm heterodyne(cd alpha) { return generaldyne(0.0, alpha); }

Povm click_povm(ClickOutcome outcome) {
  Mat I = (kHbar / 2.0) * Mat::Identity(2, 2);
  Povm p;
  p.kind = PovmKind::click;
  if (outcome == ClickOutcome::no_click) {
    p = single_gaussian(I, Vec::Zero(2), 0.0);
    p.kind = PovmKind::click;
    p.clicks = 0;
    return p;
  }
  p.log_weights.resize(2);
  p.log_weights << cd(0, 0), cd(0, kPi);
  p.means = CMat::Zero(2, 2);
  p.covs = {I.cast<cd>(), I.cast<cd>()};
  p.identity = {1, 0};
  p.num_k = 2;
  p.clicks = 1;
  return p;
}

Povm ppnrd_povm(int k, int M) {
  if (M < 1 || k < 0 || k > M) throw InvalidArgument("ppnrd_povm requires 0 <= k <= M, M >= 1");
  Povm p;
  p.kind = PovmKind::ppnrd;
  p.fanout = M;
  p.clicks = k;
  p.log_weights.resize(k + 1);
  p.means = CMat::Zero(2, k + 1);
  for (int l = 0; l <= k; ++l) {
    const double eta = static_cast<double>(M - k + l) / M;
    const double phase = (l % 2) ? kPi : 0.0;
    const double lc = log_binom(M, k) + log_binom(k, l);
    if (eta == 0.0) {
      p.log_weights(l) = cd(lc, phase);
      p.covs.push_back((kHbar / 2.0) * CMat::Identity(2, 2));
      p.identity.push_back(1);
    } else {
      const double nbar = (1.0 - eta) / eta;
      p.log_weights(l) = cd(lc - std::log(eta), phase);
      p.covs.push_back((kHbar / 2.0) * (2 * nbar + 1) * CMat::Identity(2, 2));
      p.identity.push_back(0);
    }
  }
  p.num_k = k + 1;
  return p;
}

Povm fock_thermal_povm(int n, double r) {
  if (n < 0) throw InvalidArgument("photon number must be non-negative");
  if (n == 0) {
    Povm p = single_gaussian((kHbar / 2.0) * Mat::Identity(2, 2), Vec::Zero(2), 0.0);
    p.kind = PovmKind::fock_thermal;
    p.photon_number = 0;
    return p;
  }
  if (!(r > 0.0 && r * r * n < 1.0)) throw InvalidArgument("fock_thermal_povm requires 0 < r < n^(-1/2)");
  Povm p;
  p.kind = PovmKind::fock_thermal;
  p.photon_number = n;
  p.r = r;
  p.log_weights.resize(n + 1);
  p.means = CMat::Zero(2, n + 1);
  const double r2 = r * r;
  std::vector<double> c(n + 1);
  double total = 0;
  for (int k = 0; k <= n; ++k) {
    c[k] = ((k % 2) ? -1.0 : 1.0) * std::exp(log_binom(n, k)) * (1 - n * r2) / (1 - (n - k) * r2);
    total += c[k];
    double s = (1 + (n - k) * r2) / (1 - (n - k) * r2);
    p.covs.push_back((kHbar / 2.0) * s * CMat::Identity(2, 2));
    p.identity.push_back(0);
  }
  for (int k = 0; k <= n; ++k) p.log_weights(k) = std::log(cd(c[k] / total, 0.0));
  p.num_k = n + 1;
  return p;
}

namespace {

int ring_points(int n, int points) {
  if (points == 0) return n + 1;
  if (points < n + 1) throw InvalidArgument("a ring needs at least n + 1 points");
  return points;
}

}  // namespace

double fock_ring_infidelity(int n, double eps, int points) {
  if (n < 0 || !(eps > 0)) throw InvalidArgument("fock_ring_infidelity requires n >= 0, eps > 0");
  const int K = ring_points(n, points);
  // tail / (1 + tail) with tail = sum_j n! eps^(2 j K) / (n + j K)!
  double tail = 0;
  const double le = std::log(eps);
  for (int j = 1; j < 400; ++j) {
    int m = n + j * K;
    double lt = std::lgamma(n + 1.0) + 2.0 * (m - n) * le - std::lgamma(m + 1.0);
    double t = std::exp(lt);
    tail += t;
    if (t < 1e-300 || (j > 3 && t < 1e-20 * tail)) break;
  }
  return tail / (1.0 + tail);
}

double default_ring_radius(int n, double target, int points) {
  if (!(target > 0 && target < 1)) throw InvalidArgument("target infidelity must lie in (0, 1)");
  double lo = 1e-6, hi = 50.0;
  for (int it = 0; it < 200; ++it) {
    double mid = std::sqrt(lo * hi);
    if (fock_ring_infidelity(n, mid, points) > target) hi = mid;
    else lo = mid;
  }
  return lo;
}

double default_superposition_radius(int rank, double target, int points) {
  const int K = ring_points(rank, points);
  // Leading aliased term: eps^(2K) / K!.
  return std::exp((std::log(target) + std::lgamma(K + 1.0)) / (2.0 * K));
}

double balanced_superposition_radius(const std::vector<cd>& amplitudes, int points) {
  double best = 0, best_err = std::numeric_limits<double>::infinity();
  for (double eps = 0.05; eps < 6.0; eps *= 1.02) {
    auto rd = ring_decomposition(amplitudes, eps, points);
    std::vector<cd> c, a;
    for (size_t k = 0; k < rd.coeffs.size(); ++k) {
      if (std::abs(rd.coeffs[k]) == 0.0) continue;
      c.push_back(rd.coeffs[k]);
      a.push_back(rd.alphas[k]);
    }
    auto rs = detail::real_sum(outer_weights(c, a));
    if (!(rs.value > 0)) continue;
    double err = std::sqrt(rd.tail) + rs.kappa * kEps;
    if (err < best_err) {
      best_err = err;
      best = eps;
    }
  }
  if (best == 0) throw NumericalStabilityError("no usable ring radius for this superposition");
  return best;
}

RingDecomposition ring_decomposition(const std::vector<cd>& amplitudes, double eps, int points) {
  std::vector<cd> a = amplitudes;
  while (!a.empty() && a.back() == 0.0) a.pop_back();
  if (a.empty()) throw DegenerateState("all Fock amplitudes vanish");
  if (!(eps > 0)) throw InvalidArgument("ring radius must be positive");
  double nrm = 0;
  for (auto& x : a) nrm += std::norm(x);
  for (auto& x : a) x /= std::sqrt(nrm);
  const int n = static_cast<int>(a.size()) - 1;
  const int K = ring_points(n, points);
  RingDecomposition out;
  out.eps = eps;
  const double le = std::log(eps);
  for (int k = 0; k < K; ++k) {
    cd acc = 0;
    for (int l = 0; l <= n; ++l) {
      if (a[l] == 0.0) continue;
      double mag = 0.5 * eps * eps + 0.5 * std::lgamma(l + 1.0) - l * le;
      acc += a[l] * std::exp(mag) * std::polar(1.0, -2 * kPi * l * k / K);
    }
    out.coeffs.push_back(acc / static_cast<double>(K));
    out.alphas.push_back(std::polar(eps, 2 * kPi * k / K));
  }
  double tail = 0;
  for (int m = K; m < K + 400; ++m) {
    int l = m % K;
    if (l > n || a[l] == 0.0) continue;
    double t = std::norm(a[l]) * std::exp(std::lgamma(l + 1.0) + 2.0 * (m - l) * le - std::lgamma(m + 1.0));
    tail += t;
    if (m > 2 * K && t < 1e-20 * tail) break;
  }
  out.tail = tail;
  return out;
}

namespace {

Povm ring_povm(const RingDecomposition& rd, bool reduced, PovmKind kind, int photon_number) {
  std::vector<cd> c, a;
  for (size_t k = 0; k < rd.coeffs.size(); ++k) {
    if (std::abs(rd.coeffs[k]) == 0.0) continue;
    c.push_back(rd.coeffs[k]);
    a.push_back(rd.alphas[k]);
  }
  auto rs = detail::real_sum(outer_weights(c, a));
  Povm p;
  p.kind = kind;
  p.photon_number = photon_number;
  p.eps = rd.eps;
  p.predicted_infidelity = rd.tail / (1.0 + rd.tail);
  p.conditioning = rs.kappa;
  // Both errors are compared at the amplitude level.
  if (!(rs.value > 0) || rs.kappa * kEps > std::max(std::sqrt(p.predicted_infidelity), detail::kMaxRounding)) {
    throw NumericalStabilityError("ring radius " + std::to_string(rd.eps) +
                                  " is too small: rounding in the coherent-state norm exceeds the approximation "
                                  "error (increase eps)");
  }
  LcogState s = from_coherent_superposition({c, a, 0.0}, reduced);
  Povm q = povm_from_state(s, false);
  q.kind = p.kind;
  q.photon_number = p.photon_number;
  q.eps = p.eps;
  q.predicted_infidelity = p.predicted_infidelity;
  q.conditioning = p.conditioning;
  return q;
}

}  // namespace

Povm fock_coherent_povm(int n, double eps, bool reduced, int points) {
  if (n < 0) throw InvalidArgument("photon number must be non-negative");
  if (eps == 0.0) eps = default_ring_radius(n, 1e-6, points);
  if (!(eps > 0)) throw InvalidArgument("ring radius must be positive");
  std::vector<cd> amp(n + 1, 0.0);
  amp[n] = 1.0;
  return ring_povm(ring_decomposition(amp, eps, points), reduced, PovmKind::fock_coherent, n);
}

Povm fock_superposition_povm(const std::vector<cd>& amplitudes, double eps, bool reduced, int points) {
  int rank = static_cast<int>(amplitudes.size()) - 1;
  while (rank > 0 && amplitudes[rank] == 0.0) --rank;
  if (eps == 0.0) eps = default_superposition_radius(rank, 1e-6, points);
  std::vector<cd> a(amplitudes.begin(), amplitudes.begin() + rank + 1);
  return ring_povm(ring_decomposition(a, eps, points), reduced, PovmKind::fock_superposition, -1);
}

LcogState fock_superposition_state(const std::vector<cd>& amplitudes, double eps, bool reduced, int points) {
  Povm p = fock_superposition_povm(amplitudes, eps, reduced, points);
  LcogState s;
  s.num_modes = 1;
  s.log_weights = p.log_weights;
  s.means = p.means;
  s.covs = {p.covs[0]};
  s.num_k = p.num_k;
  s.reduced = p.reduced;
  int rank = static_cast<int>(amplitudes.size()) - 1;
  while (rank > 0 && amplitudes[rank] == 0.0) --rank;
  s.stellar_rank = rank;
  return s;
}

Povm povm_from_state(const LcogState& s, bool density) {
  if (s.num_modes != 1) throw InvalidArgument("POVM elements are single-mode");
  Povm p;
  p.kind = PovmKind::custom;
  p.log_weights = s.log_weights;
  if (density) p.log_weights.array() -= std::log(2 * kPi * kHbar);
  p.means = s.means;
  if (s.shared_cov()) {
    p.covs = {s.covs[0]};
  } else {
    for (int m = 0; m < s.num_weights(); ++m) p.covs.push_back(s.cov(m));
  }
  p.identity.assign(s.num_weights(), 0);
  p.num_k = s.num_k;
  p.reduced = s.reduced;
  return p;
}

Povm povm_to_full_form(const Povm& in) {
  if (!in.reduced) return in;
  Povm p = in;
  const int n = in.size(), k = in.num_k, nout = 2 * n - k;
  p.log_weights.resize(nout);
  p.means.resize(2, nout);
  p.identity.assign(nout, 0);
  std::vector<CMat> covs;
  int j = 0;
  auto put = [&](int m, bool c, double off) {
    cd w = in.log_weights(m) - off;
    p.log_weights(j) = c ? std::conj(w) : w;
    p.means.col(j) = c ? CVec(in.means.col(m).conjugate()) : CVec(in.means.col(m));
    p.identity[j] = in.identity[m];
    covs.push_back(c ? CMat(in.cov(m).conjugate()) : in.cov(m));
    ++j;
  };
  for (int m = 0; m < k; ++m) put(m, false, 0.0);
  for (int m = k; m < n; ++m) {
    put(m, false, kLn2);
    put(m, true, kLn2);
  }
  if (in.covs.size() == 1 && detail::is_real(in.covs[0])) {
    p.covs = {in.covs[0]};
  } else {
    p.covs = covs;
  }
  p.num_k = nout;
  p.reduced = false;
  return p;
}

}  // namespace lcg
