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

#include "lcg/stellar.hpp"

#include <algorithm>
#include <cmath>

#include "lcg/characterize.hpp"
#include "lcg/detail.hpp"
#include "lcg/phase_space.hpp"
#include "lcg/povm.hpp"

namespace lcg {

void gaussian_to_coherent_outer(cd mu_x, cd mu_p, cd& alpha, cd& beta, cd& d) {
  const double s = std::sqrt(kHbar / 2.0);
  const double nx = mu_x.real() / s, wx = mu_x.imag() / s;
  const double np = mu_p.real() / s, wp = mu_p.imag() / s;
  alpha = cd(0.5 * (nx - wp), 0.5 * (np + wx));
  beta = cd(0.5 * (nx + wp), 0.5 * (np - wx));
  d = cd(-0.5 * (wx * wx + wp * wp), 0.5 * (np * wp + nx * wx));
}

std::vector<CoherentTerm> coherent_terms(const LcogState& in) {
  if (in.num_modes != 1) throw InvalidArgument("coherent_terms needs a single-mode state");
  LcogState s = to_full_form(in);
  std::vector<CoherentTerm> out;
  for (int m = 0; m < s.num_weights(); ++m) {
    if ((s.cov(m) - (kHbar / 2.0) * CMat::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-9) {
      throw InvalidArgument("coherent_terms needs vacuum covariances");
    }
    CoherentTerm t;
    cd d;
    gaussian_to_coherent_outer(s.means(0, m), s.means(1, m), t.alpha, t.beta, d);
    t.log_coeff = s.log_weights(m) - d;
    out.push_back(t);
  }
  return out;
}

namespace {

// log of exp(-|a|^2/2 - |b|^2/2) a^m conj(b)^n / sqrt(m! n!) times the coefficient.
struct LogTerms {
  std::vector<cd> base;
  std::vector<cd> la, lb;
  std::vector<char> za, zb;
};

LogTerms log_terms(const std::vector<CoherentTerm>& core) {
  LogTerms lt;
  for (const auto& t : core) {
    lt.base.push_back(t.log_coeff - 0.5 * std::norm(t.alpha) - 0.5 * std::norm(t.beta));
    lt.za.push_back(t.alpha == 0.0);
    lt.zb.push_back(t.beta == 0.0);
    lt.la.push_back(t.alpha == 0.0 ? cd(0) : std::log(t.alpha));
    lt.lb.push_back(t.beta == 0.0 ? cd(0) : std::log(std::conj(t.beta)));
  }
  return lt;
}

cd element(const LogTerms& lt, int m, int n) {
  const size_t J = lt.base.size();
  std::vector<cd> e;
  e.reserve(J);
  const double lf = -0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0));
  for (size_t j = 0; j < J; ++j) {
    if ((m > 0 && lt.za[j]) || (n > 0 && lt.zb[j])) continue;
    e.push_back(lt.base[j] + (m ? double(m) * lt.la[j] : cd(0)) + (n ? double(n) * lt.lb[j] : cd(0)) + lf);
  }
  if (e.empty()) return 0.0;
  double mx = -std::numeric_limits<double>::infinity();
  for (const auto& x : e) mx = std::max(mx, x.real());
  cd acc = 0;
  for (const auto& x : e) acc += std::exp(x - mx);
  return std::exp(mx) * acc;
}

}  // namespace

CMat coherent_to_fock(const std::vector<CoherentTerm>& core, int cutoff) {
  if (cutoff < 0) throw InvalidArgument("cutoff must be non-negative");
  if (cutoff > 170) throw InvalidArgument("cutoff too large for double-precision factorials");
  auto lt = log_terms(core);
  CMat rho(cutoff + 1, cutoff + 1);
  for (int m = 0; m <= cutoff; ++m) {
    for (int n = m; n <= cutoff; ++n) {
      rho(m, n) = element(lt, m, n);
      if (n != m) rho(n, m) = std::conj(rho(m, n));
    }
  }
  return rho;
}

CVec coherent_to_fock_column(const std::vector<CoherentTerm>& core, int cutoff, int col) {
  auto lt = log_terms(core);
  CVec out(cutoff + 1);
  for (int m = 0; m <= cutoff; ++m) out(m) = element(lt, m, col);
  return out;
}

Vec coherent_to_fock_diagonal(const std::vector<CoherentTerm>& core, int cutoff) {
  auto lt = log_terms(core);
  Vec out(cutoff + 1);
  for (int m = 0; m <= cutoff; ++m) out(m) = element(lt, m, m).real();
  return out;
}

LcogState fock_density_to_ring(const CMat& rho, double eps) {
  const int K = static_cast<int>(rho.rows());
  if (K < 1 || rho.cols() != K) throw InvalidArgument("density matrix must be square");
  if (!(eps > 0)) throw InvalidArgument("ring radius must be positive");
  std::vector<cd> alpha(K);
  for (int k = 0; k < K; ++k) alpha[k] = std::polar(eps, 2 * kPi * k / K);
  // C_kl = e^{eps^2} / K^2 sum_mn rho_mn sqrt(m! n!) / eps^(m+n) e^{-2 pi i (m k - n l) / K}
  CMat scaled(K, K);
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n)
      scaled(m, n) = rho(m, n) * std::exp(0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)) - (m + n) * std::log(eps));
  CMat F(K, K);
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < K; ++m) F(k, m) = std::polar(1.0, -2 * kPi * m * k / K);
  CMat C = std::exp(eps * eps) / (double(K) * K) * F * scaled * F.adjoint();
  LcogState s;
  s.num_modes = 1;
  std::vector<cd> lw;
  std::vector<Eigen::Vector2cd> mus;
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < K; ++l) {
      if (C(k, l) == 0.0) continue;
      cd mx, mp, d;
      coherent_outer(alpha[k], alpha[l], mx, mp, d);
      lw.push_back(wrap_phase(std::log(C(k, l)) + d));
      mus.emplace_back(mx, mp);
    }
  }
  s.log_weights = Eigen::Map<CVec>(lw.data(), lw.size());
  s.means.resize(2, lw.size());
  for (size_t j = 0; j < mus.size(); ++j) s.means.col(j) = mus[j];
  s.covs = {(kHbar / 2.0) * CMat::Identity(2, 2)};
  s.num_k = static_cast<int>(lw.size());
  return s;
}

namespace {
constexpr double kCorePurityTol = 1e-4;
}  // namespace

ReduceReport rank_reduce_report(const LcogState& in, const ReduceOptions& opt) {
  if (in.num_modes != 1) throw InvalidArgument("rank_reduce needs a single-mode state");
  if (!(opt.k_std >= 1.0)) throw InvalidArgument("k_std must be >= 1");
  if (opt.eps_out < 0) throw InvalidArgument("eps_out must be positive");
  if (opt.points < 0) throw InvalidArgument("points must be non-negative");
  if (!in.shared_cov() || !detail::is_real(in.covs[0])) {
    throw ReductionFailed("rank_reduce needs a shared real covariance");
  }
  LcogState s = in;
  s.tape.reset();
  ReduceReport rep;
  const Mat sigma = s.covs[0].real();
  auto wd = williamson(sigma);
  rep.nu = wd.nu(0, 0);
  rep.mixed = rep.nu > opt.pure_tol;
  const Mat Sinv = wd.S.inverse();

  // Undo S, and the thermal excess on the mixed path.
  LcogState core = s;
  core.means = Sinv.cast<cd>() * s.means;
  core.covs = {(kHbar / 2.0) * CMat::Identity(2, 2)};
  core = to_full_form(core);
  auto terms = coherent_terms(core);
  LcogState out;

  // A vacuum-covariance core can still be mixed (loss after heralding).
  if (!rep.mixed) {
    const int r = opt.rank >= 0 ? opt.rank : s.stellar_rank;
    if (r >= 0) {
      CMat rho = coherent_to_fock(terms, r);
      const double tr = rho.trace().real();
      rep.mixed = !(tr > 0) || rho.cwiseAbs2().sum() < (1 - kCorePurityTol) * tr * tr;
    }
  }

  if (!rep.mixed) {
    const int r = opt.rank >= 0 ? opt.rank : s.stellar_rank;
    if (r < 0) throw ReductionFailed("stellar rank unknown; pass it explicitly");
    rep.rank = r;
    Vec diag = coherent_to_fock_diagonal(terms, r);
    std::vector<int> order(r + 1);
    for (int i = 0; i <= r; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return diag(a) > diag(b); });
    bool ok = false;
    std::vector<cd> amp;
    for (int p : order) {
      if (!(diag(p) > 1e-14 * std::max(1.0, diag.cwiseAbs().maxCoeff()))) break;
      CVec col = coherent_to_fock_column(terms, r, p);
      amp.assign(r + 1, 0.0);
      for (int n = 0; n <= r; ++n) amp[n] = col(n) / std::sqrt(diag(p));
      rep.pivot = p;
      ok = true;
      break;
    }
    if (!ok) throw ReductionFailed("no usable pivot in the Fock core");
    int rr = r;
    while (rr > 0 && std::abs(amp[rr]) < 1e-300) --rr;
    amp.resize(rr + 1);
    const int K = opt.points > 0 ? std::max(rr + 1, opt.points) : 0;
    rep.eps_out = opt.eps_out > 0 ? opt.eps_out : balanced_superposition_radius(amp, K);
    out = fock_superposition_state(amp, rep.eps_out, false, K);
    out.stellar_rank = r;
  } else {
    core.covs = {(kHbar / 2.0) * CMat::Identity(2, 2)};
    LcogState deconv = core;  // covariance already reset to the vacuum
    auto pm = photon_moments(deconv);
    rep.photon_mean = pm.mean;
    rep.photon_variance = pm.variance;
    const int rp = static_cast<int>(std::ceil(pm.mean + opt.k_std * std::sqrt(std::max(0.0, pm.variance))));
    rep.rank = std::max(rp, 0);
    CMat rho = coherent_to_fock(terms, rep.rank);
    rho = 0.5 * (rho + rho.adjoint());
    rep.eps_out = opt.eps_out > 0 ? opt.eps_out : default_superposition_radius(rep.rank);
    out = fock_density_to_ring(rho, rep.eps_out);
    out.covs = {(kHbar / 2.0) * (1.0 + rep.nu) * CMat::Identity(2, 2)};
    out.stellar_rank = -1;
  }
  out = apply_symplectic(out, wd.S, {0});
  out = normalized(out);
  if (in.reduced) out = to_reduced_form(out);
  rep.state = std::move(out);
  return rep;
}

LcogState rank_reduce(const LcogState& s, double eps_out, double k_std) {
  ReduceOptions opt;
  opt.eps_out = eps_out;
  opt.k_std = k_std;
  return rank_reduce_report(s, opt).state;
}

}  // namespace lcg
