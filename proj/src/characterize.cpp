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

#include "lcg/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <tuple>

#include "lcg/detail.hpp"
#include "lcg/phase_space.hpp"

namespace lcg {

namespace {

// Single-mode states sharing one real covariance. In the Williamson frame the
// covariance is s*I and exp(mu.nu / 2s) factorises over monomials, so
// Tr(rho sigma) = (1/s) sum_ab F_ab G_ab with F_ab = Re sum_m w_m e^{-mu^2/4s} u^a t^b / sqrt(a! b!).
std::optional<double> overlap_shared_frame(const LcogState& a, const LcogState& b) {
  if (a.num_modes != 1 || b.num_modes != 1 || !a.shared_cov() || !b.shared_cov()) return std::nullopt;
  if (!detail::is_real(a.covs[0]) || !detail::is_real(b.covs[0])) return std::nullopt;
  const Mat sa = a.covs[0].real();
  if ((sa - b.covs[0].real()).cwiseAbs().maxCoeff() > 1e-12 * sa.cwiseAbs().maxCoeff()) return std::nullopt;
  const auto wd = williamson(sa);
  const double sc = 1.0 + wd.nu(0, 0);
  const CMat Sinv = wd.S.inverse().cast<cd>() / std::sqrt(2.0 * sc);
  const CMat ua = Sinv * a.means, ub = Sinv * b.means;
  double umax = 0;
  for (const CMat* u : {&ua, &ub})
    if (u->size()) umax = std::max(umax, u->cwiseAbs().maxCoeff());
  const int A = static_cast<int>(std::ceil(umax * umax + 10.0 * umax + 20.0));
  if (A > 800) return std::nullopt;
  auto moments = [&](const LcogState& st, const CMat& u) {
    const int J = st.num_weights();
    // log weight times exp(-mu.mu / 4s), written in the scaled frame
    CVec L(J);
    for (int m = 0; m < J; ++m) L(m) = st.log_weights(m) - 0.5 * (u(0, m) * u(0, m) + u(1, m) * u(1, m));
    const double shift = J ? L.real().maxCoeff() : 0.0;
    CMat F = CMat::Zero(A, A);
    constexpr int kChunk = 2048;
    CMat X(A, kChunk), T(A, kChunk);
    for (int m0 = 0; m0 < J; m0 += kChunk) {
      const int c = std::min(kChunk, J - m0);
      for (int k = 0; k < c; ++k) {
        const int m = m0 + k;
        cd px = std::exp(L(m) - shift), pt = 1.0;
        for (int i = 0; i < A; ++i) {
          X(i, k) = px;
          T(i, k) = pt;
          px *= u(0, m) / std::sqrt(i + 1.0);
          pt *= u(1, m) / std::sqrt(i + 1.0);
        }
      }
      F.noalias() += X.leftCols(c) * T.leftCols(c).transpose();
    }
    return std::make_pair(Mat(F.real()), shift);
  };
  auto [Fa, la] = moments(a, ua);
  auto [Fb, lb] = moments(b, ub);
  return std::exp(la + lb) * (Fa.array() * Fb.array()).sum() / sc;
}

}  // namespace

double overlap(const LcogState& a0, const LcogState& b0) {
  if (a0.num_modes != b0.num_modes) throw InvalidArgument("overlap needs states with the same mode count");
  if (auto v = overlap_shared_frame(a0, b0)) return *v;
  LcogState a = a0, b = b0;
  a.tape.reset();
  b.tape.reset();
  if (a.reduced != b.reduced) {
    a = to_full_form(a);
    b = to_full_form(b);
  }
  const int N = a.num_modes;
  auto plan = detail::plan_pairs(a.num_weights(), a.num_k, a.reduced, b.num_weights(), b.num_k, b.reduced);
  struct C {
    CMat inv;
    cd ld;
  };
  std::map<std::tuple<int, int, bool>, C> cache;
  const double pref = N * std::log(2 * kPi * kHbar);
  CVec e(plan.jobs.size());
  for (size_t j = 0; j < plan.jobs.size(); ++j) {
    const auto& job = plan.jobs[j];
    int ia = a.cov_id(job.m), ib = b.cov_id(job.n);
    bool cb = job.conj_b && !detail::is_real(b.covs[ib]);
    auto key = std::make_tuple(ia, ib, cb);
    auto it = cache.find(key);
    if (it == cache.end()) {
      CMat sum = a.covs[ia] + (cb ? CMat(b.covs[ib].conjugate()) : b.covs[ib]);
      Eigen::PartialPivLU<CMat> lu(sum);
      if (std::abs(lu.determinant()) < 1e-300) throw NumericalStabilityError("singular covariance sum in overlap");
      it = cache.emplace(key, C{lu.inverse(), detail::log_det(2 * kPi * sum)}).first;
    }
    CVec nu = b.means.col(job.n);
    if (job.conj_b) nu = nu.conjugate();
    CVec v = a.means.col(job.m) - nu;
    cd db = job.conj_b ? std::conj(b.log_weights(job.n)) : b.log_weights(job.n);
    e(j) = a.log_weights(job.m) + db + job.offset - 0.5 * (v.transpose() * it->second.inv * v)(0) -
           0.5 * it->second.ld + pref;
  }
  double mx = e.real().maxCoeff();
  detail::ComplexCompensatedSum sum;
  double abs_acc = 0;
  for (int j = 0; j < e.size(); ++j) {
    cd t = std::exp(e(j) - mx);
    sum.add(t);
    abs_acc += std::abs(t);
  }
  const cd acc = sum.value();
  if (!plan.reduced && std::abs(acc.imag()) > 1e-9 * std::max(abs_acc, 1.0)) {
    throw NumericalStabilityError("overlap has a non-negligible imaginary part");
  }
  return std::exp(mx) * acc.real();
}

double purity(const LcogState& s) { return overlap(s, s); }

double normalized_overlap(const LcogState& a, const LcogState& b) {
  return overlap(a, b) / std::sqrt(purity(a) * purity(b));
}

cd char_fun(const LcogState& s, const Vec& alpha) {
  if (alpha.size() != s.dim()) throw InvalidArgument("char_fun: displacement has the wrong dimension");
  const Mat om = omega(s.num_modes);
  const CVec oa = (om * alpha).cast<cd>();
  const CVec ota = (om.transpose() * alpha).cast<cd>();
  std::vector<cd> quad;
  for (const auto& c : s.covs) quad.push_back((ota.transpose() * c * ota)(0));
  const int n = s.num_weights();
  CVec e(n);
  for (int m = 0; m < n; ++m) {
    e(m) = s.log_weights(m) + cd(0, 1) * (s.means.col(m).transpose() * oa)(0) - 0.5 * quad[s.cov_id(m)];
  }
  double mx = e.real().maxCoeff();
  detail::ComplexCompensatedSum acc;
  for (int m = 0; m < n; ++m) {
    if (s.reduced && m >= s.num_k) {
      // Conjugate partner: conj(c), conj(mu), conj(sigma).
      cd ec = std::conj(s.log_weights(m)) + cd(0, 1) * (s.means.col(m).conjugate().transpose() * oa)(0) -
              0.5 * std::conj(quad[s.cov_id(m)]);
      acc.add(0.5 * (std::exp(e(m) - mx) + std::exp(ec - mx)));
    } else {
      acc.add(std::exp(e(m) - mx));
    }
  }
  return std::exp(mx) * acc.value();
}

Vec stabilizer_point(Quadrature q, double amplitude) {
  Vec a = Vec::Zero(2);
  // Delta_x uses the p stabilizer (a displacement along p) and vice versa.
  if (q == Quadrature::x) a(1) = amplitude;
  else a(0) = amplitude;
  return a;
}

Squeezing effective_squeezing(const LcogState& s, Quadrature q, double amplitude) {
  if (s.num_modes != 1) throw InvalidArgument("effective squeezing needs a single-mode state");
  const double chi = std::abs(char_fun(s, stabilizer_point(q, amplitude)));
  if (!(chi > 0)) throw NumericalStabilityError("effective squeezing undefined: |chi| = 0");
  Squeezing out;
  out.value = std::sqrt(std::max(0.0, -2.0 / (amplitude * amplitude) * std::log(chi)));
  out.db = delta_to_db(out.value);
  return out;
}

SqueezingSummary squeezing_summary(const LcogState& s, double amplitude) {
  SqueezingSummary out;
  out.x = effective_squeezing(s, Quadrature::x, amplitude);
  out.p = effective_squeezing(s, Quadrature::p, amplitude);
  out.delta_s = std::sqrt(0.5 * (out.x.value * out.x.value + out.p.value * out.p.value));
  out.delta_s_db = delta_to_db(out.delta_s);
  return out;
}

std::vector<std::pair<double, Vec>> gkp_displacements(const GkpOperatorSpec& spec) {
  const double a = std::sqrt(2 * kPi);
  double full = a, half = a / 2;
  if (spec.lattice == GkpLattice::qunaught) {
    full = a / std::sqrt(2.0);
    half = std::sqrt(2.0) * a / 2;
  }
  const double sgn = (spec.j % 2) ? -1.0 : 1.0;
  Vec d1(2), d2(2);
  d1 << full, 0.0;
  d2 << 0.0, half;
  // xi = 2 - Re chi(a) - (-1)^j Re chi(i a / 2), using chi(-a) = conj chi(a).
  return {{-1.0, d1}, {-sgn, d2}};
}

Squeezing gkp_nonlinear_squeezing(const LcogState& s, const GkpOperatorSpec& spec) {
  if (s.num_modes != 1) throw InvalidArgument("GKP squeezing needs a single-mode state");
  double xi = 2.0;
  for (const auto& [coef, a] : gkp_displacements(spec)) xi += coef * char_fun(s, a).real();
  Squeezing out;
  out.value = xi;
  out.db = -10.0 * std::log10(xi);
  return out;
}

std::vector<double> wigner_grid(const LcogState& s0, const std::vector<Vec>& points) {
  LcogState s = s0;
  s.tape.reset();
  std::vector<double> out(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    cd w = wigner(s, points[i]);
    out[i] = w.real();
  }
  return out;
}

std::vector<Vec> grid_points(double xmin, double xmax, int nx, double pmin, double pmax, int np) {
  if (nx < 1 || np < 1) throw InvalidArgument("grid needs at least one point per axis");
  std::vector<Vec> pts;
  for (int j = 0; j < np; ++j) {
    double p = np == 1 ? pmin : pmin + (pmax - pmin) * j / (np - 1);
    for (int i = 0; i < nx; ++i) {
      double x = nx == 1 ? xmin : xmin + (xmax - xmin) * i / (nx - 1);
      Vec q(2);
      q << x, p;
      pts.push_back(q);
    }
  }
  return pts;
}

PhotonMoments photon_moments(const LcogState& s) {
  if (s.num_modes != 1) throw InvalidArgument("photon moments need a single-mode state");
  const double h = kHbar;
  const int n = s.num_weights();
  const double mx = s.log_weights.real().maxCoeff();
  cd m1 = 0, m2 = 0, z = 0;
  for (int m = 0; m < n; ++m) {
    const CMat& c = s.cov(m);
    CVec mu = s.means.col(m);
    cd tr = c.trace();
    cd mm = (mu.transpose() * mu)(0);
    cd mean = (tr + mm) / (2 * h) - 0.5;
    cd tr2 = (c * c).trace();
    cd msm = (mu.transpose() * c * mu)(0);
    cd var = (tr2 + 2.0 * msm) / (2 * h * h) - 0.25;
    cd w = std::exp(s.log_weights(m) - mx);
    z += w;
    m1 += w * mean;
    m2 += w * (var + mean * mean);
  }
  PhotonMoments out;
  out.mean = m1.real() / z.real();
  out.variance = m2.real() / z.real() - out.mean * out.mean;
  return out;
}

}  // namespace lcg
