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

#include "lcg/lcog_state.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "lcg/detail.hpp"

#ifdef LCG_HAVE_OPENMP
#include <omp.h>
#endif

namespace lcg {

namespace {
int g_threads = 0;
}

void set_num_threads(int n) {
  g_threads = n;
#ifdef LCG_HAVE_OPENMP
  if (n > 0) omp_set_num_threads(n);
#endif
}

int num_threads() { return g_threads; }

namespace detail {

PairPlan plan_pairs(int na, int ka, bool ra, int nb, int kb, bool rb) {
  PairPlan plan;
  if (!(ra && rb)) {
    plan.jobs.reserve(static_cast<size_t>(na) * nb);
    for (int m = 0; m < na; ++m)
      for (int n = 0; n < nb; ++n) plan.jobs.push_back({m, n, false, false, 0.0});
    plan.num_real = na * nb;
    plan.reduced = false;
    return plan;
  }
  plan.reduced = true;
  plan.jobs.reserve(static_cast<size_t>(ka) * kb + static_cast<size_t>(ka) * (nb - kb) +
                    static_cast<size_t>(na - ka) * kb + 2 * static_cast<size_t>(na - ka) * (nb - kb));
  for (int m = 0; m < ka; ++m)
    for (int n = 0; n < kb; ++n) plan.jobs.push_back({m, n, false, false, 0.0});
  plan.num_real = static_cast<int>(plan.jobs.size());
  for (int m = 0; m < na; ++m) {
    for (int n = 0; n < nb; ++n) {
      bool ia = m >= ka, ib = n >= kb;
      if (!ia && !ib) continue;
      if (ia && ib) {
        plan.jobs.push_back({m, n, false, false, -kLn2});
        plan.jobs.push_back({m, n, false, true, -kLn2});
      } else {
        plan.jobs.push_back({m, n, false, false, 0.0});
      }
    }
  }
  return plan;
}

RealSum real_sum(const CVec& c, int count) {
  RealSum rs;
  if (count == 0) {
    rs.shift = -std::numeric_limits<double>::infinity();
    return rs;
  }
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) mx = std::max(mx, c(i).real());
  rs.shift = mx;
  if (!std::isfinite(mx)) return rs;
  CompensatedSum sum;
  double abs_acc = 0;
  for (int i = 0; i < count; ++i) {
    double a = std::exp(c(i).real() - mx);
    sum.add(a * std::cos(c(i).imag()));
    abs_acc += a;
  }
  const double acc = sum.value();
  rs.value = acc;
  rs.log_abs = mx + std::log(abs_acc);
  rs.kappa = acc != 0.0 ? abs_acc / std::abs(acc) : std::numeric_limits<double>::infinity();
  return rs;
}

RealSum real_sum(const CVec& c) { return real_sum(c, static_cast<int>(c.size())); }

cd log_det(const CMat& a) {
  if (is_real(a)) {
    Eigen::PartialPivLU<Mat> lu(a.real());
    const Mat& u = lu.matrixLU();
    double acc = 0;
    int sign = lu.permutationP().determinant() < 0 ? -1 : 1;
    for (int i = 0; i < u.rows(); ++i) {
      acc += std::log(std::abs(u(i, i)));
      if (u(i, i) < 0) sign = -sign;
    }
    return sign < 0 ? cd(acc, kPi) : cd(acc, 0.0);
  }
  // Branch of det^(1/2) continuous from the real positive-definite case.
  Eigen::ComplexEigenSolver<CMat> es(a, false);
  cd acc = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) acc += std::log(es.eigenvalues()(i));
  return acc;
}

double checked_log_prob(const RealSum& rs, const char* what) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double abs_sum = std::exp(rs.log_abs - rs.shift);
  if (rs.value < -1e-12 * abs_sum) {
    throw NumericalStabilityError(std::string(what) + ": negative probability (increase the ring radius)");
  }
  if (rs.value <= abs_sum * eps * 1e3) {
    throw NumericalStabilityError(std::string(what) + ": probability is below the rounding floor of the weighted sum");
  }
  // Relative rounding error of the sum grows like kappa * eps.
  if (rs.kappa * eps > kMaxRounding) {
    throw NumericalStabilityError(std::string(what) + ": weighted sum is ill-conditioned (kappa = " +
                                  std::to_string(rs.kappa) + "); increase the ring radius");
  }
  return rs.shift + std::log(rs.value);
}

}  // namespace detail

void LcogState::check() const {
  const int n = num_weights();
  if (num_modes < 1) throw InvalidArgument("state needs at least one mode");
  if (means.rows() != dim() || means.cols() != n) throw InvalidArgument("means have the wrong shape");
  if (covs.empty()) throw InvalidArgument("state has no covariance");
  if (covs.size() > 1 && cov_index.size() != n) throw InvalidArgument("covariance index has the wrong length");
  if (num_k < 0 || num_k > n) throw InvalidArgument("num_k out of range");
  if (!reduced && num_k != n) throw InvalidArgument("full-form state must have num_k == num_weights");
  for (const auto& c : covs) {
    if (c.rows() != dim() || c.cols() != dim()) throw InvalidArgument("covariance has the wrong shape");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (c.real() + c.real().transpose()));
    if (es.eigenvalues().minCoeff() < 1e-12) throw InvalidArgument("covariance real part is not positive definite");
  }
}

void coherent_outer(cd a, cd b, cd& mu_x, cd& mu_p, cd& d) {
  const double s = std::sqrt(kHbar / 2.0);
  mu_x = s * cd((a + b).real(), (a - b).imag());
  mu_p = s * cd((a + b).imag(), (b - a).real());
  cd diff = a - b;
  d = cd(-0.5 * std::norm(diff), a.imag() * b.real() - b.imag() * a.real());
}

LcogState vacuum(int num_modes) {
  if (num_modes < 1) throw InvalidArgument("vacuum needs at least one mode");
  LcogState s;
  s.num_modes = num_modes;
  s.log_weights = CVec::Zero(1);
  s.means = CMat::Zero(2 * num_modes, 1);
  s.covs = {(kHbar / 2.0) * CMat::Identity(2 * num_modes, 2 * num_modes)};
  s.num_k = 1;
  return s;
}

LcogState gaussian_state(const Mat& cov, const Vec& mean) {
  if (cov.rows() != cov.cols() || cov.rows() % 2 || mean.size() != cov.rows()) {
    throw InvalidArgument("gaussian_state: shape mismatch");
  }
  LcogState s;
  s.num_modes = static_cast<int>(cov.rows() / 2);
  s.log_weights = CVec::Zero(1);
  s.means = mean.cast<cd>();
  s.covs = {cov.cast<cd>()};
  s.num_k = 1;
  s.check();
  return s;
}

LcogState coherent_state(cd alpha) {
  Mat cov = (kHbar / 2.0) * Mat::Identity(2, 2);
  return gaussian_state(cov, displacement_vector(alpha));
}

LcogState thermal_state(double nbar) {
  if (!(nbar >= 0)) throw InvalidArgument("thermal occupation must be non-negative");
  return gaussian_state((kHbar / 2.0) * (2 * nbar + 1) * Mat::Identity(2, 2), Vec::Zero(2));
}

LcogState from_coherent_superposition(const CoherentSuperposition& spec, bool reduced) {
  const size_t K = spec.coeffs.size();
  if (K == 0 || spec.alphas.size() != K) throw InvalidArgument("superposition needs matching coefficients and amplitudes");
  std::vector<cd> la;
  std::vector<cd> al;
  for (size_t k = 0; k < K; ++k) {
    if (spec.coeffs[k] == 0.0) continue;
    la.push_back(std::log(spec.coeffs[k]));
    al.push_back(spec.alphas[k]);
  }
  if (la.empty()) throw DegenerateState("all superposition coefficients vanish");
  const int n = static_cast<int>(la.size());
  Mat S = squeeze_symplectic(std::abs(spec.z), std::arg(spec.z));

  std::vector<std::pair<int, int>> pairs;
  if (reduced) {
    for (int k = 0; k < n; ++k) pairs.push_back({k, k});
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) pairs.push_back({k, l});
  } else {
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) pairs.push_back({k, l});
  }
  LcogState s;
  s.num_modes = 1;
  s.reduced = reduced;
  s.log_weights.resize(pairs.size());
  s.means.resize(2, pairs.size());
  for (size_t j = 0; j < pairs.size(); ++j) {
    auto [k, l] = pairs[j];
    cd mx, mp, d;
    coherent_outer(al[k], al[l], mx, mp, d);
    cd w = la[k] + std::conj(la[l]) + d;
    if (reduced && k != l) w += kLn2;
    s.log_weights(j) = wrap_phase(w);
    Eigen::Vector2cd mu(mx, mp);
    s.means.col(j) = S.cast<cd>() * mu;
  }
  s.covs = {(kHbar / 2.0) * (S * S.transpose()).cast<cd>()};
  s.num_k = reduced ? n : static_cast<int>(pairs.size());
  return normalized(s);
}

namespace {

Mat embed_zero(const Mat& b, const std::vector<int>& modes, int N) {
  Mat out = Mat::Zero(2 * N, 2 * N);
  for (size_t a = 0; a < modes.size(); ++a)
    for (size_t c = 0; c < modes.size(); ++c) out.block<2, 2>(2 * modes[a], 2 * modes[c]) = b.block<2, 2>(2 * a, 2 * c);
  return out;
}

CMat conj_if(const CMat& m, bool c) { return c ? CMat(m.conjugate()) : m; }

// Pool bookkeeping for products: key (pool a, conj a, pool b, conj b).
struct PoolMap {
  std::map<std::tuple<int, bool, int, bool>, int> ids;
  int lookup(int ia, bool ca, int ib, bool cb, bool& fresh) {
    auto key = std::make_tuple(ia, ca, ib, cb);
    auto it = ids.find(key);
    if (it != ids.end()) {
      fresh = false;
      return it->second;
    }
    int id = static_cast<int>(ids.size());
    ids[key] = id;
    fresh = true;
    return id;
  }
};

}  // namespace

LcogState tensor(const LcogState& a, const LcogState& b) {
  if (a.tape || b.tape) throw InvalidArgument("tensor of states with gradient tapes is not supported");
  LcogState A = a, B = b;
  if (A.reduced != B.reduced) {
    A = to_full_form(A);
    B = to_full_form(B);
  }
  auto plan = detail::plan_pairs(A.num_weights(), A.num_k, A.reduced, B.num_weights(), B.num_k, B.reduced);
  const int na = A.dim(), nb = B.dim();
  LcogState s;
  s.num_modes = A.num_modes + B.num_modes;
  s.reduced = plan.reduced;
  s.num_k = plan.num_real;
  s.stellar_rank = A.stellar_rank + B.stellar_rank;
  const int nout = static_cast<int>(plan.jobs.size());
  s.log_weights.resize(nout);
  s.means.resize(na + nb, nout);
  PoolMap pm;
  std::vector<int> idx(nout);
  for (int j = 0; j < nout; ++j) {
    const auto& job = plan.jobs[j];
    cd ca = job.conj_a ? std::conj(A.log_weights(job.m)) : A.log_weights(job.m);
    cd cb = job.conj_b ? std::conj(B.log_weights(job.n)) : B.log_weights(job.n);
    s.log_weights(j) = wrap_phase(ca + cb + job.offset);
    s.means.col(j).head(na) = job.conj_a ? CVec(A.means.col(job.m).conjugate()) : CVec(A.means.col(job.m));
    s.means.col(j).tail(nb) = job.conj_b ? CVec(B.means.col(job.n).conjugate()) : CVec(B.means.col(job.n));
    int ia = A.cov_id(job.m), ib = B.cov_id(job.n);
    bool cra = job.conj_a && !detail::is_real(A.covs[ia]);
    bool crb = job.conj_b && !detail::is_real(B.covs[ib]);
    bool fresh;
    idx[j] = pm.lookup(ia, cra, ib, crb, fresh);
    if (fresh) {
      CMat c = CMat::Zero(na + nb, na + nb);
      c.topLeftCorner(na, na) = conj_if(A.covs[ia], cra);
      c.bottomRightCorner(nb, nb) = conj_if(B.covs[ib], crb);
      s.covs.push_back(c);
    }
  }
  if (s.covs.size() > 1) s.cov_index = Eigen::Map<IVec>(idx.data(), nout);
  return s;
}

LcogState apply_symplectic(const LcogState& in, const Mat& Sblock, const std::vector<int>& modes, const Vec& dblock,
                           const std::vector<Mat>* dS, const std::vector<Vec>* dd) {
  const int N = in.num_modes;
  Mat S = Sblock.rows() == 2 * N && modes.empty() ? Sblock : embed(Sblock, modes, N);
  Vec d = Vec::Zero(2 * N);
  if (dblock.size()) d = (dblock.size() == 2 * N && modes.empty()) ? dblock : embed_vector(dblock, modes, N);
  LcogState s = in;
  const CMat Sc = S.cast<cd>();
  s.means = Sc * in.means;
  s.means.colwise() += d.cast<cd>();
  for (size_t i = 0; i < s.covs.size(); ++i) s.covs[i] = Sc * in.covs[i] * Sc.transpose();
  if (s.tape) {
    auto& t = *s.tape;
    for (int g = 0; g < t.n_g; ++g) {
      Mat dSg = Mat::Zero(2 * N, 2 * N);
      Vec ddg = Vec::Zero(2 * N);
      if (dS) {
        const Mat& m = (*dS)[g];
        dSg = (m.rows() == 2 * N && modes.empty()) ? m : embed_zero(m, modes, N);
      }
      if (dd) {
        const Vec& v = (*dd)[g];
        ddg = v.size() == 2 * N && modes.empty() ? v : embed_vector(v, modes, N);
      }
      const CMat dSc = dSg.cast<cd>();
      t.d_means[g] = Sc * t.d_means[g] + dSc * in.means;
      t.d_means[g].colwise() += ddg.cast<cd>();
      for (size_t i = 0; i < s.covs.size(); ++i) {
        t.d_covs[g][i] = Sc * t.d_covs[g][i] * Sc.transpose() + dSc * in.covs[i] * Sc.transpose() +
                         Sc * in.covs[i] * dSc.transpose();
      }
    }
  }
  return s;
}

LcogState apply_channel(const LcogState& in, const GaussianChannel& chb, const std::vector<int>& modes) {
  validate_channel(chb);
  const int N = in.num_modes;
  Mat X, Y;
  Vec d = Vec::Zero(2 * N);
  if (chb.X.rows() == 2 * N && modes.empty()) {
    X = chb.X;
    Y = chb.Y;
    if (chb.d.size()) d = chb.d;
  } else {
    X = embed(chb.X, modes, N);
    Y = embed_zero(chb.Y, modes, N);
    if (chb.d.size()) d = embed_vector(chb.d, modes, N);
  }
  LcogState s = in;
  const CMat Xc = X.cast<cd>();
  s.means = Xc * in.means;
  s.means.colwise() += d.cast<cd>();
  for (size_t i = 0; i < s.covs.size(); ++i) s.covs[i] = Xc * in.covs[i] * Xc.transpose() + Y.cast<cd>();
  if (s.tape) {
    auto& t = *s.tape;
    for (int g = 0; g < t.n_g; ++g) {
      t.d_means[g] = Xc * t.d_means[g];
      for (auto& dc : t.d_covs[g]) dc = Xc * dc * Xc.transpose();
    }
  }
  return s;
}

double log_norm(const LcogState& s) {
  auto rs = detail::real_sum(s.log_weights);
  if (!(rs.value > 0.0)) throw DegenerateState("state has non-positive norm");
  return rs.shift + std::log(rs.value);
}

LcogState normalized(const LcogState& in) {
  LcogState s = in;
  double ln = log_norm(s);
  for (int i = 0; i < s.num_weights(); ++i) s.log_weights(i) = wrap_phase(s.log_weights(i) - ln);
  if (s.tape) {
    auto& t = *s.tape;
    const int n = s.num_weights();
    Vec dln = Vec::Zero(t.n_g);
    CVec e(n);
    double mx = s.log_weights.real().maxCoeff();
    for (int i = 0; i < n; ++i) e(i) = std::exp(s.log_weights(i) - mx);
    double p = e.real().sum();
    for (int g = 0; g < t.n_g; ++g) dln(g) = (t.d_log_weights.col(g).transpose() * e)(0).real() / p;
    for (int g = 0; g < t.n_g; ++g) t.d_log_weights.col(g).array() -= dln(g);
  }
  return s;
}

LcogState to_full_form(const LcogState& in) {
  if (!in.reduced) return in;
  const int n = in.num_weights(), k = in.num_k;
  const int nout = 2 * n - k;
  LcogState s;
  s.num_modes = in.num_modes;
  s.stellar_rank = in.stellar_rank;
  s.log_weights.resize(nout);
  s.means.resize(in.dim(), nout);
  s.covs = in.covs;
  std::vector<int> conj_id(in.covs.size(), -1);
  std::vector<int> idx(nout);
  auto conj_pool = [&](int i) {
    if (detail::is_real(in.covs[i])) return i;
    if (conj_id[i] < 0) {
      conj_id[i] = static_cast<int>(s.covs.size());
      s.covs.push_back(in.covs[i].conjugate());
    }
    return conj_id[i];
  };
  std::vector<std::pair<int, bool>> src(nout);
  for (int m = 0; m < k; ++m) src[m] = {m, false};
  for (int m = k; m < n; ++m) {
    src[k + 2 * (m - k)] = {m, false};
    src[k + 2 * (m - k) + 1] = {m, true};
  }
  for (int j = 0; j < nout; ++j) {
    auto [m, c] = src[j];
    cd w = in.log_weights(m) - (m >= k ? kLn2 : 0.0);
    s.log_weights(j) = c ? std::conj(w) : w;
    s.means.col(j) = c ? CVec(in.means.col(m).conjugate()) : CVec(in.means.col(m));
    idx[j] = c ? conj_pool(in.cov_id(m)) : in.cov_id(m);
  }
  if (s.covs.size() > 1) s.cov_index = Eigen::Map<IVec>(idx.data(), nout);
  s.num_k = nout;
  if (in.tape) {
    const auto& ti = *in.tape;
    GradientTape t;
    t.n_g = ti.n_g;
    t.d_log_prob = ti.d_log_prob;
    t.d_log_weights.resize(nout, t.n_g);
    t.d_means.assign(t.n_g, CMat(in.dim(), nout));
    t.d_covs.assign(t.n_g, std::vector<CMat>(s.covs.size()));
    for (int g = 0; g < t.n_g; ++g) {
      for (int j = 0; j < nout; ++j) {
        auto [m, c] = src[j];
        t.d_log_weights(j, g) = c ? std::conj(ti.d_log_weights(m, g)) : ti.d_log_weights(m, g);
        t.d_means[g].col(j) = c ? CVec(ti.d_means[g].col(m).conjugate()) : CVec(ti.d_means[g].col(m));
      }
      for (size_t i = 0; i < in.covs.size(); ++i) {
        t.d_covs[g][i] = ti.d_covs[g][i];
        if (conj_id[i] >= 0) t.d_covs[g][conj_id[i]] = ti.d_covs[g][i].conjugate();
      }
    }
    s.tape = std::move(t);
  }
  return s;
}

LcogState to_reduced_form(const LcogState& in, double tol) {
  if (in.reduced) return in;
  if (in.tape) throw InvalidArgument("reduction of states with gradient tapes is not supported");
  const int n = in.num_weights();
  auto is_real_term = [&](int m) {
    double scale = 1.0 + in.means.col(m).cwiseAbs().maxCoeff();
    return std::abs(std::sin(in.log_weights(m).imag())) <= tol && in.means.col(m).imag().cwiseAbs().maxCoeff() <= tol * scale &&
           detail::is_real(in.cov(m));
  };
  std::vector<int> reals, cplx;
  for (int m = 0; m < n; ++m) (is_real_term(m) ? reals : cplx).push_back(m);
  std::sort(cplx.begin(), cplx.end(), [&](int a, int b) { return in.log_weights(a).real() < in.log_weights(b).real(); });
  std::vector<char> used(n, 0);
  std::vector<int> keep;
  for (size_t i = 0; i < cplx.size(); ++i) {
    int a = cplx[i];
    if (used[a]) continue;
    double ca = in.log_weights(a).real();
    double scale = 1.0 + std::abs(ca);
    bool found = false;
    for (size_t j = i + 1; j < cplx.size(); ++j) {
      int b = cplx[j];
      if (in.log_weights(b).real() - ca > tol * scale) break;
      if (used[b]) continue;
      cd dw = std::exp(cd(0, in.log_weights(a).imag())) - std::exp(cd(0, -in.log_weights(b).imag()));
      if (std::abs(dw) > tol) continue;
      double ms = 1.0 + in.means.col(a).cwiseAbs().maxCoeff();
      if ((in.means.col(a) - in.means.col(b).conjugate()).cwiseAbs().maxCoeff() > tol * ms) continue;
      if ((in.cov(a) - in.cov(b).conjugate()).cwiseAbs().maxCoeff() > tol * (1.0 + in.cov(a).cwiseAbs().maxCoeff())) {
        continue;
      }
      used[a] = used[b] = 1;
      keep.push_back(a);
      found = true;
      break;
    }
    if (!found) throw InvalidArgument("state is not conjugate-symmetric; cannot reduce");
  }
  LcogState s;
  s.num_modes = in.num_modes;
  s.reduced = true;
  s.stellar_rank = in.stellar_rank;
  s.num_k = static_cast<int>(reals.size());
  const int nout = s.num_k + static_cast<int>(keep.size());
  s.log_weights.resize(nout);
  s.means.resize(in.dim(), nout);
  std::vector<int> idx(nout);
  int j = 0;
  for (int m : reals) {
    s.log_weights(j) = cd(in.log_weights(m).real(), std::cos(in.log_weights(m).imag()) < 0 ? kPi : 0.0);
    s.means.col(j) = in.means.col(m).real().cast<cd>();
    idx[j++] = in.cov_id(m);
  }
  for (int m : keep) {
    s.log_weights(j) = wrap_phase(in.log_weights(m) + kLn2);
    s.means.col(j) = in.means.col(m);
    idx[j++] = in.cov_id(m);
  }
  s.covs = in.covs;
  if (s.covs.size() > 1) s.cov_index = Eigen::Map<IVec>(idx.data(), nout);
  return s;
}

cd wigner(const LcogState& s, const Vec& q) {
  if (q.size() != s.dim()) throw InvalidArgument("phase-space point has the wrong dimension");
  std::vector<CMat> inv;
  std::vector<cd> ld;
  for (const auto& c : s.covs) {
    inv.push_back(c.inverse());
    ld.push_back(detail::log_det(2 * kPi * c));
  }
  const int n = s.num_weights();
  CVec e(n);
  CVec qc = q.cast<cd>();
  for (int m = 0; m < n; ++m) {
    int i = s.cov_id(m);
    CVec v = qc - s.means.col(m);
    cd quad = (v.transpose() * inv[i] * v)(0);
    e(m) = s.log_weights(m) - 0.5 * quad - 0.5 * ld[i];
  }
  double mx = e.real().maxCoeff();
  cd acc = 0;
  for (int m = 0; m < n; ++m) acc += std::exp(e(m) - mx);
  acc *= std::exp(mx);
  return s.reduced ? cd(acc.real(), 0.0) : acc;
}

LcogState prune(const LcogState& in, double rel_threshold) {
  if (in.tape) throw InvalidArgument("pruning of states with gradient tapes is not supported");
  const double cut = in.log_weights.real().maxCoeff() + std::log(rel_threshold);
  std::vector<int> keep;
  int k = 0;
  for (int m = 0; m < in.num_weights(); ++m) {
    if (in.log_weights(m).real() >= cut) {
      keep.push_back(m);
      if (m < in.num_k) ++k;
    }
  }
  LcogState s = in;
  s.log_weights.resize(keep.size());
  s.means.resize(in.dim(), keep.size());
  IVec idx(keep.size());
  for (size_t j = 0; j < keep.size(); ++j) {
    s.log_weights(j) = in.log_weights(keep[j]);
    s.means.col(j) = in.means.col(keep[j]);
    idx(j) = in.cov_id(keep[j]);
  }
  s.num_k = in.reduced ? k : static_cast<int>(keep.size());
  if (s.covs.size() > 1) s.cov_index = idx;
  return s;
}

}  // namespace lcg
