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

#include "lcg/measure.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include "lcg/detail.hpp"

namespace lcg {

namespace {

// Row permutation moving the measured mode to the front.
std::vector<int> front_order(int num_modes, int mode) {
  std::vector<int> rows = {2 * mode, 2 * mode + 1};
  for (int r = 0; r < 2 * num_modes; ++r)
    if (r / 2 != mode) rows.push_back(r);
  return rows;
}

CMat permute_rows(const CMat& m, const std::vector<int>& rows) {
  CMat out(m.rows(), m.cols());
  for (size_t i = 0; i < rows.size(); ++i) out.row(i) = m.row(rows[i]);
  return out;
}

CMat permute_sym(const CMat& m, const std::vector<int>& rows) {
  CMat out(m.rows(), m.cols());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows.size(); ++j) out(i, j) = m(rows[i], rows[j]);
  return out;
}

struct PairCache {
  bool identity = false;
  CMat sigA, K, out;
  Eigen::Matrix2cd Ainv;
  cd ld = 0;
  std::vector<Eigen::Matrix2cd> dAinv;
  std::vector<CMat> dK, dout;
  std::vector<cd> dtr;
};

struct Contraction {
  LcogState out;
  detail::RealSum rs;
};

Contraction contract(const LcogState& in, int mode, const Povm& pin) {
  if (mode < 0 || mode >= in.num_modes) throw InvalidArgument("measured mode out of range");
  if (pin.means.rows() != 2) throw InvalidArgument("POVM must be single-mode");
  LcogState st = in;
  Povm pv = pin;
  if (st.reduced != pv.reduced) {
    st = to_full_form(st);
    pv = povm_to_full_form(pv);
  }
  const int N = st.num_modes;
  const int dA = 2 * (N - 1);
  const auto rows = front_order(N, mode);
  const CMat means = permute_rows(st.means, rows);
  std::vector<CMat> covs;
  for (const auto& c : st.covs) covs.push_back(permute_sym(c, rows));
  const bool grad = st.tape.has_value();
  const int ng = grad ? st.tape->n_g : 0;
  std::vector<CMat> dmeans;
  std::vector<std::vector<CMat>> dcovs;
  if (grad) {
    for (int g = 0; g < ng; ++g) {
      dmeans.push_back(permute_rows(st.tape->d_means[g], rows));
      std::vector<CMat> dc;
      for (const auto& c : st.tape->d_covs[g]) dc.push_back(permute_sym(c, rows));
      dcovs.push_back(std::move(dc));
    }
  }

  auto plan = detail::plan_pairs(st.num_weights(), st.num_k, st.reduced, pv.size(), pv.num_k, pv.reduced);
  const int nout = static_cast<int>(plan.jobs.size());

  // Per (state covariance, POVM covariance) pair quantities.
  std::map<std::tuple<int, bool, int, bool>, int> key_ids;
  std::vector<PairCache> caches;
  std::vector<int> job_key(nout);
  const double ln2pih = std::log(2 * kPi * kHbar);
  for (int j = 0; j < nout; ++j) {
    const auto& job = plan.jobs[j];
    int i = st.cov_id(job.m);
    bool ca = job.conj_a && !detail::is_real(covs[i]);
    bool idn = pv.identity[job.n] != 0;
    int pj = idn ? -1 : pv.cov_id(job.n);
    bool cb = !idn && job.conj_b && !detail::is_real(pv.covs[pj]);
    auto key = std::make_tuple(i, ca, pj, cb);
    auto it = key_ids.find(key);
    if (it != key_ids.end()) {
      job_key[j] = it->second;
      continue;
    }
    int id = static_cast<int>(caches.size());
    key_ids[key] = id;
    job_key[j] = id;
    PairCache pc;
    CMat sig = ca ? CMat(covs[i].conjugate()) : covs[i];
    pc.identity = idn;
    pc.sigA = sig.bottomRightCorner(dA, dA);
    if (idn) {
      pc.out = pc.sigA;
      if (grad) {
        for (int g = 0; g < ng; ++g) {
          CMat ds = ca ? CMat(dcovs[g][i].conjugate()) : dcovs[g][i];
          pc.dout.push_back(ds.bottomRightCorner(dA, dA));
        }
      }
      caches.push_back(std::move(pc));
      continue;
    }
    CMat om = cb ? CMat(pv.covs[pj].conjugate()) : pv.covs[pj];
    Eigen::Matrix2cd A = sig.topLeftCorner(2, 2) + om;
    cd det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    if (std::abs(det) < 1e-300) {
      throw NumericalStabilityError("singular sigma_B + omega for state covariance " + std::to_string(i) +
                                    " and POVM term " + std::to_string(job.n));
    }
    pc.Ainv = A.inverse();
    CMat sAB = sig.bottomLeftCorner(dA, 2);
    pc.K = sAB * pc.Ainv;
    pc.out = pc.sigA - pc.K * sAB.transpose();
    pc.ld = -0.5 * std::log(4 * kPi * kPi * det) + ln2pih;
    if (grad) {
      for (int g = 0; g < ng; ++g) {
        CMat ds = ca ? CMat(dcovs[g][i].conjugate()) : dcovs[g][i];
        Eigen::Matrix2cd dB = ds.topLeftCorner(2, 2);
        CMat dAB = ds.bottomLeftCorner(dA, 2);
        Eigen::Matrix2cd dAi = -pc.Ainv * dB * pc.Ainv;
        CMat dK = dAB * pc.Ainv + sAB * dAi;
        pc.dAinv.push_back(dAi);
        pc.dout.push_back(ds.bottomRightCorner(dA, dA) - dK * sAB.transpose() - pc.K * dAB.transpose());
        pc.dK.push_back(dK);
        pc.dtr.push_back(-0.5 * (pc.Ainv * dB).trace());
      }
    }
    caches.push_back(std::move(pc));
  }

  Contraction res;
  LcogState& out = res.out;
  out.num_modes = N - 1;
  out.reduced = plan.reduced;
  out.num_k = plan.num_real;
  out.log_weights.resize(nout);
  out.means.resize(dA, nout);
  for (const auto& pc : caches) out.covs.push_back(pc.out);
  if (caches.size() > 1) out.cov_index = Eigen::Map<IVec>(job_key.data(), nout);
  if (out.covs.empty()) out.covs.push_back(CMat::Zero(dA, dA));

  if (pv.kind == PovmKind::fock_coherent || pv.kind == PovmKind::fock_superposition) {
    out.stellar_rank = in.stellar_rank < 0 ? -1 : in.stellar_rank + std::max(0, pv.photon_number);
  } else if (pv.kind == PovmKind::generaldyne || pv.kind == PovmKind::custom) {
    out.stellar_rank = in.stellar_rank;
  } else {
    out.stellar_rank = -1;
  }

  GradientTape* tout = nullptr;
  if (grad) {
    GradientTape t;
    t.n_g = ng;
    t.d_log_prob = st.tape->d_log_prob;
    t.d_log_weights.resize(nout, ng);
    t.d_means.assign(ng, CMat(dA, nout));
    t.d_covs.assign(ng, {});
    for (int g = 0; g < ng; ++g)
      for (const auto& pc : caches) t.d_covs[g].push_back(pc.dout[g]);
    if (caches.empty())
      for (int g = 0; g < ng; ++g) t.d_covs[g].push_back(CMat::Zero(dA, dA));
    out.tape = std::move(t);
    tout = &*out.tape;
  }

#ifdef LCG_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < nout; ++j) {
    const auto& job = plan.jobs[j];
    const PairCache& pc = caches[job_key[j]];
    cd c = job.conj_a ? std::conj(st.log_weights(job.m)) : st.log_weights(job.m);
    cd d = job.conj_b ? std::conj(pv.log_weights(job.n)) : pv.log_weights(job.n);
    Eigen::Vector2cd muB = means.col(job.m).head<2>();
    if (job.conj_a) muB = muB.conjugate();
    Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
    if (pc.identity) {
      out.log_weights(j) = c + d + job.offset;
      out.means.col(j) = means.col(job.m).tail(dA);
      if (job.conj_a) out.means.col(j) = out.means.col(j).conjugate();
    } else {
      Eigen::Vector2cd nu = pv.means.col(job.n);
      if (job.conj_b) nu = nu.conjugate();
      v = nu - muB;
      cd gamma = -0.5 * (v.transpose() * pc.Ainv * v)(0) + pc.ld;
      out.log_weights(j) = c + d + gamma + job.offset;
      if (dA) {
        out.means.col(j) = means.col(job.m).tail(dA);
        if (job.conj_a) out.means.col(j) = out.means.col(j).conjugate();
        out.means.col(j).noalias() += pc.K * v;
      }
    }
    if (tout) {
      for (int g = 0; g < ng; ++g) {
        cd dc = job.conj_a ? std::conj(st.tape->d_log_weights(job.m, g)) : st.tape->d_log_weights(job.m, g);
        CVec dmu = dmeans[g].col(job.m);
        if (job.conj_a) dmu = dmu.conjugate();
        if (pc.identity) {
          tout->d_log_weights(j, g) = dc;
          if (dA) tout->d_means[g].col(j) = dmu.tail(dA);
        } else {
          Eigen::Vector2cd dmuB = dmu.head<2>();
          cd dg = (dmuB.transpose() * pc.Ainv * v)(0) - 0.5 * (v.transpose() * pc.dAinv[g] * v)(0) + pc.dtr[g];
          tout->d_log_weights(j, g) = dc + dg;
          if (dA) tout->d_means[g].col(j) = dmu.tail(dA) + pc.dK[g] * v - pc.K * dmuB;
        }
      }
    }
  }
  for (int j = 0; j < nout; ++j) out.log_weights(j) = wrap_phase(out.log_weights(j));
  res.rs = detail::real_sum(out.log_weights);
  return res;
}

void renormalize(LcogState& s, double log_p) {
  for (int j = 0; j < s.num_weights(); ++j) s.log_weights(j) -= log_p;
  if (!s.tape) return;
  auto& t = *s.tape;
  const int n = s.num_weights();
  CVec e(n);
  for (int j = 0; j < n; ++j) e(j) = std::exp(s.log_weights(j));
  for (int g = 0; g < t.n_g; ++g) {
    double dlp = 0;
    for (int j = 0; j < n; ++j) dlp += (t.d_log_weights(j, g) * e(j)).real();
    t.d_log_prob(g) += dlp;
    t.d_log_weights.col(g).array() -= dlp;
  }
}

}  // namespace

MeasureResult post_select(const LcogState& s, int mode, const Povm& povm) {
  auto c = contract(s, mode, povm);
  MeasureResult r;
  r.log_prob = detail::checked_log_prob(c.rs, "post_select");
  r.state = std::move(c.out);
  renormalize(r.state, r.log_prob);
  return r;
}

double outcome_probability(const LcogState& s, int mode, const Povm& povm) {
  LcogState bare = s;
  bare.tape.reset();
  auto c = contract(bare, mode, povm);
  const double abs_sum = std::exp(c.rs.log_abs - c.rs.shift);
  if (c.rs.value < -1e-12 * abs_sum) throw NumericalStabilityError("outcome_probability: negative probability");
  if (c.rs.value <= abs_sum * std::numeric_limits<double>::epsilon() * 1e3) return 0.0;
  return std::exp(c.rs.shift) * c.rs.value;
}

MeasureResult post_select_homodyne(const LcogState& in, int mode, double value, double angle) {
  if (in.tape) throw InvalidArgument("homodyne gradients are not supported");
  if (mode < 0 || mode >= in.num_modes) throw InvalidArgument("measured mode out of range");
  LcogState st = angle == 0.0 ? in : apply_symplectic(in, rotation_symplectic(-angle), {mode});
  const int N = st.num_modes, dA = 2 * (N - 1);
  const auto rows = front_order(N, mode);
  const CMat means = permute_rows(st.means, rows);
  struct HC {
    cd sxx, ld;
    CVec sAx;
    CMat out;
  };
  std::vector<HC> hc;
  for (const auto& c0 : st.covs) {
    CMat c = permute_sym(c0, rows);
    HC h;
    h.sxx = c(0, 0);
    if (std::abs(h.sxx) < 1e-300) throw DegenerateState("zero conditional variance in homodyne measurement");
    h.ld = -0.5 * std::log(2 * kPi * h.sxx);
    h.sAx = c.bottomLeftCorner(dA, 1);
    h.out = c.bottomRightCorner(dA, dA) - h.sAx * h.sAx.transpose() / h.sxx;
    hc.push_back(std::move(h));
  }
  MeasureResult r;
  LcogState& out = r.state;
  const int n = st.num_weights();
  out.num_modes = N - 1;
  out.reduced = st.reduced;
  out.num_k = st.num_k;
  out.stellar_rank = st.stellar_rank;
  out.log_weights.resize(n);
  out.means.resize(dA, n);
  for (const auto& h : hc) out.covs.push_back(h.out);
  out.cov_index = st.cov_index;
  for (int m = 0; m < n; ++m) {
    const HC& h = hc[st.cov_id(m)];
    cd v = value - means(0, m);
    out.log_weights(m) = wrap_phase(st.log_weights(m) - 0.5 * v * v / h.sxx + h.ld);
    if (dA) out.means.col(m) = means.col(m).tail(dA) + h.sAx * (v / h.sxx);
  }
  auto rs = detail::real_sum(out.log_weights);
  r.log_prob = detail::checked_log_prob(rs, "post_select_homodyne");
  renormalize(out, r.log_prob);
  return r;
}

MeasureResult herald_sequence(const LcogState& s, const std::vector<Povm>& povms) {
  MeasureResult r;
  r.state = s;
  for (const auto& p : povms) {
    auto step = post_select(r.state, 0, p);
    r.log_prob += step.log_prob;
    r.state = std::move(step.state);
  }
  return r;
}

LcogState as_reduced(const LcogState& s) {
  if (s.reduced) return s;
  bool all_real = true;
  for (int m = 0; m < s.num_weights() && all_real; ++m) {
    all_real = std::abs(s.log_weights(m).imag()) == 0.0 && s.means.col(m).imag().cwiseAbs().maxCoeff() == 0.0 &&
               detail::is_real(s.cov(m));
  }
  if (!all_real) return to_reduced_form(s);
  LcogState out = s;
  out.reduced = true;
  out.num_k = s.num_weights();
  return out;
}

MeasureResult herald_fock(const LcogState& s, const std::vector<int>& pattern, double eps, bool reduced) {
  std::vector<Povm> povms;
  for (int n : pattern) povms.push_back(fock_coherent_povm(n, eps, reduced));
  return herald_sequence(reduced ? as_reduced(s) : s, povms);
}

}  // namespace lcg
