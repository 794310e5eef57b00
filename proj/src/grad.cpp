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

#include "lcg/grad.hpp"

#include <cmath>

#include "lcg/detail.hpp"
#include "lcg/phase_space.hpp"

namespace lcg {

namespace {

const GradientTape& tape_of(const LcogState& s) {
  if (!s.tape) throw InvalidArgument("state carries no gradient tape");
  return *s.tape;
}

}  // namespace

LcogState attach_gradients(const LcogState& in, int n_params) {
  if (n_params < 0) throw InvalidArgument("parameter count must be non-negative");
  LcogState s = in;
  GradientTape t;
  t.n_g = n_params;
  t.d_log_weights = CMat::Zero(s.num_weights(), n_params);
  t.d_means.assign(n_params, CMat::Zero(s.dim(), s.num_weights()));
  t.d_covs.assign(n_params, std::vector<CMat>(s.covs.size(), CMat::Zero(s.dim(), s.dim())));
  t.d_log_prob = Vec::Zero(n_params);
  s.tape = std::move(t);
  return s;
}

void check_tape(const LcogState& s) {
  const auto& t = tape_of(s);
  if (t.d_log_weights.rows() != s.num_weights() || t.d_log_weights.cols() != t.n_g) {
    throw InvalidArgument("tape log-weight block does not match the state");
  }
  if (static_cast<int>(t.d_means.size()) != t.n_g || static_cast<int>(t.d_covs.size()) != t.n_g) {
    throw InvalidArgument("tape parameter count mismatch");
  }
  for (int g = 0; g < t.n_g; ++g) {
    if (t.d_means[g].rows() != s.dim() || t.d_means[g].cols() != s.num_weights()) {
      throw InvalidArgument("tape mean block does not match the state");
    }
    if (t.d_covs[g].size() != s.covs.size()) throw InvalidArgument("tape covariance pool does not match the state");
  }
  if (t.d_log_prob.size() != t.n_g) throw InvalidArgument("tape probability block has the wrong length");
}

Vec grad_log_prob(const LcogState& s) { return tape_of(s).d_log_prob; }

CVec grad_char_fun(const LcogState& s, const Vec& alpha) {
  const auto& t = tape_of(s);
  if (alpha.size() != s.dim()) throw InvalidArgument("grad_char_fun: displacement has the wrong dimension");
  const Mat om = omega(s.num_modes);
  const CVec oa = (om * alpha).cast<cd>();
  const CVec ota = (om.transpose() * alpha).cast<cd>();
  std::vector<cd> quad;
  for (const auto& c : s.covs) quad.push_back((ota.transpose() * c * ota)(0));
  std::vector<std::vector<cd>> dquad(t.n_g);
  for (int g = 0; g < t.n_g; ++g)
    for (const auto& dc : t.d_covs[g]) dquad[g].push_back((ota.transpose() * dc * ota)(0));
  CVec out = CVec::Zero(t.n_g);
  const cd I(0, 1);
  for (int m = 0; m < s.num_weights(); ++m) {
    const int ci = s.cov_id(m);
    cd f = s.log_weights(m) + I * (s.means.col(m).transpose() * oa)(0) - 0.5 * quad[ci];
    cd ef = std::exp(f);
    const bool pair = s.reduced && m >= s.num_k;
    cd efc = 0;
    if (pair) {
      cd fc = std::conj(s.log_weights(m)) + I * (s.means.col(m).conjugate().transpose() * oa)(0) -
              0.5 * std::conj(quad[ci]);
      efc = std::exp(fc);
    }
    for (int g = 0; g < t.n_g; ++g) {
      cd df = t.d_log_weights(m, g) + I * (t.d_means[g].col(m).transpose() * oa)(0) - 0.5 * dquad[g][ci];
      if (pair) {
        cd dfc = std::conj(t.d_log_weights(m, g)) + I * (t.d_means[g].col(m).conjugate().transpose() * oa)(0) -
                 0.5 * std::conj(dquad[g][ci]);
        out(g) += 0.5 * (ef * df + efc * dfc);
      } else {
        out(g) += ef * df;
      }
    }
  }
  return out;
}

Vec grad_overlap(const LcogState& s0, const LcogState& b0) {
  LcogState s = s0;
  LcogState b = b0;
  b.tape.reset();
  if (s.reduced != b.reduced) {
    s = to_full_form(s);
    b = to_full_form(b);
  }
  const auto& t = tape_of(s);
  const int N = s.num_modes;
  if (b.num_modes != N) throw InvalidArgument("overlap needs states with the same mode count");
  auto plan = detail::plan_pairs(s.num_weights(), s.num_k, s.reduced, b.num_weights(), b.num_k, b.reduced);
  const double pref = N * std::log(2 * kPi * kHbar);
  Vec out = Vec::Zero(t.n_g);
  for (const auto& job : plan.jobs) {
    int ia = s.cov_id(job.m), ib = b.cov_id(job.n);
    CMat om = job.conj_b ? CMat(b.covs[ib].conjugate()) : b.covs[ib];
    CMat M = s.covs[ia] + om;
    CMat Mi = M.inverse();
    CVec nu = b.means.col(job.n);
    if (job.conj_b) nu = nu.conjugate();
    CVec v = s.means.col(job.m) - nu;
    CVec Miv = Mi * v;
    cd db = job.conj_b ? std::conj(b.log_weights(job.n)) : b.log_weights(job.n);
    cd e = std::exp(s.log_weights(job.m) + db + job.offset - 0.5 * (v.transpose() * Miv)(0) -
                    0.5 * detail::log_det(2 * kPi * M) + pref);
    for (int g = 0; g < t.n_g; ++g) {
      const CMat& ds = t.d_covs[g][ia];
      cd dg = -(t.d_means[g].col(job.m).transpose() * Miv)(0) + 0.5 * (Miv.transpose() * ds * Miv)(0) -
              0.5 * (Mi * ds).trace();
      out(g) += (e * (t.d_log_weights(job.m, g) + dg)).real();
    }
  }
  return out;
}

Vec grad_effective_squeezing(const LcogState& s, Quadrature q, double amplitude) {
  Vec a = stabilizer_point(q, amplitude);
  cd chi = char_fun(s, a);
  CVec dchi = grad_char_fun(s, a);
  const double ab = std::norm(chi);
  if (!(ab > 0)) throw NumericalStabilityError("effective squeezing gradient undefined: |chi| = 0");
  const double delta = effective_squeezing(s, q, amplitude).value;
  Vec out(dchi.size());
  for (int g = 0; g < dchi.size(); ++g) {
    out(g) = -(std::conj(chi) * dchi(g)).real() / (delta * amplitude * amplitude * ab);
  }
  return out;
}

}  // namespace lcg
