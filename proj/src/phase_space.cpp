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

#include "lcg/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lcg {

namespace {

void require_finite(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw InvalidArgument("non-finite gate parameter");
  }
}

Mat s_phi(double phi) {
  Mat m(2, 2);
  m << std::cos(phi), std::sin(phi), std::sin(phi), -std::cos(phi);
  return m;
}

Mat ds_phi(double phi) {
  Mat m(2, 2);
  m << -std::sin(phi), std::cos(phi), std::cos(phi), std::sin(phi);
  return m;
}

Mat rot(double phi) {
  Mat m(2, 2);
  m << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return m;
}

Mat drot(double phi) {
  Mat m(2, 2);
  m << -std::sin(phi), -std::cos(phi), std::cos(phi), -std::sin(phi);
  return m;
}

Mat blocks(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
  Mat m(4, 4);
  m << a, b, c, d;
  return m;
}

Mat sqrtm_spd(const Mat& a, bool inverse) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) throw UnphysicalState("eigendecomposition failed");
  Vec ev = es.eigenvalues();
  if (ev.minCoeff() <= 0) throw UnphysicalState("covariance is not positive definite");
  Vec s = ev.cwiseSqrt();
  if (inverse) s = s.cwiseInverse().eval();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Mat omega(int num_modes) {
  Mat om = Mat::Zero(2 * num_modes, 2 * num_modes);
  for (int i = 0; i < num_modes; ++i) {
    om(2 * i, 2 * i + 1) = 1.0;
    om(2 * i + 1, 2 * i) = -1.0;
  }
  return om;
}

bool is_symplectic(const Mat& S, double tol) {
  if (S.rows() != S.cols() || S.rows() % 2) return false;
  Mat om = omega(static_cast<int>(S.rows() / 2));
  return (S * om * S.transpose() - om).cwiseAbs().maxCoeff() <= tol;
}

Mat squeeze_symplectic(double r, double phi) {
  require_finite({r, phi});
  return std::cosh(r) * Mat::Identity(2, 2) - std::sinh(r) * s_phi(phi);
}

Mat beamsplitter_symplectic(double theta, double phi) {
  require_finite({theta, phi});
  Mat I = Mat::Identity(2, 2);
  double c = std::cos(theta), s = std::sin(theta);
  return blocks(c * I, -s * rot(phi).transpose(), s * rot(phi), c * I);
}

Mat two_mode_squeeze_symplectic(double r, double phi) {
  require_finite({r, phi});
  Mat I = Mat::Identity(2, 2);
  double ch = std::cosh(r), sh = std::sinh(r);
  return blocks(ch * I, -sh * s_phi(phi), -sh * s_phi(phi), ch * I);
}

Mat rotation_symplectic(double phi) {
  require_finite({phi});
  return rot(phi);
}

Vec displacement_vector(cd alpha) {
  require_finite({alpha.real(), alpha.imag()});
  Vec d(2);
  d << std::sqrt(2.0 * kHbar) * alpha.real(), std::sqrt(2.0 * kHbar) * alpha.imag();
  return d;
}

Mat embed(const Mat& S, const std::vector<int>& modes, int num_modes) {
  if (S.rows() != 2 * static_cast<long>(modes.size())) throw InvalidArgument("block size does not match mode list");
  Mat out = Mat::Identity(2 * num_modes, 2 * num_modes);
  for (size_t a = 0; a < modes.size(); ++a) {
    if (modes[a] < 0 || modes[a] >= num_modes) throw InvalidArgument("mode index out of range");
    for (size_t b = 0; b < modes.size(); ++b) {
      out.block<2, 2>(2 * modes[a], 2 * modes[b]) = S.block<2, 2>(2 * a, 2 * b);
    }
  }
  return out;
}

Vec embed_vector(const Vec& d, const std::vector<int>& modes, int num_modes) {
  Vec out = Vec::Zero(2 * num_modes);
  for (size_t a = 0; a < modes.size(); ++a) {
    if (modes[a] < 0 || modes[a] >= num_modes) throw InvalidArgument("mode index out of range");
    out.segment<2>(2 * modes[a]) = d.segment<2>(2 * a);
  }
  return out;
}

void validate_channel(const GaussianChannel& ch) {
  const long n = ch.X.rows();
  if (ch.X.cols() != n || ch.Y.rows() != n || ch.Y.cols() != n || n % 2) {
    throw InvalidArgument("channel matrices must be square with even dimension");
  }
  if (ch.d.size() != 0 && ch.d.size() != n) throw InvalidArgument("channel displacement has wrong length");
  Mat om = omega(static_cast<int>(n / 2));
  const double h = kHbar / 2.0;
  CMat test = ch.Y.cast<cd>() + cd(0, h) * om.cast<cd>() - cd(0, h) * (ch.X * om * ch.X.transpose()).cast<cd>();
  Eigen::SelfAdjointEigenSolver<CMat> es(test);
  if (es.eigenvalues().minCoeff() < -1e-10) throw InvalidArgument("channel violates complete positivity");
}

GaussianChannel channel_loss(double eta, double nbar, int num_modes) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("loss transmissivity must lie in [0, 1]");
  if (!(nbar >= 0.0)) throw InvalidArgument("thermal occupation must be non-negative");
  const int n = 2 * num_modes;
  return {std::sqrt(eta) * Mat::Identity(n, n), (kHbar / 2.0) * (1.0 - eta) * (2.0 * nbar + 1.0) * Mat::Identity(n, n),
          Vec::Zero(n)};
}

GaussianChannel channel_gain(double G, int num_modes) {
  if (!(G >= 1.0)) throw InvalidArgument("gain must be >= 1");
  const int n = 2 * num_modes;
  return {std::sqrt(G) * Mat::Identity(n, n), (kHbar / 2.0) * (G - 1.0) * Mat::Identity(n, n), Vec::Zero(n)};
}

GaussianChannel channel_random_displacement(double W, int num_modes) {
  if (!(W >= 0.0)) throw InvalidArgument("displacement noise must be non-negative");
  const int n = 2 * num_modes;
  return {Mat::Identity(n, n), W * Mat::Identity(n, n), Vec::Zero(n)};
}

std::vector<double> symplectic_eigenvalues(const Mat& sigma) {
  const int n = static_cast<int>(sigma.rows() / 2);
  CMat m = cd(0, 1) * (omega(n) * sigma).cast<cd>();
  Eigen::ComplexEigenSolver<CMat> es(m);
  std::vector<double> ev;
  for (int i = 0; i < 2 * n; ++i) ev.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(ev.begin(), ev.end());
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(0.5 * (ev[2 * i] + ev[2 * i + 1]));
  return out;
}

WilliamsonDecomposition williamson(const Mat& sigma) {
  const long dim = sigma.rows();
  if (sigma.cols() != dim || dim % 2 || dim == 0) throw InvalidArgument("covariance must be 2N x 2N");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + sigma.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("covariance is not symmetric");
  }
  const int n = static_cast<int>(dim / 2);
  Mat sym = 0.5 * (sigma + sigma.transpose());
  Mat half = sqrtm_spd(sym, false);
  Mat ihalf = sqrtm_spd(sym, true);
  Mat M = ihalf * omega(n) * ihalf;
  M = 0.5 * (M - M.transpose());

  // iM is Hermitian; each positive eigenvalue 1/d with vector a + ib gives the pair (b, a).
  CMat iM = cd(0, 1) * M.cast<cd>();
  Eigen::SelfAdjointEigenSolver<CMat> es(iM);
  Mat O(dim, dim);
  Vec d(n);
  for (int j = 0; j < n; ++j) {
    const int col = static_cast<int>(dim) - 1 - j;  // largest eigenvalues are the positive half
    double lam = es.eigenvalues()(col);
    if (lam <= 0) throw UnphysicalState("degenerate symplectic spectrum");
    CVec v = es.eigenvectors().col(col);
    O.col(2 * j) = std::sqrt(2.0) * v.imag();
    O.col(2 * j + 1) = std::sqrt(2.0) * v.real();
    d(j) = 1.0 / lam;
  }
  const double h = kHbar / 2.0;
  Mat D = Mat::Zero(dim, dim), Dm = Mat::Zero(dim, dim);
  for (int j = 0; j < n; ++j) {
    if (d(j) < h - 1e-9) throw UnphysicalState("symplectic eigenvalue below the vacuum level");
    D(2 * j, 2 * j) = D(2 * j + 1, 2 * j + 1) = d(j);
    Dm(2 * j, 2 * j) = Dm(2 * j + 1, 2 * j + 1) = 1.0 / std::sqrt(d(j));
  }
  WilliamsonDecomposition out;
  out.S = half * O * Dm;
  out.nu = D - h * Mat::Identity(dim, dim);
  out.nu = out.nu.cwiseMax(0.0);
  return out;
}

Mat d_symplectic(OpKind kind, const std::vector<double>& params, int which) {
  Mat I = Mat::Identity(2, 2), Z = Mat::Zero(2, 2);
  auto need = [&](size_t k) {
    if (params.size() < k || which < 0 || which >= static_cast<int>(k)) throw InvalidArgument("bad derivative request");
  };
  switch (kind) {
    case OpKind::squeeze: {
      need(2);
      double r = params[0], phi = params[1];
      if (which == 0) return std::sinh(r) * I - std::cosh(r) * s_phi(phi);
      return -std::sinh(r) * ds_phi(phi);
    }
    case OpKind::squeeze2: {
      need(2);
      double r = params[0], phi = params[1];
      if (which == 0) {
        Mat off = -std::cosh(r) * s_phi(phi);
        return blocks(std::sinh(r) * I, off, off, std::sinh(r) * I);
      }
      Mat off = -std::sinh(r) * ds_phi(phi);
      return blocks(Z, off, off, Z);
    }
    case OpKind::beamsplitter: {
      need(2);
      double th = params[0], phi = params[1];
      double c = std::cos(th), s = std::sin(th);
      if (which == 0) return blocks(-s * I, -c * rot(phi).transpose(), c * rot(phi), -s * I);
      return blocks(Z, -s * drot(phi).transpose(), s * drot(phi), Z);
    }
    case OpKind::rotation:
      need(1);
      return drot(params[0]);
    case OpKind::displacement:
      need(2);
      return Mat::Zero(2, 2);
  }
  throw InvalidArgument("unknown gate kind");
}

Vec d_displacement(const std::vector<double>& params, int which) {
  if (params.size() < 2 || which < 0 || which > 1) throw InvalidArgument("bad derivative request");
  Vec d = Vec::Zero(2);
  d(which) = std::sqrt(2.0 * kHbar);
  return d;
}

}  // namespace lcg
