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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcg/characterize.hpp"
#include "lcg/lcog_state.hpp"
#include "lcg/optimize.hpp"
#include "lcg/types.hpp"

namespace lcg {

enum class Topology { clements, cascade, inverse_cascade };
enum class DetectorKind { pnrd_coherent, ppnrd, click };

// Squeezer j acts as diag(e^{r_j}, e^{-r_j}) on (x_j, p_j): positive r squeezes p.
// Beamsplitters have zero phase. Modes 0..N-2 are detected in order; mode N-1 is kept.
struct CircuitSpec {
  int N = 1;
  Topology topology = Topology::clements;
  Vec r;
  Vec theta;
  Vec eta;  // per-mode transmissivity; empty means lossless
  std::vector<int> pattern;
  DetectorKind detector = DetectorKind::pnrd_coherent;
  int fanout = 1;       // ppnrd only
  double eps = 0.0;     // ring radius; 0 picks the default per photon number
  double ring_infidelity = 1e-6;  // target used by the default radius
  int ring_points = 0;            // ring size is max(n + 1, ring_points)
  bool reduced = true;

  void check() const;
};

int bs_count(Topology t, int N);
int param_count(Topology t, int N);
// Beamsplitter mode pairs in the order they act on the light.
std::vector<std::pair<int, int>> bs_layout(Topology t, int N);

inline constexpr double kSqueezeBound = 1.73;
inline constexpr double kThetaMargin = 0.1;

// Parameter vector is (r_0..r_{N-1}, theta_0..theta_{M-1}).
Vec get_params(const CircuitSpec& spec);
CircuitSpec with_params(const CircuitSpec& spec, const Vec& x);
Bounds param_bounds(const CircuitSpec& spec);

struct SymplecticStack {
  Mat S;
  std::vector<Mat> dS;  // one per parameter
};
SymplecticStack build_symplectic(const CircuitSpec& spec, bool derivatives = true);

struct HeraldResult {
  LcogState state;
  double log_prob = 0.0;
};
HeraldResult herald(const CircuitSpec& spec, bool gradients = false);

enum class CostKind { sum_delta, sum_delta_minus_prob, infidelity };
struct CostSpec {
  CostKind kind = CostKind::sum_delta;
  double c = 0.0;
  std::optional<LcogState> target;
};

struct CostValue {
  double value = 0.0;
  Vec grad;
  SqueezingSummary squeezing;
  double log_prob = 0.0;
};
CostValue cost_eval(const CircuitSpec& spec, const CostSpec& cost, bool gradient = true);

struct OptimizationReport {
  CircuitSpec spec;  // carries the best parameters
  double cost = 0.0;
  double delta_x_db = 0.0, delta_p_db = 0.0, delta_s_db = 0.0, xi_db = 0.0;
  double log_prob = 0.0;
  std::vector<double> trace;
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = false;
  bool failed = false;
  bool budget_exhausted = false;
  std::string message;
};

OptimizationReport evaluate_report(const CircuitSpec& spec, const CostSpec& cost);
OptimizationReport local_minimize(const CircuitSpec& spec, const CostSpec& cost, const LocalOptions& opt = {});
OptimizationReport basin_hop(const CircuitSpec& spec, const CostSpec& cost, int n_hops, std::uint64_t seed,
                             const LocalOptions& local = {}, double budget_seconds = 0.0);

struct LossRow {
  double eta = 1.0;
  OptimizationReport original;
  OptimizationReport reoptimized;
};
std::vector<LossRow> reoptimize_with_loss(const CircuitSpec& spec_opt, const std::vector<double>& eta_grid,
                                          const CostSpec& cost = {}, const LocalOptions& opt = {});

std::string topology_name(Topology t);
Topology parse_topology(const std::string& s);
std::string detector_name(DetectorKind k);
DetectorKind parse_detector(const std::string& s);

}  // namespace lcg
