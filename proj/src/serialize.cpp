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

#include "lcg/serialize.hpp"

#include <fstream>
#include <set>

namespace lcg {

namespace {

json cplx(cd z) { return json::array({z.real(), z.imag()}); }

cd to_cplx(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json cmat(const CMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(cplx(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

CMat to_cmat(const json& j) {
  const int r = static_cast<int>(j.size());
  const int c = r ? static_cast<int>(j[0].size()) : 0;
  CMat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(j[i].size()) != c) throw ConfigError("ragged matrix");
    for (int k = 0; k < c; ++k) m(i, k) = to_cplx(j[i][k]);
  }
  return m;
}

json vec(const Vec& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vec to_vec(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(where + "/" + std::to_string(i) + ": expected a number");
    v(i) = j[i].get<double>();
  }
  return v;
}

template <class T>
T get_as(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "/" + key + ": missing or wrong type");
  }
}

}  // namespace

void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError(where + "/" + it.key() + ": unknown field");
}

json state_to_json(const LcogState& s) {
  json j;
  j["schema"] = kSchema;
  j["num_modes"] = s.num_modes;
  j["reduced"] = s.reduced;
  j["num_k"] = s.num_k;
  j["stellar_rank"] = s.stellar_rank;
  json w = json::array();
  for (int m = 0; m < s.num_weights(); ++m) w.push_back(cplx(s.log_weights(m)));
  j["log_weights"] = w;
  j["means"] = cmat(s.means);
  json covs = json::array();
  for (const auto& c : s.covs) covs.push_back(cmat(c));
  j["covs"] = covs;
  j["cov_index"] = std::vector<int>(s.cov_index.data(), s.cov_index.data() + s.cov_index.size());
  return j;
}

LcogState state_from_json(const json& j) {
  require_keys(j, "", {"schema", "num_modes", "reduced", "num_k", "stellar_rank", "log_weights", "means", "covs",
                       "cov_index"});
  if (get_as<std::string>(j, "schema", "") != kSchema) throw ConfigError("/schema: expected lcg-sim/1");
  LcogState s;
  try {
    s.num_modes = j.at("num_modes").get<int>();
    s.reduced = j.at("reduced").get<bool>();
    s.num_k = j.at("num_k").get<int>();
    s.stellar_rank = j.value("stellar_rank", 0);
    const auto& w = j.at("log_weights");
    s.log_weights.resize(w.size());
    for (size_t m = 0; m < w.size(); ++m) s.log_weights(m) = to_cplx(w[m]);
    s.means = to_cmat(j.at("means"));
    for (const auto& c : j.at("covs")) s.covs.push_back(to_cmat(c));
    auto idx = j.value("cov_index", std::vector<int>{});
    s.cov_index = Eigen::Map<IVec>(idx.data(), static_cast<Eigen::Index>(idx.size()));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed state checkpoint: ") + e.what());
  }
  s.check();
  return s;
}

void save_state(const LcogState& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << state_to_json(s).dump();
}

LcogState load_state(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return state_from_json(j);
}

CircuitSpec circuit_from_json(const json& j, const std::string& where) {
  require_keys(j, where,
               {"N", "topology", "r", "r_db", "theta", "eta", "pattern", "detector", "fanout", "eps", "ring_infidelity", "ring_points", "reduced"});
  CircuitSpec s;
  s.N = get_as<int>(j, "N", where);
  s.topology = parse_topology(j.value("topology", std::string("clements")));
  if (j.contains("r") == j.contains("r_db")) throw ConfigError(where + ": give exactly one of r, r_db");
  if (j.contains("r")) {
    s.r = to_vec(j["r"], where + "/r");
  } else {
    s.r = to_vec(j["r_db"], where + "/r_db");
    for (int i = 0; i < s.r.size(); ++i) s.r(i) = db_to_r(s.r(i));
  }
  s.theta = to_vec(j.value("theta", json::array()), where + "/theta");
  if (j.contains("eta")) {
    if (j["eta"].is_number())
      s.eta = Vec::Constant(s.N, j["eta"].get<double>());
    else
      s.eta = to_vec(j["eta"], where + "/eta");
  }
  s.pattern = get_as<std::vector<int>>(j, "pattern", where);
  if (j.contains("detector")) s.detector = parse_detector(get_as<std::string>(j, "detector", where));
  if (j.contains("fanout")) s.fanout = get_as<int>(j, "fanout", where);
  if (j.contains("eps")) s.eps = get_as<double>(j, "eps", where);
  if (j.contains("ring_infidelity")) s.ring_infidelity = get_as<double>(j, "ring_infidelity", where);
  if (j.contains("ring_points")) s.ring_points = get_as<int>(j, "ring_points", where);
  if (j.contains("reduced")) s.reduced = get_as<bool>(j, "reduced", where);
  try {
    s.check();
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return s;
}

json circuit_to_json(const CircuitSpec& s) {
  json j;
  j["N"] = s.N;
  j["topology"] = topology_name(s.topology);
  j["r"] = vec(s.r);
  j["theta"] = vec(s.theta);
  if (s.eta.size()) j["eta"] = vec(s.eta);
  j["pattern"] = s.pattern;
  j["detector"] = detector_name(s.detector);
  if (s.detector == DetectorKind::ppnrd) j["fanout"] = s.fanout;
  j["eps"] = s.eps;
  j["ring_infidelity"] = s.ring_infidelity;
  j["ring_points"] = s.ring_points;
  j["reduced"] = s.reduced;
  return j;
}

CostSpec cost_from_json(const json& j, const std::string& where) {
  require_keys(j, where, {"kind", "c", "target"});
  CostSpec c;
  const auto kind = j.value("kind", std::string("sum_delta"));
  if (kind == "sum_delta") {
    c.kind = CostKind::sum_delta;
  } else if (kind == "sum_delta_minus_prob") {
    c.kind = CostKind::sum_delta_minus_prob;
    c.c = get_as<double>(j, "c", where);
  } else if (kind == "infidelity") {
    c.kind = CostKind::infidelity;
    c.target = load_state(get_as<std::string>(j, "target", where));
  } else {
    throw ConfigError(where + "/kind: unknown cost '" + kind + "'");
  }
  return c;
}

json report_to_json(const OptimizationReport& r) {
  json j;
  j["circuit"] = circuit_to_json(r.spec);
  j["params"] = vec(get_params(r.spec));
  j["cost"] = r.cost;
  j["delta_x_dB"] = r.delta_x_db;
  j["delta_p_dB"] = r.delta_p_db;
  j["delta_s_dB"] = r.delta_s_db;
  j["xi_dB"] = r.xi_db;
  j["log_prob"] = r.log_prob;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["failed"] = r.failed;
  j["budget_exhausted"] = r.budget_exhausted;
  j["message"] = r.message;
  j["seed"] = r.seed;
  return j;
}

json reduce_report_to_json(const ReduceReport& r) {
  json j;
  j["mixed"] = r.mixed;
  j["rank"] = r.rank;
  j["nu"] = r.nu;
  j["eps_out"] = r.eps_out;
  j["pivot"] = r.pivot;
  if (r.mixed) {
    j["photon_mean"] = r.photon_mean;
    j["photon_variance"] = r.photon_variance;
  }
  j["count"] = r.state.full_count();
  return j;
}

}  // namespace lcg
