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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lcg/characterize.hpp"
#include "lcg/gbs.hpp"
#include "lcg/lcog_state.hpp"
#include "lcg/measure.hpp"
#include "lcg/povm.hpp"
#include "lcg/serialize.hpp"
#include "lcg/stellar.hpp"

namespace py = pybind11;
using namespace lcg;

namespace {

CircuitSpec make_circuit(int N, const Vec& r, const Vec& theta, const std::vector<int>& pattern,
                         const std::string& topology, const Vec& eta, const std::string& detector, int fanout,
                         double eps, double ring_infidelity, int ring_points, bool reduced) {
  CircuitSpec c;
  c.N = N;
  c.r = r;
  c.theta = theta;
  c.pattern = pattern;
  c.topology = parse_topology(topology);
  c.eta = eta;
  c.detector = parse_detector(detector);
  c.fanout = fanout;
  c.eps = eps;
  c.ring_infidelity = ring_infidelity;
  c.ring_points = ring_points;
  c.reduced = reduced;
  c.check();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear combinations of Gaussians: heralded CV circuit simulation";
  m.attr("HBAR") = kHbar;

  auto base = py::register_exception<Error>(m, "LcgError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<NumericalStabilityError>(m, "NumericalStabilityError", base.ptr());
  py::register_exception<ReductionFailed>(m, "ReductionFailed", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<UnphysicalState>(m, "UnphysicalState", base.ptr());
  py::register_exception<DegenerateState>(m, "DegenerateState", base.ptr());

  py::class_<LcogState>(m, "State")
      .def_readonly("num_modes", &LcogState::num_modes)
      .def_readonly("reduced", &LcogState::reduced)
      .def_readonly("num_k", &LcogState::num_k)
      .def_readonly("stellar_rank", &LcogState::stellar_rank)
      .def_readonly("log_weights", &LcogState::log_weights)
      .def_readonly("means", &LcogState::means)
      .def_readonly("covs", &LcogState::covs)
      .def_property_readonly("num_weights", &LcogState::num_weights)
      .def_property_readonly("full_count", &LcogState::full_count)
      .def("to_json", [](const LcogState& s) { return state_to_json(s).dump(); })
      .def_static("from_json", [](const std::string& text) { return state_from_json(json::parse(text)); })
      .def("__repr__", [](const LcogState& s) {
        return "<State modes=" + std::to_string(s.num_modes) + " weights=" + std::to_string(s.num_weights()) +
               (s.reduced ? " reduced>" : ">");
      });

  m.def("vacuum", &vacuum, py::arg("num_modes") = 1);
  m.def("coherent", &coherent_state, py::arg("alpha"));
  m.def("thermal", &thermal_state, py::arg("nbar"));
  m.def("gaussian", &gaussian_state, py::arg("cov"), py::arg("mean"));
  m.def(
      "cat",
      [](cd alpha, double phase) {
        CoherentSuperposition cs;
        cs.alphas = {alpha, -alpha};
        cs.coeffs = {1.0, std::polar(1.0, phase)};
        return from_coherent_superposition(cs);
      },
      py::arg("alpha"), py::arg("phase") = 0.0);
  m.def(
      "fock",
      [](int n, double eps) {
        std::vector<cd> a(n + 1, 0.0);
        a[n] = 1.0;
        return fock_superposition_state(a, eps);
      },
      py::arg("n"), py::arg("eps") = 0.0);
  m.def("fock_superposition", &fock_superposition_state, py::arg("amplitudes"), py::arg("eps") = 0.0,
        py::arg("reduced") = false, py::arg("points") = 0);
  m.def("tensor", &tensor);
  m.def("normalized", &normalized);
  m.def("log_norm", &log_norm);
  m.def("load_state", &load_state);
  m.def("save_state", &save_state);

  m.def(
      "wigner",
      [](const LcogState& s, const Vec& q) { return wigner(s, q).real(); }, py::arg("state"), py::arg("q"));
  m.def(
      "wigner_grid",
      [](const LcogState& s, double xmin, double xmax, int nx, double pmin, double pmax, int np) {
        auto w = wigner_grid(s, grid_points(xmin, xmax, nx, pmin, pmax, np));
        return Eigen::Map<Mat>(w.data(), nx, np).eval();
      },
      py::arg("state"), py::arg("xmin"), py::arg("xmax"), py::arg("nx"), py::arg("pmin"), py::arg("pmax"),
      py::arg("np"));
  m.def("overlap", &overlap);
  m.def("normalized_overlap", &normalized_overlap);
  m.def("purity", &purity);
  m.def("photon_moments", [](const LcogState& s) {
    auto pm = photon_moments(s);
    return py::make_tuple(pm.mean, pm.variance);
  });
  m.def(
      "squeezing",
      [](const LcogState& s) {
        auto q = squeezing_summary(s);
        py::dict d;
        d["delta_x_db"] = q.x.db;
        d["delta_p_db"] = q.p.db;
        d["delta_s_db"] = q.delta_s_db;
        d["delta_x"] = q.x.value;
        d["delta_p"] = q.p.value;
        d["delta_s"] = q.delta_s;
        return d;
      },
      py::arg("state"));

  m.def(
      "herald_fock",
      [](const LcogState& s, const std::vector<int>& pattern, double eps) {
        auto r = herald_fock(s, pattern, eps);
        return py::make_tuple(r.state, r.log_prob);
      },
      py::arg("state"), py::arg("pattern"), py::arg("eps") = 0.0);

  m.def(
      "herald",
      [](int N, const Vec& r, const Vec& theta, const std::vector<int>& pattern, const std::string& topology,
         const Vec& eta, const std::string& detector, int fanout, double eps, double ring_infidelity,
         int ring_points, bool reduced) {
        auto h = herald(make_circuit(N, r, theta, pattern, topology, eta, detector, fanout, eps, ring_infidelity,
                                     ring_points, reduced));
        return py::make_tuple(h.state, h.log_prob);
      },
      py::arg("N"), py::arg("r"), py::arg("theta"), py::arg("pattern"), py::arg("topology") = "clements",
      py::arg("eta") = Vec(), py::arg("detector") = "pnrd_coherent", py::arg("fanout") = 1, py::arg("eps") = 0.0,
      py::arg("ring_infidelity") = 1e-6, py::arg("ring_points") = 0, py::arg("reduced") = true);

  m.def(
      "rank_reduce",
      [](const LcogState& s, double eps_out, double k_std) {
        ReduceOptions o;
        o.eps_out = eps_out;
        o.k_std = k_std;
        auto rep = rank_reduce_report(s, o);
        return py::make_tuple(rep.state, reduce_report_to_json(rep).dump());
      },
      py::arg("state"), py::arg("eps_out") = 0.0, py::arg("k_std") = 6.0);

  m.def("set_num_threads", &set_num_threads);
}
