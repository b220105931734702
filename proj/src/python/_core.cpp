#include <algorithm>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracbly/bounds.hpp"
#include "fracbly/error.hpp"
#include "fracbly/fractional.hpp"
#include "fracbly/harness.hpp"
#include "fracbly/json_io.hpp"
#include "fracbly/lemma.hpp"
#include "fracbly/spectrum.hpp"

namespace py = pybind11;
using namespace fracbly;

namespace {

// Python objects cross the boundary as JSON text.
Json to_json(const py::object& obj) {
  const auto dumps = py::module_::import("json").attr("dumps");
  return Json::parse(dumps(obj).cast<std::string>());
}

py::object from_json(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Domain as_domain(const py::object& obj) { return domain_from_json(to_json(obj)); }

py::dict bound_dict(const BoundValue& b) {
  py::dict out;
  out["kind"] = to_string(b.kind);
  out["value"] = b.value;
  out["terms"] = b.terms;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Eigenvalue-sum bounds for the fractional Laplacian";
  m.attr("__version__") = kToolVersion;

  py::register_exception<RegionViolation>(m, "RegionViolation", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def("summarize", [](const py::object& domain) { return from_json(geometry_to_json(summarize(as_domain(domain)))); },
        py::arg("domain"));

  m.def(
      "bound",
      [](const std::string& kind, const py::object& domain, std::int64_t k, double alpha, double ell, double sigma) {
        const Domain dom = as_domain(domain);
        return bound_dict(
            evaluate_bound(bound_kind_from_string(kind), summarize(dom), {dom.dimension(), alpha, ell, sigma, k}));
      },
      py::arg("kind"), py::arg("domain"), py::arg("k"), py::arg("alpha") = 2.0, py::arg("ell") = 1.0,
      py::arg("sigma") = 1.0);

  m.def(
      "bound_values",
      [](const std::string& kind, const py::object& domain, const std::vector<std::int64_t>& ks, double alpha,
         double ell, double sigma) {
        const Domain dom = as_domain(domain);
        const auto geom = summarize(dom);
        const BoundKind bk = bound_kind_from_string(kind);
        std::vector<double> out;
        out.reserve(ks.size());
        for (auto k : ks) out.push_back(evaluate_bound(bk, geom, {dom.dimension(), alpha, ell, sigma, k}).value);
        return to_array(out);
      },
      py::arg("kind"), py::arg("domain"), py::arg("ks"), py::arg("alpha") = 2.0, py::arg("ell") = 1.0,
      py::arg("sigma") = 1.0);

  m.def(
      "berezin_riesz_upper",
      [](const py::object& domain, double z) {
        const Domain dom = as_domain(domain);
        return berezin_riesz_upper(summarize(dom), {dom.dimension(), 2.0, 1.0, 1.0, 1}, z);
      },
      py::arg("domain"), py::arg("z"));

  m.def("in_key_region", &in_key_region, py::arg("d"), py::arg("alpha"));

  m.def(
      "exact_spectrum", [](const py::object& domain, int K) { return to_array(exact_spectrum(as_domain(domain), K).values); },
      py::arg("domain"), py::arg("K"));

  m.def(
      "fractional_spectrum",
      [](const py::object& domain, double alpha, int grid, int K) {
        const Domain dom = as_domain(domain);
        std::vector<double> values;
        {
          py::gil_scoped_release release;
          values = fractional_eigs(build_fractional_operator(dom, alpha, grid), K).values;
        }
        return to_array(values);
      },
      py::arg("domain"), py::arg("alpha"), py::arg("grid") = 64, py::arg("K") = 10);

  m.def("h", [](double x, int d, double alpha) { return h_value(x, d, alpha).h; }, py::arg("x"), py::arg("d"),
        py::arg("alpha"));
  m.def("key_gap", &key_gap, py::arg("a"), py::arg("b"), py::arg("d"), py::arg("alpha"), py::arg("force") = false);
  m.def(
      "scan",
      [](int d, double alpha, double x_max, int points) { return from_json(scan_to_json(scan_min_gap(d, alpha, x_max, points))); },
      py::arg("d"), py::arg("alpha"), py::arg("x_max") = 20.0, py::arg("points") = 100000);
  m.def(
      "moment_integrals",
      [](double tau, double b) {
        const auto r = moment_integrals(tau, b);
        py::dict out;
        out["i0"] = r.i0;
        out["i1"] = r.i1;
        out["i_comb"] = r.i_comb;
        out["bound0"] = r.bound0;
        out["bound1"] = r.bound1;
        out["bound_comb"] = r.bound_comb;
        return out;
      },
      py::arg("tau"), py::arg("b"));

  m.def(
      "run_sandwich", [](const py::object& config) { return from_json(report_to_json(run_sandwich(config_from_json(to_json(config))))); },
      py::arg("config"));
  m.def(
      "run_bound_comparison",
      [](const py::object& config) { return from_json(report_to_json(run_bound_comparison(config_from_json(to_json(config))))); },
      py::arg("config"));
  m.def(
      "report_to_csv", [](const py::object& report) { return report_to_csv(report_from_json(to_json(report))); },
      py::arg("report"));
}
