#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aniso/cli.hpp"
#include "aniso/closed_form.hpp"
#include "aniso/contents.hpp"
#include "aniso/error.hpp"
#include "aniso/spec_io.hpp"

namespace py = pybind11;
using namespace aniso;

namespace {

Vec to_vec(const std::vector<double>& v) {
  if (v.size() < 2 || v.size() > 3) throw py::value_error("expected a 2- or 3-vector");
  return {v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

py::dict report_dict(const ContentReport& r) {
  py::dict d;
  d["s"] = r.s;
  d["kind"] = to_string(r.kind);
  d["lower"] = r.lower;
  d["upper"] = r.upper;
  d["lower_budget"] = r.lower_budget;
  d["upper_budget"] = r.upper_budget;
  d["diverges"] = r.diverges;
  d["method"] = r.method;
  return d;
}

VolumeProfile grid_profile(const std::string& set_spec, const ConvexBody& body, double h,
                           const std::vector<double>& radii, int threads, const std::string& estimator) {
  if (radii.empty()) throw py::value_error("radii must not be empty");
  const CompactSet set = parse_set(set_spec, body);
  const double r_max = *std::max_element(radii.begin(), radii.end());
  const DistanceField field = distance_field(set, body, make_grid(set, body, h, r_max), {0.0, threads});
  return volume_profile(field, radii, parse_estimator(estimator));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Anisotropic tube volumes and contents";

  static py::exception<Error> exc(m, "AnisoError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, e.what());
    }
  });

  py::class_<ConvexBody>(m, "ConvexBody")
      .def_property_readonly("dim", &ConvexBody::dim)
      .def_property_readonly("volume", &ConvexBody::volume)
      .def_property_readonly("inradius", &ConvexBody::inradius)
      .def_property_readonly("outradius", &ConvexBody::outradius)
      .def_property_readonly("vertices",
                             [](const ConvexBody& b) {
                               std::vector<std::vector<double>> out;
                               for (const Vec& v : b.vertices()) {
                                 out.push_back(b.dim() == 2 ? std::vector<double>{v[0], v[1]}
                                                            : std::vector<double>{v[0], v[1], v[2]});
                               }
                               return out;
                             })
      .def("support", [](const ConvexBody& b, const std::vector<double>& y) { return b.support(to_vec(y)); })
      .def("gauge", [](const ConvexBody& b, const std::vector<double>& x) { return b.gauge(to_vec(x)); });

  m.def("body", &parse_body, py::arg("spec"), "Body from a preset name or JSON text.");

  m.def(
      "profile",
      [](const std::string& set, const std::string& body, double h, const std::vector<double>& radii, int threads,
         const std::string& estimator) {
        const VolumeProfile p = grid_profile(set, parse_body(body), h, radii, threads, estimator);
        py::dict d;
        d["r"] = p.radii;
        d["V"] = p.V;
        d["S"] = p.S;
        d["kappa"] = p.kappa;
        d["err_budget"] = p.err_budget;
        d["S_budget"] = p.S_budget;
        d["set_volume"] = p.set_volume;
        d["body_volume"] = p.body_volume;
        return d;
      },
      py::arg("set"), py::arg("body") = "disk64", py::arg("h"), py::arg("radii"), py::arg("threads") = 0,
      py::arg("estimator") = "coverage", "Grid tube profile V, S, kappa with error budgets.");

  m.def(
      "content",
      [](const std::string& set, const std::string& body, double h, const std::vector<double>& radii, double s,
         const std::string& kind) {
        const VolumeProfile p = grid_profile(set, parse_body(body), h, radii, 0, "coverage");
        return report_dict(content_estimate(p, s, parse_content_kind(kind)));
      },
      py::arg("set"), py::arg("body") = "disk64", py::arg("h"), py::arg("radii"), py::arg("s"),
      py::arg("kind") = "minkowski");

  m.def("geometric_radii", &geometric_radii, py::arg("r_min"), py::arg("r_max"), py::arg("per_octave") = 8);

  m.def(
      "gasket_limits",
      [](const std::string& body) {
        const GasketLimits L = gasket_content_limits(gasket_profile(parse_body(body)));
        py::dict d;
        d["D"] = L.D;
        d["u2"] = L.u2;
        d["S_lower"] = L.S_lower;
        d["M_lower"] = L.M_lower;
        d["M_upper"] = L.M_upper;
        d["S_upper"] = L.S_upper;
        d["S_lower_coef"] = L.S_lower_coef;
        d["M_lower_coef"] = L.M_lower_coef;
        d["M_upper_coef"] = L.M_upper_coef;
        d["S_upper_coef"] = L.S_upper_coef;
        d["alpha_max"] = L.alpha_max;
        d["beta_max"] = L.beta_max;
        d["beta_min"] = L.beta_min;
        return d;
      },
      py::arg("body") = "disk64", "Exact gasket contents at its dimension.");

  m.def(
      "gasket_volume",
      [](double r, const std::string& body) {
        const GasketValue v = gasket_eval(gasket_profile(parse_body(body)), r);
        return py::make_tuple(v.V, v.S);
      },
      py::arg("r"), py::arg("body") = "disk64", "Exact (V, S) of the gasket at radius r.");

  m.def(
      "triangle_volume",
      [](double r, const std::string& body) {
        return triangle_tube_volume(triangle_anisotropy(parse_body(body)), r, TriangleVariant::kFilled);
      },
      py::arg("r"), py::arg("body") = "disk64");

  m.def(
      "run_cli", [](const std::vector<std::string>& args) { return run_cli(args); }, py::arg("args"),
      "Runs the aniso command line and returns its exit code.");
}
