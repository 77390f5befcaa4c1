// Python bindings for the main operations: loading spacetime documents,
// point evaluation of connection and curvature data, autoparallel
// integration, adapted charts, kinematic decomposition, and the frame
// predicates. Tensors cross the boundary as nested lists.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cartan/catalog.hpp"
#include "cartan/classify.hpp"
#include "cartan/connection.hpp"
#include "cartan/kinematics.hpp"
#include "cartan/spacetime.hpp"
#include "cartan/transport.hpp"

namespace py = pybind11;
using namespace cartan;

namespace {

py::list to_py(const Vec& v) {
  py::list out;
  for (double c : v) out.append(c);
  return out;
}

py::list to_py(const Mat& m) {
  py::list out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.append(m(i, j));
    out.append(row);
  }
  return out;
}

py::list to_py(const T3& t) {
  py::list out;
  for (std::size_t i = 0; i < t.dim(); ++i) {
    py::list a;
    for (std::size_t j = 0; j < t.dim(); ++j) {
      py::list b;
      for (std::size_t k = 0; k < t.dim(); ++k) b.append(t(i, j, k));
      a.append(b);
    }
    out.append(a);
  }
  return out;
}

py::list to_py(const T4& t) {
  py::list out;
  for (std::size_t i = 0; i < t.dim(); ++i) {
    py::list a;
    for (std::size_t j = 0; j < t.dim(); ++j) {
      py::list b;
      for (std::size_t k = 0; k < t.dim(); ++k) {
        py::list c;
        for (std::size_t l = 0; l < t.dim(); ++l) c.append(t(i, j, k, l));
        b.append(c);
      }
      a.append(b);
    }
    out.append(a);
  }
  return out;
}

py::dict verdict_dict(const FrameVerdict& v) {
  py::dict out;
  out["predicate"] = v.predicate;
  out["holds"] = v.holds;
  out["tolerance"] = v.tolerance;
  py::dict res;
  for (const auto& [k, val] : v.residuals) res[py::str(k)] = val;
  out["residuals"] = res;
  return out;
}

py::dict trajectory_dict(const Trajectory& tr) {
  py::dict out;
  py::list taus, xs, vs;
  for (const TrajectoryPoint& p : tr.points) {
    taus.append(p.tau);
    xs.append(to_py(p.x));
    vs.append(to_py(p.v));
  }
  out["tau"] = taus;
  out["points"] = xs;
  out["velocities"] = vs;
  out["defect"] = tr.defect;
  return out;
}

ReferenceFrameField make_field(const Spacetime& st,
                               const std::vector<std::string>& components,
                               bool normalize) {
  ReferenceFrameField f = parse_frame_field(st, components, !normalize);
  if (normalize) f = unit_normalize(st.spec(), f);
  return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "numerical Lorentzian and torsionful geometry: metrics, connections, "
      "curvature, autoparallels, adapted charts, and frame predicates";

  py::register_exception<ParseError>(m, "DocumentParseError");
  py::register_exception<ValidationError>(m, "DocumentValidationError");

  py::class_<Spacetime>(m, "Spacetime")
      .def(py::init([](const std::string& text,
                       const std::map<std::string, double>& params) {
             return Spacetime(parse_spacetime(text), params);
           }),
           py::arg("text"), py::arg("params") = std::map<std::string, double>{})
      .def_property_readonly(
          "name", [](const Spacetime& st) { return st.spec().name; })
      .def_property_readonly(
          "coordinates",
          [](const Spacetime& st) { return st.spec().coordinates; })
      .def_property_readonly("dim", &Spacetime::dim)
      .def_property_readonly("has_torsion", &Spacetime::has_torsion)
      .def_property_readonly("has_frame", &Spacetime::has_frame)
      .def_property_readonly("parameters",
                             [](const Spacetime& st) { return st.parameters(); })
      .def_property_readonly("reference_point",
                             [](const Spacetime& st) -> py::object {
                               if (!st.spec().reference_point) return py::none();
                               return to_py(*st.spec().reference_point);
                             })
      .def("in_domain", &Spacetime::in_domain, py::arg("x"))
      .def("interval", &Spacetime::interval, py::arg("x"), py::arg("u"),
           py::arg("v"))
      .def(
          "classify_tangent",
          [](const Spacetime& st, const Vec& x, const Vec& v) {
            return std::string(to_string(classify_tangent(st, x, v)));
          },
          py::arg("x"), py::arg("v"))
      .def(
          "metric",
          [](const Spacetime& st, const Vec& x) {
            const MetricEval me = st.metric(x, 1);
            py::dict out;
            out["g"] = to_py(me.g);
            out["g_inv"] = to_py(me.g_inv);
            out["dg"] = to_py(me.dg);
            out["det"] = me.det;
            return out;
          },
          py::arg("x"))
      .def(
          "christoffel",
          [](const Spacetime& st, const Vec& x) {
            return to_py(christoffel(st.metric(x), 0).gamma);
          },
          py::arg("x"), "Metric connection coefficients; first lower index "
                        "is the derivative direction.")
      .def(
          "curvature",
          [](const Spacetime& st, const Vec& x) {
            const ConnectionEval lc = christoffel(st.metric(x), 1);
            return to_py(curvature_from(lc.gamma, lc.dgamma));
          },
          py::arg("x"))
      .def(
          "ricci",
          [](const Spacetime& st, const Vec& x) {
            const ConnectionEval lc = christoffel(st.metric(x), 1);
            return to_py(ricci_from(curvature_from(lc.gamma, lc.dgamma)));
          },
          py::arg("x"))
      .def(
          "ricci_scalar",
          [](const Spacetime& st, const Vec& x) {
            const MetricEval me = st.metric(x);
            const ConnectionEval lc = christoffel(me, 1);
            return ricci_scalar(ricci_from(curvature_from(lc.gamma, lc.dgamma)),
                                me.g_inv);
          },
          py::arg("x"))
      .def(
          "torsion",
          [](const Spacetime& st, const Vec& x) {
            return to_py(st.torsion(x, 0).T);
          },
          py::arg("x"))
      .def(
          "contorsion",
          [](const Spacetime& st, const Vec& x) {
            return to_py(contorsion(st.metric(x, 1), st.torsion(x, 0), 0).gamma);
          },
          py::arg("x"))
      .def(
          "strain",
          [](const Spacetime& st, const Vec& x) {
            return to_py(strain(st.metric(x, 1), st.torsion(x, 0), 0).S);
          },
          py::arg("x"))
      .def(
          "connection",
          [](const Spacetime& st, const Vec& x, const std::string& kind) {
            return to_py(
                connection_at(st, parse_connection_kind(kind), x, 0).gamma);
          },
          py::arg("x"), py::arg("kind") = "levi-civita");

  m.def(
      "catalog",
      [](const std::string& key, const std::map<std::string, double>& params) {
        return Spacetime(parse_spacetime(find_catalog_entry(key).document),
                         params);
      },
      py::arg("key"), py::arg("params") = std::map<std::string, double>{},
      "Load a builtin spacetime by key.");
  m.def("catalog_keys", [] {
    std::vector<std::string> keys;
    for (const CatalogEntry& e : active_catalog()) keys.push_back(e.key);
    return keys;
  });
  m.def(
      "load_file",
      [](const std::string& path, const std::map<std::string, double>& params) {
        return Spacetime(load_spacetime_file(path), params);
      },
      py::arg("path"), py::arg("params") = std::map<std::string, double>{});

  m.def(
      "autoparallel",
      [](const Spacetime& st, const Vec& x0, const Vec& v0, double tau,
         const std::string& kind, double step) {
        IntegrateOptions opts;
        opts.step = step;
        return trajectory_dict(integrate_autoparallel(
            st, parse_connection_kind(kind), x0, v0, tau, opts));
      },
      py::arg("spacetime"), py::arg("x0"), py::arg("v0"), py::arg("tau"),
      py::arg("kind") = "levi-civita", py::arg("step") = 1e-2,
      "Integrate the autoparallel from (x0, v0) over [0, tau].");

  m.def(
      "exponential_map",
      [](const Spacetime& st, const Vec& x0, const Vec& v0,
         const std::string& kind, double step) {
        IntegrateOptions opts;
        opts.step = step;
        return to_py(
            exponential_map(st, parse_connection_kind(kind), x0, v0, opts));
      },
      py::arg("spacetime"), py::arg("x0"), py::arg("v0"),
      py::arg("kind") = "levi-civita", py::arg("step") = 1e-2);

  py::class_<NormalChart>(m, "NormalChart")
      .def_property_readonly("center",
                             [](const NormalChart& c) { return to_py(c.center()); })
      .def_property_readonly("frame",
                             [](const NormalChart& c) { return to_py(c.frame()); })
      .def("to_normal",
           [](const NormalChart& c, const Vec& x) { return to_py(c.to_normal(x)); },
           py::arg("x"))
      .def("from_normal",
           [](const NormalChart& c, const Vec& xi) {
             return to_py(c.from_normal(xi));
           },
           py::arg("xi"))
      .def("pullback_metric",
           [](const NormalChart& c, const Vec& xi) {
             return to_py(c.pullback_metric(xi));
           },
           py::arg("xi"))
      .def("pullback_connection",
           [](const NormalChart& c, const Vec& xi) {
             return to_py(c.pullback_connection(xi));
           },
           py::arg("xi"))
      .def("diagnostics", [](const NormalChart& c) {
        const NormalChart::Diagnostics d = c.diagnostics();
        py::dict out;
        out["metric_deviation"] = d.metric_deviation;
        out["metric_gradient"] = d.metric_gradient;
        out["symmetric_connection"] = d.symmetric_connection;
        out["torsion_match"] = d.torsion_match;
        out["roundtrip"] = d.roundtrip;
        return out;
      });

  m.def(
      "normal_chart",
      [](const Spacetime& st, const Vec& x0, const std::string& kind) {
        return NormalChart::build(st, parse_connection_kind(kind), x0);
      },
      py::arg("spacetime"), py::arg("x0"), py::arg("kind") = "levi-civita",
      py::keep_alive<0, 1>(),
      "Chart with linear autoparallel rays through x0; the symmetric part "
      "of the connection vanishes at the center.");

  m.def(
      "inertial_moving_frame",
      [](const Spacetime& st, const Vec& x0, const Vec& v0, double tau,
         const std::string& kind, double step) {
        IntegrateOptions opts;
        opts.step = step;
        const IMFResult imf =
            construct_imf(st, parse_connection_kind(kind), x0, v0, tau, opts);
        py::dict out = trajectory_dict(imf.curve);
        py::list frames;
        for (const Mat& f : imf.frames) frames.append(to_py(f));
        out["frames"] = frames;
        out["orthonormality_defect"] = imf.orthonormality_defect;
        out["transport_defect"] = imf.transport_defect;
        return out;
      },
      py::arg("spacetime"), py::arg("x0"), py::arg("v0"), py::arg("tau"),
      py::arg("kind") = "levi-civita", py::arg("step") = 1e-2,
      "Autoparallel worldline carrying a parallel orthonormal frame whose "
      "first leg is the tangent.");

  m.def(
      "decompose",
      [](const Spacetime& st, const std::vector<std::string>& field,
         const Vec& x, const std::string& kind, bool normalize) {
        const ReferenceFrameField f = make_field(st, field, normalize);
        const KinematicDecomposition kd =
            decompose(st, parse_connection_kind(kind), f, x);
        py::dict out;
        out["acceleration"] = to_py(kd.a);
        out["vorticity"] = to_py(kd.omega);
        out["shear"] = to_py(kd.sigma);
        out["expansion"] = kd.expansion;
        return out;
      },
      py::arg("spacetime"), py::arg("field"), py::arg("x"),
      py::arg("kind") = "levi-civita", py::arg("normalize") = false,
      "Acceleration, vorticity, shear, and expansion of a unit timelike "
      "field at x. Component expressions use the chart coordinates.");

  m.def(
      "check_irf",
      [](const Spacetime& st, const std::vector<std::string>& field,
         const std::vector<Vec>& points, double tol, const std::string& kind,
         bool normalize) {
        return verdict_dict(irf_check(st, make_field(st, field, normalize),
                                      points, tol,
                                      parse_connection_kind(kind)));
      },
      py::arg("spacetime"), py::arg("field"), py::arg("points"),
      py::arg("tol") = 1e-8, py::arg("kind") = "levi-civita",
      py::arg("normalize") = false,
      "Inertial frame predicate: the field's derivative vanishes at every "
      "sample point.");

  m.def(
      "check_pirf",
      [](const Spacetime& st, const std::vector<std::string>& field,
         const std::vector<Vec>& points, double tol, const std::string& kind,
         bool normalize) {
        return verdict_dict(pirf_check(st, make_field(st, field, normalize),
                                       points, tol,
                                       parse_connection_kind(kind)));
      },
      py::arg("spacetime"), py::arg("field"), py::arg("points"),
      py::arg("tol") = 1e-8, py::arg("kind") = "levi-civita",
      py::arg("normalize") = false,
      "Free fall plus zero rotation at every sample point.");

  m.def(
      "check_nacs",
      [](const Spacetime& st, const std::vector<std::string>& field,
         const std::vector<Vec>& points, double tol) {
        return verdict_dict(
            nacs_check(st, make_field(st, field, false), points, tol));
      },
      py::arg("spacetime"), py::arg("field"), py::arg("points"),
      py::arg("tol") = 1e-8,
      "Whether the chart is adapted to the field: spatial components vanish.");

  m.def(
      "ricci_obstruction",
      [](const Spacetime& st, const std::vector<std::string>& field,
         const std::vector<Vec>& points, double tol) {
        const RicciObstruction ob =
            irf_obstruction_ricci(st, make_field(st, field, false), points, tol);
        py::dict out;
        out["max_component"] = ob.max_component;
        out["obstructed"] = ob.obstructed;
        py::list rows;
        for (const Vec& r : ob.per_sample) rows.append(to_py(r));
        out["per_sample"] = rows;
        return out;
      },
      py::arg("spacetime"), py::arg("field"), py::arg("points"),
      py::arg("tol") = 1e-8,
      "Ricci contraction along the field; nonzero rules out an inertial "
      "frame containing it.");

  m.def(
      "check_antisymmetry",
      [](const Spacetime& st, const std::vector<Vec>& points, double tol) {
        const AntisymmetryReport rep = antisymmetry_condition(st, points, tol);
        py::dict out;
        out["totally_antisymmetric"] = rep.totally_antisymmetric;
        out["antisym_violation"] = rep.antisym_violation;
        out["strain_violation"] = rep.strain_violation;
        out["max_violation"] = rep.max_violation;
        return out;
      },
      py::arg("spacetime"), py::arg("points"), py::arg("tol") = 1e-8,
      "Whether the lowered torsion is totally antisymmetric, which makes "
      "autoparallels coincide with geodesics.");

  m.attr("__version__") = "0.1.0";
}
