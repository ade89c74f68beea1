#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "polarsl/cli.hpp"
#include "polarsl/error.hpp"
#include "polarsl/hypotheses.hpp"
#include "polarsl/laplacian.hpp"
#include "polarsl/measures.hpp"
#include "polarsl/reduction.hpp"
#include "polarsl/solve.hpp"

namespace py = pybind11;
using namespace polarsl;

namespace {

// A scalar map r -> value. Built-in coefficients stay in C++; Python
// callables are wrapped and called back with the GIL held.
struct Coefficient {
  ScalarMap fn;
  double operator()(double x) const { return fn(x); }
};

Coefficient from_callable(py::function f) {
  return {[f](double x) {
    py::gil_scoped_acquire gil;
    return f(x).cast<double>();
  }};
}

py::array_t<double> as_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

// Elementwise over floats or numpy arrays, keeping the input shape.
template <class T, class F>
auto elementwise(F f) {
  return [f](const T& self, py::object x) -> py::object {
    if (!py::isinstance<py::array>(x) && !py::isinstance<py::sequence>(x))
      return py::float_(f(self, x.cast<double>()));
    auto in = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(x);
    if (!in) throw py::type_error("expected a float or an array of floats");
    py::array_t<double> out(in.request().shape);
    const double* src = in.data();
    double* dst = out.mutable_data();
    for (py::ssize_t i = 0; i < in.size(); ++i) dst[i] = f(self, src[i]);
    return std::move(out);
  };
}

template <class Fn>
std::string to_text(Fn&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

void define_measures(py::module_& m) {
  py::class_<GeodesicMeasure>(m, "GeodesicMeasure")
      .def_readonly("label", &GeodesicMeasure::label)
      .def_property_readonly("lo", [](const GeodesicMeasure& g) -> py::object {
        return g.lo.unbounded ? py::object(py::float_(-HUGE_VAL)) : py::float_(g.lo.value);
      })
      .def_property_readonly("hi", [](const GeodesicMeasure& g) -> py::object {
        return g.hi.unbounded ? py::object(py::float_(HUGE_VAL)) : py::float_(g.hi.value);
      })
      .def("contains", &GeodesicMeasure::contains, py::arg("r"))
      .def("phi", elementwise<GeodesicMeasure>([](const GeodesicMeasure& g, double r) {
             return eval_measure(g, r).phi;
           }), py::arg("r"))
      .def("dphi", elementwise<GeodesicMeasure>([](const GeodesicMeasure& g, double r) {
             return eval_measure(g, r).dphi;
           }), py::arg("r"))
      .def("__repr__", [](const GeodesicMeasure& g) { return "<GeodesicMeasure " + g.label + ">"; });

  m.def("builtin_measure",
        [](const std::string& kind, int dim, bool normalize) {
          return builtin_measure(parse_measure_kind(kind), dim, normalize);
        },
        py::arg("kind"), py::arg("dim") = 2, py::arg("normalize") = false);
  m.def("measure_from_profile_file",
        [](const std::string& path) {
          return measure_from_profile(reparametrize_arc_length(read_profile_file(path)));
        },
        py::arg("path"), "Surface of revolution from a `t x z` profile file.");
  m.def("unit_sphere_area", &unit_sphere_area, py::arg("dim"));
}

void define_reduction(py::module_& m) {
  py::class_<Coefficient>(m, "Coefficient")
      .def(py::init(&from_callable), py::arg("fn"))
      .def("__call__", elementwise<Coefficient>([](const Coefficient& c, double x) { return c(x); }));
  py::implicitly_convertible<py::function, Coefficient>();

  m.def("constant_coefficient", [](double c) { return Coefficient{constant_coefficient(c)}; });
  m.def("gaussian_coefficient", [](double sigma) { return Coefficient{gaussian_coefficient(sigma)}; },
        py::arg("sigma"));
  m.def("power_coefficient", [](double p) { return Coefficient{power_coefficient(p)}; }, py::arg("p"));
  m.def("tabulated_coefficient",
        [](std::vector<double> r, std::vector<double> b) {
          return Coefficient{tabulated_coefficient(std::move(r), std::move(b))};
        },
        py::arg("r"), py::arg("b"));

  py::class_<Nonlinearity>(m, "Nonlinearity")
      .def_readonly("label", &Nonlinearity::label)
      .def("__call__", elementwise<Nonlinearity>([](const Nonlinearity& f, double z) { return f.eval(z); }))
      .def("deriv", elementwise<Nonlinearity>([](const Nonlinearity& f, double z) { return f.eval_deriv(z); }));
  m.def("power_nonlinearity", &power_nonlinearity, py::arg("p"));
  m.def("log_power_nonlinearity", &log_power_nonlinearity, py::arg("p"));
  m.def("tabulated_nonlinearity", &tabulated_nonlinearity, py::arg("z"), py::arg("f"),
        py::arg("df"));

  py::class_<ChangeOfVariables>(m, "ChangeOfVariables")
      .def_property_readonly("r0", &ChangeOfVariables::r0)
      .def_property_readonly("tol", &ChangeOfVariables::tol)
      .def_property_readonly("measure", &ChangeOfVariables::measure)
      .def("forward", elementwise<ChangeOfVariables>([](const ChangeOfVariables& cv, double r) { return cv.forward(r); }),
           py::arg("r"))
      .def("inverse", elementwise<ChangeOfVariables>([](const ChangeOfVariables& cv, double s) { return cv.inverse(s); }),
           py::arg("s"))
      .def("knot_count", &ChangeOfVariables::knot_count);
  m.def("build_change_of_variables", &build_change_of_variables, py::arg("measure"),
        py::arg("r0"), py::arg("tol") = 1e-10);

  py::class_<ReducedProblem>(m, "ReducedProblem")
      .def_property_readonly("cv", [](const ReducedProblem& rp) { return rp.cv; })
      .def_readonly("f", &ReducedProblem::f)
      .def("q", elementwise<ReducedProblem>([](const ReducedProblem& rp, double s) { return rp.q(s); }),
           py::arg("s"))
      .def_static("from_coefficient",
                  [](const Coefficient& q, const Nonlinearity& f) {
                    return ReducedProblem::from_coefficient(q.fn, f);
                  },
                  py::arg("q"), py::arg("f"));
  m.def("assemble_reduced",
        [](const ChangeOfVariables& cv, const Coefficient& b, const Nonlinearity& f) {
          return assemble_reduced(cv, b.fn, f);
        },
        py::arg("cv"), py::arg("b"), py::arg("f"));
}

void define_solve(py::module_& m) {
  py::class_<TruncatedDomain>(m, "TruncatedDomain")
      .def(py::init([](double L, int n, double bc) {
             TruncatedDomain d{L, n, bc};
             d.validate();
             return d;
           }),
           py::arg("L"), py::arg("n"), py::arg("bc") = 0.0)
      .def_readonly("L", &TruncatedDomain::L)
      .def_readonly("n", &TruncatedDomain::n)
      .def_readonly("bc", &TruncatedDomain::bc_value)
      .def_property_readonly("spacing", &TruncatedDomain::spacing)
      .def("grid", [](const TruncatedDomain& d) { return as_array(d.grid()); });

  py::class_<SolutionProfile>(m, "SolutionProfile")
      .def_property_readonly("variable", [](const SolutionProfile& p) {
        return p.variable == ProfileVariable::s_variable ? "s" : "r";
      })
      .def_property_readonly("grid", [](const SolutionProfile& p) { return as_array(p.grid); })
      .def_property_readonly("values", [](const SolutionProfile& p) { return as_array(p.values); })
      .def_property_readonly("derivs", [](const SolutionProfile& p) { return as_array(p.derivs); })
      .def_property_readonly("s_grid", [](const SolutionProfile& p) { return as_array(p.s_grid); })
      .def_property_readonly("method", [](const SolutionProfile& p) { return to_string(p.method); })
      .def_readonly("slope_at_base", &SolutionProfile::slope_at_base)
      .def_readonly("converged", &SolutionProfile::converged)
      .def_readonly("iterations", &SolutionProfile::iterations)
      .def_readonly("residual", &SolutionProfile::residual)
      .def_readonly("tolerance", &SolutionProfile::tolerance)
      .def_readonly("exit_lo", &SolutionProfile::exit_lo)
      .def_readonly("exit_hi", &SolutionProfile::exit_hi)
      .def_readonly("message", &SolutionProfile::message)
      .def("positive", &SolutionProfile::positive)
      .def("sup_norm", &SolutionProfile::sup_norm)
      .def("to_csv",
           [](const SolutionProfile& p, const ChangeOfVariables* cv) {
             return to_text([&](std::ostream& os) {
               if (p.variable == ProfileVariable::r_variable)
                 write_lifted_csv(os, p);
               else
                 write_solution_csv(os, p, cv);
             });
           },
           py::arg("cv") = nullptr);

  m.def("solve_linear",
        [](const Coefficient& q, const TruncatedDomain& dom) { return solve_linear(q.fn, dom); },
        py::arg("q"), py::arg("domain"));
  m.def("solve_shooting",
        [](const ReducedProblem& rp, double d, double slope, const TruncatedDomain& dom) {
          return solve_shooting(rp, d, slope, dom);
        },
        py::arg("problem"), py::arg("d"), py::arg("slope"), py::arg("domain"));
  m.def("solve_shooting_bvp",
        [](const ReducedProblem& rp, const TruncatedDomain& dom, double d, double slope,
           double tol, int max_iter) {
          return solve_shooting_bvp(rp, dom, d, slope, {}, tol, max_iter);
        },
        py::arg("problem"), py::arg("domain"), py::arg("d_guess"), py::arg("slope_guess") = 0.0,
        py::arg("tol") = 1e-10, py::arg("max_iter") = 30);
  m.def("solve_collocation",
        [](const ReducedProblem& rp, const TruncatedDomain& dom,
           std::optional<SolutionProfile> init, double tol, int max_newton) {
          CollocationOptions opt;
          opt.tol = tol;
          opt.max_newton = max_newton;
          return solve_collocation(rp, dom, init, opt);
        },
        py::arg("problem"), py::arg("domain"), py::arg("init") = py::none(),
        py::arg("tol") = 1e-10, py::arg("max_newton") = 50);
  m.def("lift", &lift, py::arg("cv"), py::arg("z"));
}

void define_laplacian(py::module_& m) {
  py::class_<ResidualReport>(m, "ResidualReport")
      .def("scaled_sup_norm", &ResidualReport::scaled_sup_norm, py::arg("fraction") = 0.9)
      .def("sup_norm", &ResidualReport::sup_norm, py::arg("fraction") = 0.9)
      .def_property_readonly("r", [](const ResidualReport& rep) {
        std::vector<double> v;
        for (const auto& row : rep.rows) v.push_back(row.r);
        return as_array(v);
      })
      .def_property_readonly("residuals", [](const ResidualReport& rep) { return as_array(rep.residuals()); })
      .def_property_readonly("excluded", [](const ResidualReport& rep) {
        std::vector<bool> v;
        for (const auto& row : rep.rows) v.push_back(row.excluded);
        return v;
      })
      .def("to_csv", [](const ResidualReport& rep) {
        return to_text([&](std::ostream& os) { write_residual_csv(os, rep); });
      });

  m.def("divergence_residual",
        [](const GeodesicMeasure& g, const Coefficient& b, const Nonlinearity& f,
           std::vector<double> r, std::vector<double> u, std::optional<std::vector<double>> du) {
          RadialFunction fn{std::move(r), std::move(u), std::move(du)};
          fn.validate();
          return divergence_residual(g, b.fn, f, fn);
        },
        py::arg("measure"), py::arg("b"), py::arg("f"), py::arg("r"), py::arg("u"),
        py::arg("du") = py::none());
  m.def("radial_apply_divergence",
        [](const GeodesicMeasure& g, const Coefficient& u, double r, double h) {
          return radial_apply_divergence(g, u.fn, r, h);
        },
        py::arg("measure"), py::arg("u"), py::arg("r"), py::arg("h"));
}

void define_hypotheses(py::module_& m) {
  py::enum_<Verdict>(m, "Verdict")
      .value("holds", Verdict::holds)
      .value("fails", Verdict::fails)
      .value("inconclusive", Verdict::inconclusive);

  py::class_<HypothesisConfig>(m, "HypothesisConfig")
      .def(py::init<>())
      .def_readwrite("endpoint_samples", &HypothesisConfig::endpoint_samples)
      .def_readwrite("divergence_threshold", &HypothesisConfig::divergence_threshold)
      .def_readwrite("L_list", &HypothesisConfig::L_list)
      .def_readwrite("linear_nodes", &HypothesisConfig::linear_nodes)
      .def_readwrite("sup_stability", &HypothesisConfig::sup_stability)
      .def_readwrite("tail_samples", &HypothesisConfig::tail_samples)
      .def_readwrite("small_ratio_threshold", &HypothesisConfig::small_ratio_threshold)
      .def_readwrite("large_ratio_threshold", &HypothesisConfig::large_ratio_threshold);

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("verdict", &CheckResult::verdict)
      .def_property_readonly("summary", [](const CheckResult& c) { return c.evidence.summary; })
      .def_property_readonly("note", [](const CheckResult& c) { return c.evidence.note; })
      .def("evidence_csv", [](const CheckResult& c) {
        return to_text([&](std::ostream& os) { write_evidence_csv(os, c); });
      });

  py::class_<HypothesisReport>(m, "HypothesisReport")
      .def_readonly("domain", &HypothesisReport::h1)
      .def_readonly("linear", &HypothesisReport::h2)
      .def_readonly("nonlinearity", &HypothesisReport::h3)
      .def_readonly("overall", &HypothesisReport::overall)
      .def("__str__", [](const HypothesisReport& r) {
        return to_text([&](std::ostream& os) { write_report(os, r); });
      });

  const HypothesisConfig defaults{};
  m.def("check_domain_unbounded", &check_domain_unbounded, py::arg("cv"),
        py::arg("config") = defaults);
  m.def("check_linear_positive", &check_linear_positive, py::arg("problem"),
        py::arg("config") = defaults);
  m.def("check_nonlinearity_limits", &check_nonlinearity_limits, py::arg("f"),
        py::arg("config") = defaults);
  m.def("verify_all", &verify_all, py::arg("problem"), py::arg("config") = defaults);
}

}  // namespace

PYBIND11_MODULE(_polarsl, m) {
  m.doc() = "Radial semilinear problems on geodesic polar charts";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);

  define_measures(m);
  define_reduction(m);
  define_solve(m);
  define_laplacian(m);
  define_hypotheses(m);

  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "polarsl");
          std::ostringstream out, err;
          const int code = cli::run(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line tool in-process; returns (code, stdout, stderr).");
}
