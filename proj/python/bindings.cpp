#include <sstream>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relaydde/analysis.hpp"
#include "relaydde/error.hpp"
#include "relaydde/exact.hpp"
#include "relaydde/io.hpp"
#include "relaydde/maps.hpp"
#include "relaydde/numeric.hpp"

namespace py = pybind11;
using namespace relaydde;

namespace {

// reports go through their JSON form so Python sees plain dicts
py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_relaydde, m) {
    m.doc() = "Periodic solutions of x'(t) = a(t) f(x(t-1)) with relay feedback";

    static py::exception<Error> error(m, "RelayError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
            if (e.kind() == ErrorKind::Validation) {
                PyErr_SetString(PyExc_ValueError, msg.c_str());
            } else {
                py::set_error(error, msg.c_str());
            }
        }
    });

    py::class_<Params>(m, "Params")
        .def(py::init<>())
        .def(py::init([](double a1, double a2, double p1, double p2) { return Params{a1, a2, p1, p2}; }),
             py::arg("a1"), py::arg("a2"), py::arg("p1"), py::arg("p2"))
        .def_readwrite("a1", &Params::a1)
        .def_readwrite("a2", &Params::a2)
        .def_readwrite("p1", &Params::p1)
        .def_readwrite("p2", &Params::p2)
        .def_property_readonly("period", &Params::period)
        .def("validate", &Params::validate)
        .def(py::self == py::self)
        .def("__repr__", [](const Params& p) {
            return "Params(" + format_double(p.a1) + ", " + format_double(p.a2) + ", " + format_double(p.p1) +
                   ", " + format_double(p.p2) + ")";
        });

    m.def("coefficient_value", [](double t, const Params& p, double delta, const std::string& profile) {
        return coefficient_value(t, p, {delta, profile_from_string(profile)});
    }, py::arg("t"), py::arg("params"), py::arg("delta") = 0.0, py::arg("profile") = "affine");
    m.def("nonlinearity_value", [](double x, double delta, const std::string& profile) {
        return nonlinearity_value(x, {delta, profile_from_string(profile)});
    }, py::arg("x"), py::arg("delta") = 0.0, py::arg("profile") = "affine");

    m.def("propagate", [](const Params& p, double h, double t_end) {
        const PiecewisePath path = propagate(p, {h}, t_end);
        std::vector<std::pair<double, double>> out;
        for (const auto& b : path.breakpoints()) out.emplace_back(b.t, b.x);
        return out;
    }, py::arg("params"), py::arg("h"), py::arg("t_end"), "Exact breakpoints (t, x) on [0, t_end].");
    m.def("zeros", [](const Params& p, double h, double t_end) { return zeros(propagate(p, {h}, t_end)); },
          py::arg("params"), py::arg("h"), py::arg("t_end"));
    m.def("simulate_csv", [](const Params& p, double h, double t_end) {
        std::ostringstream os;
        write_path_csv(os, propagate(p, {h}, t_end));
        return os.str();
    }, py::arg("params"), py::arg("h"), py::arg("t_end"));

    m.def("type1_map", [](const Params& p) {
        const AffineMap1D g = type1_map(p);
        return std::make_pair(g.slope, -g.intercept);
    }, py::arg("params"), "(m, b) of G(h) = m h - b.");
    m.def("type1_fixed_point", &type1_fixed_point, py::arg("params"));
    m.def("type2_map", [](const Params& p) {
        const Type2Maps t = type2_map(p);
        return std::make_pair(t.k, t.d);
    }, py::arg("params"), "(k, d) of F1(h) = k h + d.");
    m.def("type2_two_cycle", &type2_two_cycle, py::arg("params"));
    m.def("apply_F", &apply_F, py::arg("h"), py::arg("k"), py::arg("d"));
    m.def("dual_params", &dual_params, py::arg("params"));
    m.def("classify", [](const Params& p) { return to_python(to_json(classify(p))); }, py::arg("params"));

    m.def("integrate", [](const Params& p, double h, double t_end, double delta, const std::string& profile,
                          double step, std::size_t thin) {
        const SmoothingSpec s{delta, profile_from_string(profile)};
        const DenseSolution sol = integrate(p, s, h, t_end, step > 0.0 ? step : default_step(s));
        return to_python(to_json(sol, thin));
    }, py::arg("params"), py::arg("h"), py::arg("t_end"), py::arg("delta"), py::arg("profile") = "affine",
          py::arg("step") = 0.0, py::arg("thin") = 1);
    m.def("perturbation_growth", [](const Params& p, double h_star, double eps) {
        const PerturbationGrowth g = perturbation_growth(p, h_star, eps);
        return py::dict(py::arg("multiplier") = g.multiplier, py::arg("plus") = g.multiplier_plus,
                        py::arg("minus") = g.multiplier_minus, py::arg("expected_m") = g.expected_m);
    }, py::arg("params"), py::arg("h_star"), py::arg("eps") = 1e-6);

    m.def("reproduce_tables", [] { return to_python(to_json(reproduce_tables())); });
    m.def("coexistence_check", [](const Params& p) { return to_python(to_json(coexistence_check(p))); },
          py::arg("params"));
    m.def("scan", [](std::array<double, 2> a1, std::array<double, 2> a2, std::array<double, 2> p1,
                     std::array<double, 2> p2, std::array<int, 4> resolution, unsigned threads) {
        const ScanBox box{{a1[0], a1[1]}, {a2[0], a2[1]}, {p1[0], p1[1]}, {p2[0], p2[1]}, resolution};
        ScanReport rep;
        {
            py::gil_scoped_release release;
            rep = scan(box, threads);
        }
        return to_python(to_json(rep));
    }, py::arg("a1"), py::arg("a2"), py::arg("p1"), py::arg("p2"), py::arg("resolution"), py::arg("threads") = 0);
    m.def("smoothing_convergence", [](const Params& p, double h, std::vector<double> deltas,
                                      const std::string& profile) {
        return to_python(to_json(smoothing_convergence(p, h, deltas, profile_from_string(profile))));
    }, py::arg("params"), py::arg("h"), py::arg("deltas"), py::arg("profile") = "affine");
}
