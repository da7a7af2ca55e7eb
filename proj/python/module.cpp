#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "calib/catalog.hpp"
#include "calib/elliptic.hpp"
#include "calib/levelset.hpp"
#include "calib/orbifold.hpp"
#include "calib/parse_error.hpp"
#include "calib/polynomial.hpp"
#include "calib/suites.hpp"

namespace py = pybind11;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

calib::AffineTorusMap named_map(const std::string& name) {
    namespace cat = calib::catalog;
    if (name == "cy3_alpha") return cat::cy3_alpha();
    if (name == "cy3_beta") return cat::cy3_beta();
    if (name == "g2_alpha") return cat::g2_alpha();
    if (name == "g2_beta") return cat::g2_beta();
    if (name == "g2_gamma") return cat::g2_gamma();
    if (name == "cy3_mu") return cat::cy3_mu();
    if (name == "g2_eta") return cat::g2_eta();
    throw py::value_error("unknown map '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(calib, m) {
    m.doc() = "Calibrated-geometry verification library";

    m.def("suite_names", &calib::suite_names);
    m.def(
        "run_suite",
        [](const std::string& name, std::uint64_t seed, const std::map<std::string, int>& resolutions,
           const std::map<std::string, double>& tolerances) {
            calib::RunConfig cfg;
            cfg.suite = name;
            cfg.seed = seed;
            cfg.resolutions = resolutions;
            cfg.tolerances = tolerances;
            calib::SuiteReport report;
            {
                py::gil_scoped_release release;
                report = calib::run_suite(name, cfg);
            }
            return to_python(calib::report_body(report));
        },
        py::arg("name"), py::arg("seed") = 1, py::arg("resolutions") = std::map<std::string, int>{},
        py::arg("tolerances") = std::map<std::string, double>{},
        "Run a suite and return the report body as a dict.");

    m.def(
        "fixed_locus_dimensions",
        [](const std::string& map) {
            std::vector<int> dims;
            for (const auto& c : calib::fixed_locus(named_map(map))) dims.push_back(c.dim());
            return dims;
        },
        py::arg("map"), "Dimensions of the fixed components of a catalogued map (cy3_alpha, g2_beta, ...).");
    m.def("is_free", [](const std::string& a, const std::string& b) {
        return calib::is_free(calib::compose(named_map(a), named_map(b)));
    });

    m.def("quartic_torus_eval", &calib::quartic_torus_eval, py::arg("x"), py::arg("y"), py::arg("z"));
    m.def("quartic_torus_factored", &calib::quartic_torus_factored, py::arg("x"), py::arg("y"), py::arg("z"));
    m.def(
        "component_count",
        [](const std::string& polynomial_text, double half_width, int resolution) {
            const auto p = calib::parse_polynomial(polynomial_text);
            const Eigen::VectorXd hi = Eigen::VectorXd::Constant(p.variables(), half_width);
            return calib::component_count(p, -hi, hi, resolution).count;
        },
        py::arg("polynomial"), py::arg("half_width"), py::arg("resolution"),
        "Components of {f = 0} in [-w, w]^n; f in the 'vars N' monomial text format.");
    m.def(
        "four_circle_count", [](int resolution) { return calib::sphere_circle_count(calib::four_circle_h(3), resolution).count; },
        py::arg("resolution") = 256);

    m.def(
        "weierstrass_p",
        [](std::complex<double> z, std::complex<double> tau, int N) { return calib::weierstrass_p(z, {tau, N}); },
        py::arg("z"), py::arg("tau") = std::complex<double>(0, 1), py::arg("N") = 40);
    m.def(
        "loop_integrals",
        [](std::complex<double> c, const std::vector<double>& ts, std::complex<double> tau, int N, int nodes) {
            const auto r = calib::loop_integral_constancy(c, ts, {tau, N}, nodes);
            py::dict out;
            out["integrals"] = r.integrals;
            out["max_deviation"] = r.max_deviation;
            out["quadrature_change"] = r.quadrature_change;
            return out;
        },
        py::arg("c"), py::arg("t_values"), py::arg("tau") = std::complex<double>(0, 1), py::arg("N") = 40,
        py::arg("nodes") = 512);

    py::register_exception<calib::ParseError>(m, "ParseError", PyExc_ValueError);
}
