#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <limits>

#include "unimap/bifurcation.hpp"
#include "unimap/conjugacy.hpp"
#include "unimap/dynamics.hpp"
#include "unimap/errors.hpp"
#include "unimap/expr.hpp"
#include "unimap/map.hpp"
#include "unimap/normal_form.hpp"
#include "unimap/report.hpp"

namespace py = pybind11;
using namespace unimap;

namespace {

using Pair = std::array<double, 2>;
using Quad = std::array<double, 4>;

Point pt(const Pair& p) { return {p[0], p[1]}; }
Pair tup(Point p) { return {p.x, p.y}; }
Rect rect(const Quad& q) { return {q[0], q[1], q[2], q[3]}; }

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Interval heights(const NormalForm& nf, const Rect& r) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Point c : {Point{r.x_lo, r.y_lo}, Point{r.x_lo, r.y_hi}, Point{r.x_hi, r.y_lo}, Point{r.x_hi, r.y_hi}}) {
        double h = nf.to_normal(c).y;
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    return {lo, hi};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Campbell-form planar maps: normal forms, dynamics, conjugacy and bifurcation";

    // Translators run newest first, so subclasses are registered after their base.
    auto base_error = py::register_exception<Error>(m, "UnimapError", PyExc_RuntimeError);
    py::register_exception<SyntaxError>(m, "ParseError", base_error.ptr());
    py::register_exception<EvalError>(m, "EvalError", base_error.ptr());
    py::register_exception<PreconditionViolation>(m, "PreconditionViolation", base_error.ptr());

    py::class_<Expr>(m, "Expr")
        .def("__call__", &Expr::eval, py::arg("t"))
        .def("dual", [](const Expr& e, double t) {
            DualValue d = e.eval_dual(t);
            return Pair{d.value, d.deriv};
        }, py::arg("t"))
        .def("__str__", &Expr::str)
        .def("__repr__", [](const Expr& e) { return "Expr(" + e.str() + ")"; });
    m.def("parse", [](const std::string& s) { return parse(s); }, py::arg("text"));
    m.def("validate_c1", [](const std::string& s, double lo, double hi, int n) {
        return to_py(to_json(validate_c1(parse(s), lo, hi, n)));
    }, py::arg("phi"), py::arg("lo"), py::arg("hi"), py::arg("n") = 100);

    py::class_<MapSpec>(m, "Map")
        .def(py::init([](double a, double b, double c, double d, const std::string& phi) {
            return make_map(a, b, c, d, parse(phi));
        }), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"), py::arg("phi"))
        .def_property_readonly("a", &MapSpec::a)
        .def_property_readonly("b", &MapSpec::b)
        .def_property_readonly("c", &MapSpec::c)
        .def_property_readonly("d", &MapSpec::d)
        .def_property_readonly("phi", [](const MapSpec& s) { return s.phi().str(); })
        .def("apply", [](const MapSpec& s, const Pair& z) { return tup(s.apply(pt(z))); }, py::arg("z"))
        .def("inverse", [](const MapSpec& s, const Pair& w) { return tup(s.inverse_apply(pt(w))); }, py::arg("w"))
        .def("jacobian", [](const MapSpec& s, const Pair& z) {
            Jacobian2 j = jacobian(s, pt(z));
            return std::array<Pair, 2>{Pair{j.m11, j.m12}, Pair{j.m21, j.m22}};
        }, py::arg("z"))
        .def("spectrum", [](const MapSpec& s, const Pair& z) { return spectrum_at(s, pt(z)); }, py::arg("z"))
        .def("to_json", [](const MapSpec& s) { return map_to_json(s); });
    m.def("load_map", &load_map, py::arg("inline_or_path"));

    m.def("verify_unipotent", [](const MapSpec& s, const Quad& window, int n) {
        return to_py(to_json(verify_unipotent(s, rect(window), n)));
    }, py::arg("map"), py::arg("window") = Quad{-5, 5, -5, 5}, py::arg("n") = 50);

    py::class_<NormalForm>(m, "NormalForm")
        .def_property_readonly("alpha", &NormalForm::alpha)
        .def_property_readonly("beta", &NormalForm::beta)
        .def_property_readonly("scale", &NormalForm::scale)
        .def_property_readonly("trans", [](const NormalForm& nf) { return tup(nf.trans()); })
        .def_property_readonly("linear", &NormalForm::linear)
        .def_property_readonly("shear", &NormalForm::shear)
        .def("psi", &NormalForm::psi, py::arg("t"))
        .def("to_normal", [](const NormalForm& nf, const Pair& z) { return tup(nf.to_normal(pt(z))); })
        .def("from_normal", [](const NormalForm& nf, const Pair& w) { return tup(nf.from_normal(pt(w))); });
    m.def("reduce", [](const MapSpec& s) { return reduce(s); }, py::arg("map"));
    m.def("classify", [](const MapSpec& s, const Quad& window) {
        NormalForm nf = reduce(s);
        return to_py(normal_form_json(nf, classify(nf, heights(nf, rect(window)))));
    }, py::arg("map"), py::arg("window") = Quad{-10, 10, -10, 10});

    m.def("iterate", [](const MapSpec& s, const Pair& z, int n, double escape, bool backward) {
        OrbitTrace tr = iterate(s, pt(z), n, escape, backward ? Direction::Backward : Direction::Forward);
        std::vector<std::array<double, 3>> rows;
        for (const OrbitEntry& e : tr.entries) rows.push_back({static_cast<double>(e.n), e.z.x, e.z.y});
        return rows;
    }, py::arg("map"), py::arg("z"), py::arg("n"), py::arg("escape") = std::numeric_limits<double>::infinity(),
       py::arg("backward") = false);
    m.def("iterate_closed_form", [](const MapSpec& s, const Pair& z, long n) {
        return tup(iterate_closed_form(reduce(s), pt(z), n));
    }, py::arg("map"), py::arg("z"), py::arg("n"));
    m.def("fixed_set", [](const MapSpec& s, const Quad& window) {
        NormalForm nf = reduce(s);
        return to_py(to_json(fixed_set(nf, heights(nf, rect(window)))));
    }, py::arg("map"), py::arg("window") = Quad{-5, 5, -5, 5});
    m.def("periodic_search", [](const MapSpec& s, const Quad& window, int grid, int p_max, double tol) {
        return to_py(to_json(periodic_search(s, rect(window), grid, p_max, tol)));
    }, py::arg("map"), py::arg("window") = Quad{-3, 3, -3, 3}, py::arg("grid") = 51, py::arg("p_max") = 64,
       py::arg("tol") = 1e-8);
    m.def("disk_test", [](const MapSpec& s, const Pair& center, double radius, int p_lo, int p_hi) {
        return to_py(to_json(disk_disjoint_iterates(reduce(s), {pt(center), radius}, p_lo, p_hi)));
    }, py::arg("map"), py::arg("center"), py::arg("radius"), py::arg("p_lo") = -5, py::arg("p_hi") = 5);

    py::class_<ConjugacyMap>(m, "Conjugacy")
        .def(py::init([](const MapSpec& s, const Quad& window) {
            NormalForm nf = reduce(s);
            return build_conjugacy(nf, classify(nf, heights(nf, rect(window))));
        }), py::arg("map"), py::arg("window") = Quad{-10, 10, -10, 10})
        .def_property_readonly("branch", [](const ConjugacyMap& h) { return to_string(h.branch()); })
        .def("apply", [](const ConjugacyMap& h, const Pair& z) { return tup(h_apply(h, pt(z))); }, py::arg("z"))
        .def("inverse", [](const ConjugacyMap& h, const Pair& w) { return tup(h_inverse(h, pt(w))); }, py::arg("w"))
        .def("verify", [](const ConjugacyMap& h, double lo, double hi, int n) {
            return to_py(to_json(verify_conjugacy(h.normal_form().map(), h, {lo, hi, lo, hi}, n)));
        }, py::arg("lo") = -10.0, py::arg("hi") = 10.0, py::arg("n") = 41);

    py::class_<PerturbedMap>(m, "PerturbedMap")
        .def_property_readonly("mu", &PerturbedMap::mu)
        .def_property_readonly("lam", &PerturbedMap::lambda)
        .def("apply", [](const PerturbedMap& p, const Pair& z) { return tup(p.apply(pt(z))); }, py::arg("z"))
        .def("inverse", [](const PerturbedMap& p, const Pair& w) { return tup(perturbed_inverse(p, pt(w))); },
             py::arg("w"))
        .def("geometric_sum_iterate", [](const PerturbedMap& p, const Pair& z, long n) {
            return tup(geometric_sum_iterate(p, pt(z), n));
        }, py::arg("z"), py::arg("n"))
        .def("lemma_bound_check", [](const PerturbedMap& p, double y, int n_max) {
            return to_py(to_json(lemma_bound_check(p, y, n_max)));
        }, py::arg("y"), py::arg("n_max") = 100);
    m.def("family_member", &family_member, py::arg("map"), py::arg("mu"), py::arg("epsilon") = 1.0);
    m.def("stability_sweep", [](const MapSpec& s, const std::vector<double>& mus, const std::vector<Pair>& seeds,
                                int n_max, double tol) {
        StabilityConfig cfg;
        for (const Pair& p : seeds) cfg.seeds.push_back(pt(p));
        cfg.n_max = n_max;
        cfg.tol = tol;
        py::list rows;
        for (const StabilityReport& r : stability_sweep(s, mus, cfg)) rows.append(to_py(to_json(r)));
        return rows;
    }, py::arg("map"), py::arg("mus"), py::arg("seeds"), py::arg("n_max") = 5000, py::arg("tol") = 1e-6);
}
