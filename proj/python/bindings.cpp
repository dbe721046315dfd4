#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kpzlab/eternal.hpp"
#include "kpzlab/harness.hpp"
#include "kpzlab/suites.hpp"

namespace py = pybind11;
using namespace kpzlab;

namespace {

py::dict busemann_dict(const BusemannEstimate& e) {
    py::dict d;
    d["xi"] = e.xi;
    d["t"] = e.t;
    d["x"] = e.x;
    d["values"] = e.values;
    d["stabilized"] = e.stabilized;
    d["stabilization_depth"] = e.stabilization_depth;
    return d;
}

}  // namespace

PYBIND11_MODULE(_kpzlab, m) {
    m.doc() = "Exponential last-passage percolation, Busemann functions and interfaces";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "KpzlabError");

    m.def("weight", [](uint64_t seed, int64_t i, int64_t j) { return weight(EnvironmentSpec{seed}, {i, j}); },
          py::arg("seed"), py::arg("i"), py::arg("j"));
    m.def(
        "lpp_value",
        [](uint64_t seed, std::pair<int64_t, int64_t> p, std::pair<int64_t, int64_t> q) {
            return lpp_value(EnvironmentSpec{seed}, {p.first, p.second}, {q.first, q.second});
        },
        py::arg("seed"), py::arg("p"), py::arg("q"));
    m.def(
        "geodesic",
        [](uint64_t seed, std::pair<int64_t, int64_t> p, std::pair<int64_t, int64_t> q, const std::string& side) {
            const Geodesic g = geodesic(EnvironmentSpec{seed}, {p.first, p.second}, {q.first, q.second},
                                        side == "R" ? Side::Right : Side::Left);
            std::vector<std::pair<int64_t, int64_t>> out;
            for (const auto& v : g.points) out.emplace_back(v.i, v.j);
            return out;
        },
        py::arg("seed"), py::arg("p"), py::arg("q"), py::arg("side") = "L");
    m.def(
        "scaled_value",
        [](uint64_t seed, int64_t n, std::pair<double, double> from, std::pair<double, double> to) {
            return scaled_value(EnvironmentSpec{seed}, ScalingParams(n), {from.first, from.second}, {to.first, to.second});
        },
        py::arg("seed"), py::arg("n"), py::arg("from_xt"), py::arg("to_xt"));
    m.def(
        "busemann_profile",
        [](uint64_t seed, int64_t n, double xi, double t, double a, double b, double step, std::vector<double> depths) {
            return busemann_dict(busemann_profile(EnvironmentSpec{seed}, ScalingParams(n), xi, t, a, b, step, depths));
        },
        py::arg("seed"), py::arg("n"), py::arg("xi"), py::arg("t") = 0.0, py::arg("a") = -1.0, py::arg("b") = 1.0,
        py::arg("step") = 0.05, py::arg("depths") = std::vector<double>{4, 8, 16});
    m.def(
        "evolve_flat",
        [](uint64_t seed, int64_t n, double t, double a, double b) {
            const ScalingParams p(n);
            const Evolution e = evolve(EnvironmentSpec{seed}, p, InitialCondition::flat(p, 0.0), t, a, b);
            const Profile pr = e.profile(p);
            return std::make_pair(pr.x, pr.values);
        },
        py::arg("seed"), py::arg("n"), py::arg("t"), py::arg("a") = -1.0, py::arg("b") = 1.0);
    m.def(
        "mixed_interface",
        [](uint64_t seed, int64_t n, double xi1, double xi2, std::vector<double> times, double x0) {
            const EnvironmentSpec env{seed};
            const ScalingParams p(n);
            const MixedSetup S = mixed_setup(env, p, xi1, xi2, times, x0 - 0.1, x0 + 0.1, {8, 16});
            const InterfaceTrace tr = mixed_interface(env, p, S, times.front(), x0);
            py::dict d;
            std::vector<std::string> lo, hi;
            for (size_t k = 0; k < tr.size(); ++k) lo.push_back(tr.minus[k].str()), hi.push_back(tr.plus[k].str());
            d["times"] = tr.times;
            d["minus"] = lo;
            d["plus"] = hi;
            d["ordering_violations"] = tr.ordering_violations();
            return d;
        },
        py::arg("seed"), py::arg("n"), py::arg("xi1"), py::arg("xi2"), py::arg("times"), py::arg("x0") = 0.0);
    m.def("suites", [] {
        std::vector<std::string> ids;
        for (const auto& s : suites()) ids.push_back(s.id);
        return ids;
    });
    m.def(
        "run_suite",
        [](const std::string& id, uint64_t seed, std::optional<int64_t> n) {
            SuiteOptions o;
            o.seed = seed;
            o.n = n;
            py::gil_scoped_release release;
            return run_suite(id, o).to_json().dump();
        },
        py::arg("id"), py::arg("seed") = 1, py::arg("n") = py::none());
}
