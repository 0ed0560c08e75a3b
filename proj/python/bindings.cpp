#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fspde/errors.hpp"
#include "fspde/fraccalc.hpp"
#include "fspde/io.hpp"
#include "fspde/kernels.hpp"
#include "fspde/lpnorms.hpp"
#include "fspde/params.hpp"
#include "fspde/specfun.hpp"

namespace py = pybind11;
using namespace fspde;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field field_from_array(const Array& a, double length) {
    const int d = static_cast<int>(a.ndim());
    if (d < 1 || d > 3) throw SizeError("field arrays must have 1 to 3 axes");
    const int n = static_cast<int>(a.shape(0));
    for (int k = 1; k < d; ++k)
        if (a.shape(k) != n) throw SizeError("field arrays must have equal axes");
    const TorusGrid g{d, n, length};
    g.validate();
    return Field(g, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(std::span<const double> v, std::vector<py::ssize_t> shape) {
    Array out(shape);
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

ProblemParams params_from(double alpha, double beta1, double beta2, double p, double gamma, double kappa) {
    ProblemParams q{alpha, beta1, beta2, p, gamma, kappa};
    q.validate();
    return q;
}

}  // namespace

PYBIND11_MODULE(_fspde, m) {
    m.doc() = "Fractional stochastic heat equations on the torus.";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<AccuracyError>(m, "AccuracyError", base.ptr());
    py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());
    py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<SizeError>(m, "SizeError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    m.def(
        "ml",
        [](double a, double b, double z, const std::string& method) {
            const MLValue v = ml_eval({a, b}, z, parse_ml_method(method));
            return py::make_tuple(v.value, std::string(to_string(v.method)));
        },
        py::arg("a"), py::arg("b"), py::arg("z"), py::arg("method") = "auto",
        "E_{a,b}(z) for z <= 0 and the route that produced it.");

    m.def(
        "frac_integral",
        [](const Array& phi, double alpha, double tmax) {
            const TimeGrid tg{tmax, static_cast<int>(phi.size()) - 1};
            tg.validate();
            const GridFunction r =
                frac_integral(GridFunction(tg, std::vector<double>(phi.data(), phi.data() + phi.size())), alpha);
            return to_array(r.values, {static_cast<py::ssize_t>(r.values.size())});
        },
        py::arg("phi"), py::arg("alpha"), py::arg("tmax") = 1.0,
        "I^alpha of samples on the uniform grid of [0, tmax].");

    m.def(
        "rl_derivative",
        [](const Array& phi, double alpha, double tmax) {
            const TimeGrid tg{tmax, static_cast<int>(phi.size()) - 1};
            tg.validate();
            const GridFunction r =
                rl_derivative(GridFunction(tg, std::vector<double>(phi.data(), phi.data() + phi.size())), alpha);
            return to_array(r.values, {static_cast<py::ssize_t>(r.values.size())});
        },
        py::arg("phi"), py::arg("alpha"), py::arg("tmax") = 1.0);

    m.def(
        "norm",
        [](const Array& f, double length, const std::string& space, double index, double p) {
            NormSpec spec{parse_space(space), p, index};
            spec.validate();
            return norm(field_from_array(f, length), spec);
        },
        py::arg("field"), py::arg("length"), py::arg("space") = "lp", py::arg("index") = 0.0, py::arg("p") = 2.0,
        "L_p, H^gamma_p or B^s_{p,p} norm of a periodic field.");

    m.def(
        "derived_exponents",
        [](double alpha, double beta1, double beta2, double p, double gamma, double kappa) {
            const DerivedExponents e = derived_exponents(params_from(alpha, beta1, beta2, p, gamma, kappa));
            py::dict out;
            out["c0"] = e.c0;
            out["c0bar"] = e.c0bar;
            out["theta"] = e.theta;
            out["d0"] = e.d0;
            return out;
        },
        py::arg("alpha"), py::arg("beta1"), py::arg("beta2"), py::arg("p") = 2.0, py::arg("gamma") = 0.0,
        py::arg("kappa") = 0.01);

    m.def(
        "white_noise_admissible",
        [](double alpha, double beta1, double beta2, double p, double gamma, int d) {
            return white_noise_gate(params_from(alpha, beta1, beta2, p, gamma, 0.01), d).accepted;
        },
        py::arg("alpha"), py::arg("beta1"), py::arg("beta2"), py::arg("p"), py::arg("gamma"), py::arg("d"));

    m.def(
        "simulate",
        [](const std::string& config, std::uint64_t seed) {
            const io::Experiment e = io::parse_experiment(io::json::parse(config));
            SolutionField u;
            {
                py::gil_scoped_release release;
                u = io::run_experiment(e, seed);
            }
            std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(u.times.size())};
            for (int k = 0; k < u.grid.d; ++k) shape.push_back(u.grid.n);
            py::dict out;
            out["times"] = to_array(u.times, {static_cast<py::ssize_t>(u.times.size())});
            out["values"] = to_array(u.values, shape);
            out["kind"] = u.kind;
            out["iterations"] = u.iterations;
            out["converged"] = u.converged;
            return out;
        },
        py::arg("config"), py::arg("seed"), "Solves an experiment given as JSON text for one seed.");

    m.def(
        "verify",
        [](const std::string& claim, const std::string& config) {
            const io::json doc = io::json::parse(config);
            std::string report;
            {
                py::gil_scoped_release release;
                report = io::run_verification(claim, doc).dump();
            }
            return report;
        },
        py::arg("claim"), py::arg("config"), "Runs a verification claim and returns the report as JSON text.");

    m.attr("claims") = io::verification_claims();
}
