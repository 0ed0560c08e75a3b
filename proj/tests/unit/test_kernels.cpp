#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fspde/errors.hpp"
#include "fspde/kernels.hpp"
#include "fspde/specfun.hpp"

using namespace fspde;

TEST_CASE("p at alpha = 1 is the periodized heat kernel") {
    const TorusGrid g{1, 128, 2 * std::numbers::pi};
    const double t = 0.1;
    const Field k = kernel_field({KernelKind::p, 1.0, 1.0, t, 0, 0.0}, g);
    double err = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x;
        g.position(i, &x);
        double ex = 0;
        for (int n = -3; n <= 3; ++n) ex += std::exp(-std::pow(x + n * g.length, 2) / (4 * t)) / std::sqrt(4 * std::numbers::pi * t);
        err = std::max(err, std::abs(k.values[i] - ex));
    }
    CHECK(err < 1e-12);
}

TEST_CASE("mass of the kernel is the zero-frequency symbol") {
    const TorusGrid g{2, 64, 6.0};
    for (double a : {0.6, 1.4}) {
        const KernelSymbol q{KernelKind::q, a, 0.5 * a, 0.3, 0, 0.0};
        const Field k = kernel_field(q, g, kNoAliasCheck);
        double mass = 0;
        for (double v : k.values) mass += v * g.cell_volume();
        CHECK(mass == doctest::Approx(std::pow(0.3, a - 0.5 * a) / std::tgamma(1 + a - 0.5 * a)).epsilon(1e-12));
    }
}

TEST_CASE("q with beta = alpha is p") {
    const TorusGrid g{1, 64, 2 * std::numbers::pi};
    const Field p = kernel_field({KernelKind::p, 0.8, 0.0, 0.5, 0, 0.0}, g, kNoAliasCheck);
    const Field q = kernel_field({KernelKind::q, 0.8, 0.8, 0.5, 0, 0.0}, g, kNoAliasCheck);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(p.values[i] == doctest::Approx(q.values[i]).epsilon(1e-14));
}

TEST_CASE("P symbol is t E_{alpha,2}") {
    const KernelSymbol s{KernelKind::P, 1.5, 0.0, 0.7, 0, 0.0};
    for (double xi2 : {0.0, 1.0, 25.0})
        CHECK(symbol_value(s, xi2) == doctest::Approx(0.7 * ml({1.5, 2.0}, -std::pow(0.7, 1.5) * xi2)).epsilon(1e-12));
}

TEST_CASE("symbol parameters") {
    CHECK_THROWS_AS((KernelSymbol{KernelKind::q, 1.0, 1.6, 1.0, 0, 0.0}.validate()), ParameterError);
    CHECK_THROWS_AS((KernelSymbol{KernelKind::P, 0.9, 0.0, 1.0, 0, 0.0}.validate()), ParameterError);
    CHECK_THROWS_AS((KernelSymbol{KernelKind::p, 1.0, 0.0, -1.0, 0, 0.0}.validate()), ParameterError);
    CHECK_THROWS_AS((KernelSymbol{KernelKind::p, 1.0, 0.0, 1.0, 2, 0.0}.validate()), ParameterError);
    CHECK(parse_kernel_kind("P") == KernelKind::P);
    const KernelSymbol s{KernelKind::q, 0.8, 0.9, 1.0, 1, 0.5};
    CHECK(s.time_power() == doctest::Approx(0.8 - 0.9 - 1));
    CHECK(s.ml_b() == doctest::Approx(1 + 0.8 - 0.9 - 1));
}

TEST_CASE("under-resolved kernels are refused") {
    const TorusGrid g{1, 16, 2 * std::numbers::pi};
    const KernelSymbol s{KernelKind::p, 0.5, 0.0, 1e-3, 0, 0.0};
    CHECK_THROWS_AS(kernel_field(s, g), ResolutionError);
    try {
        kernel_field(s, g);
    } catch (const ResolutionError& e) {
        CHECK(e.required_modes() > 16);
    }
    CHECK(required_modes({KernelKind::p, 1.0, 0.0, 0.1, 0, 0.0}, 2 * std::numbers::pi, 1e-12) <= 128);
}

TEST_CASE("kernel_value interpolates between grid points") {
    const TorusGrid g{1, 64, 2 * std::numbers::pi};
    const KernelSymbol s{KernelKind::p, 1.0, 0.0, 0.2, 0, 0.0};
    const double x = 0.123;
    double ex = 0;
    for (int n = -3; n <= 3; ++n) ex += std::exp(-std::pow(x + n * g.length, 2) / 0.8) / std::sqrt(0.8 * std::numbers::pi);
    CHECK(kernel_value(s, g, &x) == doctest::Approx(ex).epsilon(1e-10));
}

TEST_CASE("spectral multipliers") {
    const TorusGrid g{1, 64, 2 * std::numbers::pi};
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x;
        g.position(i, &x);
        f.values[i] = std::cos(3 * x);
    }
    const Field a = spectral_multiplier(f, MultiplierKind::FracLaplacian, 1.0);
    const Field b = spectral_multiplier(f, MultiplierKind::Bessel, 2.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(a.values[i] == doctest::Approx(3.0 * f.values[i]).epsilon(1e-12));
        CHECK(b.values[i] == doctest::Approx(10.0 * f.values[i]).epsilon(1e-12));
    }
}
