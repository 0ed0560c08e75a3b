#include <cmath>
#include <vector>

#include "doctest.h"
#include "fspde/errors.hpp"
#include "fspde/fraccalc.hpp"
#include "fspde/verify.hpp"

using namespace fspde;

namespace {

GridFunction sample(int n, double tmax, double (*f)(double)) {
    TimeGrid g{tmax, n};
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = f(g.node(i));
    return {g, v};
}

}  // namespace

TEST_CASE("fractional integral is exact on piecewise-linear data") {
    const GridFunction phi = sample(16, 2.0, [](double t) { return 1.0 + 3.0 * t; });
    for (double a : {0.3, 1.0, 1.7}) {
        const GridFunction r = frac_integral(phi, a);
        for (int i = 0; i <= 16; ++i) {
            const double t = r.grid.node(i);
            const double ex = std::pow(t, a) / std::tgamma(a + 1) + 3.0 * std::pow(t, a + 1) / std::tgamma(a + 2);
            CHECK(r.values[i] == doctest::Approx(ex).epsilon(1e-13));
        }
    }
}

TEST_CASE("weights sum to t^alpha / Gamma(alpha+1)") {
    const auto w = product_integration_weights(40, 0.6, 0.025);
    double s = 0;
    for (double x : w) s += x;
    CHECK(s == doctest::Approx(std::pow(1.0, 0.6) / std::tgamma(1.6)).epsilon(1e-13));
}

TEST_CASE("Caputo derivative of a constant is zero and of t is t^{1-a}/Gamma(2-a)") {
    const GridFunction c = sample(64, 1.0, [](double) { return 2.5; });
    const GridFunction lin = sample(64, 1.0, [](double t) { return t; });
    for (double a : {0.4, 0.9}) {
        const GridFunction d = caputo_derivative(c, a);
        for (double x : d.values) CHECK(std::abs(x) < 1e-10);
        const GridFunction e = caputo_derivative(lin, a);
        CHECK(e.values[32] == doctest::Approx(std::pow(0.5, 1 - a) / std::tgamma(2 - a)).epsilon(1e-4));
    }
}

TEST_CASE("order one is the classical derivative") {
    const GridFunction phi = sample(200, 1.0, [](double t) { return std::sin(t); });
    const GridFunction d = rl_derivative(phi, 1.0);
    CHECK(d.values[100] == doctest::Approx(std::cos(0.5)).epsilon(1e-4));
}

TEST_CASE("semigroup and inversion converge") {
    const std::vector<double> poly{0.3, -1.0, 0.5, 0.8};
    const RefinementResult s = semigroup_refinement(poly, 0.4, 0.7, 1.0, 32, 4);
    REQUIRE(s.ratios.size() == 3);
    for (double r : s.ratios) CHECK(r > 1.6);
    const RefinementResult inv = inversion_refinement(poly, 0.6, 1.0, 32, 4);
    for (double r : inv.ratios) CHECK(r > 1.6);
    CHECK(poly_frac_integral(std::vector<double>{1.0}, 0.5, 4.0) == doctest::Approx(2.0 / std::tgamma(1.5)));
}

TEST_CASE("grid errors") {
    CHECK_THROWS_AS((TimeGrid{1.0, 1}.validate()), SizeError);
    CHECK_THROWS_AS(frac_integral(sample(8, 1.0, [](double t) { return t; }), -0.5), DomainError);
}
