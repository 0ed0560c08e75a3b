#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fspde/errors.hpp"
#include "fspde/specfun.hpp"

using namespace fspde;

namespace {

struct Frozen {
    double a, b, z, value;
};

// mpmath series at 40+ digits, see tests/oracles/ml_oracle.py
constexpr Frozen kFrozen[] = {
    {0.4, 0.4, -2.0, 0.042600644045781757468},
    {0.5, 1.0, -1.0, 0.42758357615580700441},
    {1.0, 2.0, -1.0, 0.6321205588285576784},
    {0.7, 1.0, -0.3, 0.73154067570065076036},
    {1.5, 1.0, -3.0, -0.17556537379997824292},
    {1.9, 1.3, -4.5, -0.13198702011722153306},
    {0.3, 0.5, -5.0, 0.045519369411852957386},
    {0.8, 0.8, -4.0, 0.020359797587363690506},
    {1.3, 2.0, -6.0, 0.15445767110664400104},
    {0.6, 1.6, -5.5, 0.16613951779646743051},
    {1.2, 0.5, -2.5, -0.30153220610987508587},
    {1.5, 2.5, -20.0, 0.049020212603490624713},
    {0.5, 1.0, -30.0, 0.018795888861416751497},
    {1.8, 1.0, -50.0, -0.17643515585736695824},
};

double rel(double x, double ref) { return std::abs(x - ref) / std::max(std::abs(ref), 1e-300); }

}  // namespace

TEST_CASE("gamma function") {
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-3.0), DomainError);
    CHECK(rgamma(-2.0) == 0.0);
    CHECK(rgamma(3.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("ml matches the high-precision oracle") {
    for (const auto& c : kFrozen) {
        CAPTURE(c.a);
        CAPTURE(c.b);
        CAPTURE(c.z);
        CHECK(rel(ml({c.a, c.b}, c.z), c.value) < 1e-10);
    }
}

TEST_CASE("closed forms") {
    for (double v : {0.0, 0.1, 1.0, 7.5, 40.0}) {
        CHECK(rel(ml({1.0, 1.0}, -v), std::exp(-v)) < 1e-12);
        if (v > 0) CHECK(rel(ml({1.0, 2.0}, -v), (1.0 - std::exp(-v)) / v) < 1e-11);
        if (v < 10) CHECK(rel(ml({0.5, 1.0}, -v), std::exp(v * v) * std::erfc(v)) < 1e-9);
    }
    CHECK(ml({0.7, 1.3}, 0.0) == doctest::Approx(1.0 / std::tgamma(1.3)).epsilon(1e-15));
}

TEST_CASE("series and integral routes agree on the overlap") {
    for (double a : {0.3, 0.8, 1.3, 1.9})
        for (double b : {0.5, 1.0, 1.3})
            for (double v : {0.01, 0.5, 2.0, 4.5}) {
                const double s = ml_eval({a, b}, -v, MLMethod::Series).value;
                const double i = ml_eval({a, b}, -v, MLMethod::Integral).value;
                CAPTURE(a);
                CAPTURE(b);
                CAPTURE(v);
                CHECK(std::abs(s - i) <= 1e-10 * std::max(1.0, std::abs(s)));
            }
}

TEST_CASE("integral contour choice does not change the value") {
    const double a = 0.8, b = 1.0, v = 3.0;
    const auto [lo, hi] = MLContour::admissible(a);
    const double x = ml_integral({a, b}, v, MLContour::with_eta(a, lo + 0.2 * (hi - lo)));
    const double y = ml_integral({a, b}, v, MLContour::with_eta(a, lo + 0.8 * (hi - lo)));
    CHECK(std::abs(x - y) < 1e-12);
    CHECK_THROWS_AS(MLContour::with_eta(a, hi + 0.1), DomainError);
}

TEST_CASE("asymptotic route") {
    double err = 0.0;
    const double v = 200.0;
    const double x = ml_asymptotic({0.6, 1.0}, v, &err);
    CHECK(err < 1e-10);
    CHECK(rel(x, ml_eval({0.6, 1.0}, -v, MLMethod::Integral).value) < 1e-9);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(ml({2.0, 1.0}, -1.0), DomainError);
    CHECK_THROWS_AS(ml({0.0, 1.0}, -1.0), DomainError);
    CHECK_THROWS_AS(ml({0.5, 1.0}, 1.0), DomainError);
    CHECK(parse_ml_method("series") == MLMethod::Series);
    CHECK_THROWS(parse_ml_method("bogus"));
}

TEST_CASE("shared table reproduces ml") {
    const MLTable& t = shared_ml_table(0.7, 1.7);
    CHECK(&t == &shared_ml_table(0.7, 1.7));
    for (double v : {0.0, 0.3, 1.0, 9.0, 123.0, 4000.0})
        CHECK(std::abs(t(v) - ml({0.7, 1.7}, -v)) < 1e-11 * std::max(1.0, std::abs(ml({0.7, 1.7}, -v))));
}
