#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fspde/errors.hpp"
#include "fspde/lpnorms.hpp"

using namespace fspde;

namespace {

Field wave(const TorusGrid& g, int k) {
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x[3];
        g.position(i, x);
        f.values[i] = std::cos(k * x[0]) + 0.3 * std::sin(2 * x[g.d - 1]);
    }
    return f;
}

}  // namespace

TEST_CASE("windows form a partition of unity") {
    const TorusGrid g{2, 64, 2 * std::numbers::pi};
    const DyadicPartition part = build_partition(g);
    for (std::size_t m = 0; m < g.size(); ++m) {
        double s = 0;
        for (int j = 0; j < part.band_count(); ++j) s += part.window(j)[m];
        CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(lp_bump(0.4) == 0.0);
    CHECK(lp_bump(2.1) == 0.0);
    CHECK(lp_bump(1.0) > 0.0);
}

TEST_CASE("bands sum back to the field") {
    const TorusGrid g{1, 128, 2 * std::numbers::pi};
    const Field f = wave(g, 9);
    const auto bands = band_decompose(f, build_partition(g));
    for (std::size_t i = 0; i < g.size(); ++i) {
        double s = 0;
        for (const auto& b : bands) s += b.values[i];
        CHECK(s == doctest::Approx(f.values[i]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(band_project(f, build_partition(g), 99), SizeError);
}

TEST_CASE("L_2 norm by Plancherel") {
    const TorusGrid g{1, 64, 2 * std::numbers::pi};
    const Field f = wave(g, 3);
    const double ex = std::sqrt(std::numbers::pi * (1.0 + 0.09));
    CHECK(norm(f, {Space::Lp, 2.0, 0.0}) == doctest::Approx(ex).epsilon(1e-13));
    CHECK(lp_norm(f, 2.0) == doctest::Approx(ex).epsilon(1e-13));
    const double h1 = std::sqrt(std::numbers::pi * (10.0 + 0.09 * 5.0));
    CHECK(norm(f, {Space::Sobolev, 2.0, 1.0}) == doctest::Approx(h1).epsilon(1e-12));
}

TEST_CASE("Littlewood-Paley characterization holds with bounded constants") {
    const TorusGrid g{1, 256, 2 * std::numbers::pi};
    const DyadicPartition part(g);
    for (int k : {1, 5, 17, 60})
        for (double p : {2.0, 4.0})
            for (double gamma : {-1.0, 0.0, 1.5}) {
                const double r = check_equivalence(wave(g, k), gamma, p, part);
                CHECK(r > 0.2);
                CHECK(r < 5.0);
            }
}

TEST_CASE("Besov norm of a single band scales like 2^{sj}") {
    const TorusGrid g{1, 256, 2 * std::numbers::pi};
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x;
        g.position(i, &x);
        f.values[i] = std::cos(16 * x);
    }
    const double b0 = norm(f, {Space::Besov, 2.0, 0.0});
    const double b1 = norm(f, {Space::Besov, 2.0, 1.0});
    CHECK(b1 / b0 > 8.0);
    CHECK(b1 / b0 < 32.0);
}

TEST_CASE("norm specs are validated") {
    CHECK_THROWS_AS((NormSpec{Space::Lp, 1.5, 0.0}.validate()), ParameterError);
    CHECK(parse_space("besov") == Space::Besov);
    CHECK_THROWS_AS(build_partition(TorusGrid{1, 8, 100.0}), ResolutionError);
}
