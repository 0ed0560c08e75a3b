#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fspde/errors.hpp"
#include "fspde/levy.hpp"

using namespace fspde;

TEST_CASE("jump paths are reproducible per (seed, copy)") {
    const LevySpec s{4.0, JumpLaw::Gaussian, 0.5, 2, 3};
    const JumpPath a = sample_jump_path(s, 2.0, 42, 1);
    const JumpPath b = sample_jump_path(s, 2.0, 42, 1);
    const JumpPath c = sample_jump_path(s, 2.0, 42, 2);
    CHECK(a.times == b.times);
    CHECK(a.sizes == b.sizes);
    CHECK(a.times != c.times);
    CHECK(a.sizes.size() == 2 * a.times.size());
    for (std::size_t i = 1; i < a.times.size(); ++i) CHECK(a.times[i] > a.times[i - 1]);
    for (double t : a.times) {
        CHECK(t > 0.0);
        CHECK(t <= 2.0);
    }
    for (double z : a.sizes) CHECK(std::abs(z) <= 1.5);
}

TEST_CASE("jump counts and sizes have the right law") {
    const LevySpec s{3.0, JumpLaw::TwoPoint, 0.7, 1, 1};
    double count = 0, sum = 0, sq = 0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        const JumpPath p = sample_jump_path(s, 1.0, 1000 + i);
        count += p.count();
        for (double z : p.sizes) {
            sum += z;
            sq += z * z;
            CHECK(std::abs(std::abs(z) - 0.7) < 1e-15);
        }
    }
    CHECK(count / n == doctest::Approx(3.0).epsilon(0.05));
    CHECK(std::abs(sum / count) < 0.05);
    CHECK(sq / count == doctest::Approx(0.49).epsilon(1e-12));
    CHECK(s.second_moment() == doctest::Approx(0.49));
    CHECK(moment_mp(s, 4.0) == doctest::Approx(std::pow(3.0 * std::pow(0.7, 4), 0.25)));
}

TEST_CASE("forced count and cadlag value") {
    const LevySpec s{1.0, JumpLaw::Uniform, 1.0, 1, 1};
    const JumpPath p = sample_jump_path(s, 1.0, 5, 0, 3);
    REQUIRE(p.count() == 3);
    CHECK(p.value(p.times[0]) == doctest::Approx(p.sizes[0]));
    CHECK(p.value(std::nextafter(p.times[0], 0.0)) == 0.0);
    CHECK(p.value(1.0) == doctest::Approx(p.sizes[0] + p.sizes[1] + p.sizes[2]));
}

TEST_CASE("step integrals against a hand-built path") {
    JumpPath p;
    p.horizon = 1.0;
    p.times = {0.25, 0.5, 0.75};
    p.sizes = {1.0, -2.0, 0.5};
    const StepIntegrand h = [](double s, int) { return s <= 0.5 ? 1.0 : 3.0; };
    const std::vector<double> ts{0.2, 0.5, 1.0};
    const auto v = stochastic_integral(h, p, ts);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == doctest::Approx(1.0 - 2.0));
    CHECK(v[2] == doctest::Approx(1.0 - 2.0 + 1.5));
    CHECK(quad_variation(h, p, 1.0) == doctest::Approx(1.0 + 4.0 + 2.25));
}

TEST_CASE("Wiener increments are consistent across resolutions") {
    const WienerPath fine = sample_wiener_path({1.0, 64}, 2, 9, 256);
    const WienerPath coarse = sample_wiener_path({1.0, 16}, 2, 9, 256);
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 16; ++i) {
            double s = 0;
            for (int r = 0; r < 4; ++r) s += fine.increment(k, 4 * i + r);
            CHECK(s == doctest::Approx(coarse.increment(k, i)).epsilon(1e-12));
        }
    double var = 0;
    const WienerPath w = sample_wiener_path({1.0, 20000}, 1, 3);
    for (double x : w.increments) var += x * x;
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("Brownian bridge ends on the step increment") {
    const WienerPath w = sample_wiener_path({1.0, 8}, 1, 4);
    const std::vector<double> fr{0.25, 0.5, 0.999999};
    const auto b = wiener_bridge(w, 0, 3, fr);
    CHECK(b.size() == 3);
    CHECK(b[2] == doctest::Approx(w.increment(0, 3)).epsilon(1e-2));
    CHECK(b == wiener_bridge(w, 0, 3, fr));
}

TEST_CASE("trigonometric basis is orthonormal") {
    const TorusGrid g{2, 16, 3.0};
    const TrigBasis basis(g, 20);
    for (int a = 0; a < basis.size(); ++a)
        for (int b = 0; b < basis.size(); ++b) {
            double s = 0;
            for (std::size_t i = 0; i < g.size(); ++i) s += basis[a].values[i] * basis[b].values[i] * g.cell_volume();
            CHECK(s == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
        }
    CHECK_THROWS(TrigBasis(g, TrigBasis::capacity(g) + 1));
}

TEST_CASE("LevySpec validation") {
    CHECK_THROWS_AS((LevySpec{-1.0, JumpLaw::TwoPoint, 1.0, 1, 1}.validate()), ParameterError);
    CHECK_THROWS_AS((LevySpec{1.0, JumpLaw::TwoPoint, 1.0, 0, 1}.validate()), ParameterError);
    CHECK(parse_jump_law("gaussian") == JumpLaw::Gaussian);
    CHECK_THROWS(parse_jump_law("cauchy"));
}

TEST_CASE("Z_T has mean zero within three standard errors for every law") {
    for (JumpLaw law : {JumpLaw::TwoPoint, JumpLaw::Uniform, JumpLaw::Gaussian}) {
        const LevySpec s{4.0, law, 0.8, 1, 1};
        const int n = 4000;
        double sum = 0;
        for (int i = 0; i < n; ++i) sum += sample_jump_path(s, 1.0, 5000 + i).value(1.0);
        const double sd = moment_mp(s, 2.0);
        CHECK(std::abs(sum / n) <= 3.0 * sd / std::sqrt(double(n)));
    }
}
