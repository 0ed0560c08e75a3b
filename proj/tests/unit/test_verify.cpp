#include <cmath>

#include "doctest.h"
#include "fspde/errors.hpp"
#include "fspde/verify.hpp"

using namespace fspde;

TEST_CASE("q with beta = alpha is consistent with the p envelopes") {
    EnvelopeConfig q;
    q.kind = KernelKind::q;
    q.alpha = 1.4;
    q.beta = 1.4;
    q.eps = 0.3;
    q.delta = 0.2;
    q.n = 2048;
    q.length = 32;
    q.t_count = 8;
    EnvelopeConfig p = q;
    p.kind = KernelKind::p;
    CHECK(verify_band_envelopes(q).pass());
    CHECK(verify_band_envelopes(p).pass());
}

TEST_CASE("p envelope at alpha = 1") {
    EnvelopeConfig c;
    c.kind = KernelKind::p;
    c.alpha = 1.0;
    c.n = 2048;
    c.length = 32;
    c.t_count = 10;
    const auto r = verify_band_envelopes(c);
    CHECK(r.pass());
    CHECK(r.calibration + r.held_out == 10 * 6);
    CHECK(r.fitted_c > 0.0);
}

TEST_CASE("P envelope: the t branch is active for small t") {
    EnvelopeConfig c;
    c.kind = KernelKind::P;
    c.alpha = 1.5;
    c.delta = 0.5;
    const double small = 1e-6;
    CHECK(band_envelope(c, 3, small) == doctest::Approx(small));
}

TEST_CASE("inadmissible envelope parameters are rejected") {
    EnvelopeConfig c;
    c.kind = KernelKind::q;
    c.alpha = 0.8;
    c.beta = 0.9;
    c.eps = 1.5;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c.eps = 0.3;
    c.delta = 0.45;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    EnvelopeConfig P;
    P.kind = KernelKind::P;
    P.alpha = 1.2;
    P.delta = 1.3;
    CHECK_THROWS_AS(P.validate(), ParameterError);
}

TEST_CASE("Besov test functions are reproducible") {
    const TorusGrid g{1, 64, 6.283185307179586};
    const Field a = besov_test_function(g, 12, 5, 3);
    const Field b = besov_test_function(g, 12, 5, 3);
    const Field c = besov_test_function(g, 12, 5, 4);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
}

TEST_CASE("small Besov study") {
    BesovConfig c;
    c.kind = KernelKind::p;
    c.alpha = 1.4;
    c.p = 2;
    c.samples = 5;
    const auto r = verify_besov_convolution(c);
    REQUIRE(r.levels.size() == 2);
    CHECK(r.levels[0].ratio > 0.0);
    CHECK(r.pass());
}

TEST_CASE("scaling slope vanishes at the critical exponent") {
    ScalingConfig c;
    c.samples = 2;
    const auto r = verify_scaling_criticality(c);
    CHECK(r.c0 == doctest::Approx(1.0));
    REQUIRE(r.slopes.size() == 3);
    CHECK(std::abs(r.slopes[1]) < 0.05);
    CHECK(r.slopes[0] == doctest::Approx(0.3).epsilon(0.1));
    CHECK(r.slopes[2] == doctest::Approx(-0.3).epsilon(0.1));
    CHECK(r.pass);
}

TEST_CASE("Gronwall: zero data") {
    GronwallConfig c;
    c.initial = c.forcing = c.wiener = c.jumps = false;
    c.samples = 2;
    c.n = 16;
    c.steps = 8;
    const auto r = verify_gronwall(c);
    for (double v : r.lhs) CHECK(v == 0.0);
    CHECK(r.pass());
}

TEST_CASE("Gronwall: initial data only") {
    GronwallConfig c;
    c.forcing = c.wiener = c.jumps = false;
    c.samples = 1;
    c.n = 32;
    c.steps = 16;
    const auto r = verify_gronwall(c);
    CHECK(r.pass());
    CHECK(r.rhs.back() == doctest::Approx(r.rhs[1]).epsilon(1e-12));
}

TEST_CASE("deterministic max-reg study is stable") {
    MaxRegConfig c;
    c.wiener = c.jumps = false;
    c.samples = 1;
    const auto r = verify_max_regularity(c);
    CHECK(r.pass());
    CHECK(r.growth() < 0.25);
}

TEST_CASE("ratio study growth") {
    RatioStudy s;
    s.levels = {{{64, 64}, 1.0}, {{128, 128}, 1.2}};
    CHECK(s.growth() == doctest::Approx(0.2));
    CHECK(s.pass());
    s.levels[1].ratio = 1.3;
    CHECK_FALSE(s.pass());
}
