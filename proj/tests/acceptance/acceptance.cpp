// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: fspde_acceptance [criterion numbers...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fspde/errors.hpp"
#include "fspde/fraccalc.hpp"
#include "fspde/io.hpp"
#include "fspde/kernels.hpp"
#include "fspde/params.hpp"
#include "fspde/solver.hpp"
#include "fspde/specfun.hpp"
#include "fspde/torus.hpp"
#include "fspde/verify.hpp"

using namespace fspde;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1));
    return v;
}

// 1 ------------------------------------------------------------------------
Outcome ml_cross_validation() {
    double worst = 0.0, worst_exp = 0.0;
    int compared = 0, skipped = 0;
    for (double a : {0.3, 0.5, 0.8, 1.0, 1.3, 1.6, 1.9})
        for (double b : {0.5, 1.0, 1.3})
            for (double v : logspace(1e-3, 50.0, 40)) {
                if (v > kMLSeriesRadius) {
                    ++skipped;
                    continue;
                }
                const double s = ml_eval({a, b}, -v, MLMethod::Series).value;
                const double i = ml_eval({a, b}, -v, MLMethod::Integral).value;
                worst = std::max(worst, std::abs(s - i) / std::max(std::abs(s), 1e-300));
                ++compared;
            }
    double integral_abs = 0.0;
    for (double v : logspace(1e-3, 50.0, 40)) {
        worst_exp = std::max(worst_exp, std::abs(ml({1.0, 1.0}, -v) - std::exp(-v)) / std::exp(-v));
        integral_abs =
            std::max(integral_abs, std::abs(ml_eval({1.0, 1.0}, -v, MLMethod::Integral).value - std::exp(-v)));
    }
    return {worst <= 1e-10 && worst_exp <= 1e-12,
            fmt("series vs integral max rel %.2e over %d points with v <= %g (%d beyond the series radius); "
                "E_{1,1}(-v) vs exp(-v) max rel %.2e, integral route max abs %.2e",
                worst, compared, kMLSeriesRadius, skipped, worst_exp, integral_abs)};
}

// 2 ------------------------------------------------------------------------
Outcome heat_reduction() {
    const TorusGrid g{1, 128, 2 * std::numbers::pi};
    auto at = [&](std::size_t i) {
        double x;
        g.position(i, &x);
        return x;
    };
    ProblemData d;
    d.u0 = Field(g);
    Field prof(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = at(i);
        d.u0.values[i] = std::cos(3 * x) + 0.5 * std::sin(7 * x) + 0.25;
        prof.values[i] = std::cos(2 * x) - 0.3 * std::sin(5 * x);
    }
    d.f = [&](double t, std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - 0.5 * t) * prof.values[i];
    };
    const auto u = deterministic_propagate(d, {1.0, 1.0, 1.0, 2.0, 0.0, 0.01}, {1.0, 40});
    // A' = -k^2 A + c0 + c1 t, A(0) = 0
    auto forced = [](double k2, double c0, double c1, double t) {
        const double b = c1 / k2, a = (c0 - b) / k2;
        return a + b * t - a * std::exp(-k2 * t);
    };
    double err = 0.0;
    for (std::size_t n = 0; n < u.times.size(); ++n) {
        const double t = u.times[n];
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double x = at(i);
            const double ex = std::exp(-9 * t) * std::cos(3 * x) + 0.5 * std::exp(-49 * t) * std::sin(7 * x) + 0.25 +
                              forced(4, 1.0, -0.5, t) * std::cos(2 * x) - 0.3 * forced(25, 1.0, -0.5, t) * std::sin(5 * x);
            err = std::max(err, std::abs(u.slice(n)[i] - ex));
        }
    }
    return {err <= 1e-10, fmt("max-norm error %.2e against the per-mode heat semigroup (d=1, N=128, 40 steps)", err)};
}

// 3 ------------------------------------------------------------------------
Outcome kernel_scaling() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    int done = 0;
    for (int c = 0; c < 200; ++c) {
        KernelSymbol s;
        const int kind = c % 3;
        s.kind = kind == 0 ? KernelKind::p : kind == 1 ? KernelKind::q : KernelKind::P;
        s.alpha = s.kind == KernelKind::P ? 1.05 + 0.9 * U(rng) : 0.2 + 1.75 * U(rng);
        s.beta = s.alpha + (0.5 - 1e-3) - (s.alpha + 0.5) * U(rng) * 0.95;
        s.sigma = U(rng) < 0.3 ? 1 : 0;
        s.gamma = 1.5 * U(rng);
        s.t = std::pow(10.0, -2.0 + 2.5 * U(rng));
        const int d = 1 + c % 2;
        const TorusGrid g{d, d == 1 ? 128 : 32, 2 * std::numbers::pi};
        const double scale = std::pow(s.t, -s.alpha / 2);
        const TorusGrid gs{d, g.n, g.length * scale};
        double x[3], xs[3];
        for (int r = 0; r < d; ++r) {
            x[r] = (2 * U(rng) - 1) * std::min(std::pow(s.t, s.alpha / 2), 1.0);
            xs[r] = x[r] * scale;
        }
        KernelSymbol one = s;
        one.t = 1.0;
        const double lhs = kernel_value(s, g, x);
        const double e = -s.sigma - s.alpha * (d + s.gamma) / 2 + s.alpha - s.effective_beta();
        const double rhs = std::pow(s.t, e) * kernel_value(one, gs, xs);
        const double rel = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
        worst = std::max(worst, rel);
        ++done;
    }
    return {worst <= 1e-6, fmt("max relative residual %.2e over %d (t, x, alpha, beta, gamma, sigma, d) draws", worst, done)};
}

// 4 ------------------------------------------------------------------------
Outcome frac_algebra() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_real_distribution<double> ord(0.2, 0.9);
    double lo = 1e300, hi = 0.0, lo_all = 1e300;
    int in_window = 0, total = 0;
    for (int f = 0; f < 10; ++f) {
        std::vector<double> poly(4);
        for (double& c : poly) c = U(rng);
        const double a = ord(rng), b = ord(rng), c = ord(rng);
        for (const auto& r : {semigroup_refinement(poly, a, b, 1.0, 32, 4), inversion_refinement(poly, c, 1.0, 32, 4)})
            for (double q : r.ratios) {
                lo = std::min(lo, q);
                hi = std::max(hi, q);
                in_window += (q >= 1.6 && q <= 2.6);
                ++total;
            }
        for (double q : semigroup_refinement(poly, a, b, 1.0, 32, 4, 0.0).ratios) lo_all = std::min(lo_all, q);
    }
    return {lo >= 1.6,
            fmt("error ratios per halving in [%.2f, %.2f] over %d refinements on [T/4, T] (3 per study, 10 random "
                "cubics, both identities): observed order >= %.2f; %d/%d ratios inside [1.6, 2.6], the rest converge "
                "faster; semigroup over all nodes min ratio %.2f (order a + b from the first node)",
                lo, hi, total, std::log2(lo), in_window, total, lo_all)};
}

// 5 ------------------------------------------------------------------------
Outcome band_envelopes() {
    std::vector<EnvelopeConfig> cfgs;
    auto add = [&](KernelKind k, double a, double beta, double p, double eps, double delta) {
        EnvelopeConfig c;
        c.kind = k;
        c.alpha = a;
        c.beta = beta;
        c.p = p;
        c.eps = eps;
        c.delta = delta;
        cfgs.push_back(c);
    };
    add(KernelKind::q, 0.6, 0.8, 2.0, 0.3, 0.15);
    add(KernelKind::q, 1.4, 1.1, 2.0, 0.3, 0.2);
    add(KernelKind::p, 0.6, 0.6, 2.0, 0.3, 0.2);
    add(KernelKind::p, 1.4, 1.4, 2.0, 0.3, 0.2);
    add(KernelKind::P, 1.2, 0.2, 2.0, 0.3, 0.5);
    add(KernelKind::P, 1.8, 0.8, 2.0, 0.3, 0.5);
    bool ok = true;
    std::ostringstream os;
    for (const auto& c : cfgs) {
        const auto r = verify_band_envelopes(c);
        ok = ok && r.pass();
        os << "\n      " << r.claim << " alpha=" << c.alpha << ": C=" << fmt("%.3g", r.fitted_c)
           << " held-out max ratio " << fmt("%.3g", r.max_ratio_held_out) << " violations " << r.violations << "/"
           << r.held_out << " tail slope " << fmt("%.3f", r.tail_slope);
    }
    return {ok, "j in [1,6], 20 log-spaced t in [1e-6, 1], N=4096, L=64" + os.str()};
}

// 6 ------------------------------------------------------------------------
Outcome besov() {
    struct Row {
        KernelKind kind;
        double alpha, beta, p, eps, delta;
    };
    const Row rows[] = {
        {KernelKind::q, 0.8, 0.9, 2.0, 0.3, 0.1}, {KernelKind::q, 1.4, 1.1, 4.0, 0.3, 0.2},
        {KernelKind::p, 0.8, 0.8, 2.0, 0.3, 0.1}, {KernelKind::p, 1.4, 1.4, 4.0, 0.3, 0.1},
        {KernelKind::P, 1.8, 0.8, 2.0, 0.3, 0.1}, {KernelKind::P, 1.2, 0.2, 2.0, 0.3, 0.1},
    };
    bool ok = true;
    std::ostringstream os;
    for (const auto& r : rows) {
        BesovConfig c;
        c.kind = r.kind;
        c.alpha = r.alpha;
        c.beta = r.beta;
        c.p = r.p;
        c.eps = r.eps;
        c.delta = r.delta;
        c.samples = 50;
        const auto s = verify_besov_convolution(c);
        ok = ok && s.pass();
        os << "\n      " << s.claim << " alpha=" << r.alpha << " p=" << r.p << ": max ratio "
           << fmt("%.4g", s.levels[0].ratio) << " -> " << fmt("%.4g", s.levels[1].ratio) << " growth "
           << fmt("%+.1f%%", 100 * s.growth());
    }
    return {ok, "50 random test functions, (N, steps) 64 -> 128, growth limit 25%" + os.str()};
}

// 7 ------------------------------------------------------------------------
Outcome single_jump() {
    const TorusGrid g{1, 64, 2 * std::numbers::pi};
    Field h(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x;
        g.position(i, &x);
        h.values[i] = std::exp(std::cos(x)) + 0.3 * std::sin(3 * x);
    }
    const auto hh = forward_fft(g, h.values);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        const double alpha = 0.3 + 1.6 * U(rng);
        const double b2 = (alpha + 0.5) * (0.05 + 0.9 * U(rng));
        const double tau = 0.05 + 0.9 * U(rng);
        const double jump = 4 * U(rng) - 2;
        JumpPath jp;
        jp.horizon = 1.0;
        jp.times = {tau};
        jp.sizes = {jump};
        const TimeGrid tg{1.0, 32};
        const auto u = stochastic_convolution_jump({h}, 1, b2, {jp}, {alpha, alpha, b2, 2.0, 0.0, 0.01}, tg);
        for (std::size_t n = 0; n < u.times.size(); ++n) {
            const double t = u.times[n];
            std::vector<double> ex(g.size(), 0.0);
            if (t > tau) {
                std::vector<cplx> s(g.size());
                const KernelSymbol ks{KernelKind::q, alpha, b2, t - tau, 0, 0.0};
                for (std::size_t m = 0; m < g.size(); ++m) s[m] = jump * symbol_value(ks, g.xi_sq(m)) * hh[m];
                ex = inverse_fft_real(g, s);
            }
            for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(u.slice(n)[i] - ex[i]));
        }
    }
    return {worst <= 1e-9, fmt("max-norm deviation %.2e from the one-term formula over 20 (tau, J, beta2) draws", worst)};
}

// 8 ------------------------------------------------------------------------
Outcome max_regularity() {
    const ProblemParams sets[] = {
        {1.0, 1.0, 1.0, 2.0, 0.0, 0.01}, {0.8, 0.9, 0.7, 2.0, 0.0, 0.01}, {1.5, 1.2, 1.3, 4.0, 0.0, 0.01}};
    bool ok = true;
    std::ostringstream os;
    for (const auto& p : sets) {
        MaxRegConfig c;
        c.params = p;
        c.samples = 200;
        const auto r = verify_max_regularity(c);
        const auto e = derived_exponents(p);
        ok = ok && r.pass();
        os << "\n      (" << p.alpha << ", " << p.beta1 << ", " << p.beta2 << ", " << p.p << ") c0="
           << fmt("%.3g", e.c0) << " c0bar=" << fmt("%.3g", e.c0bar) << ": ratio "
           << fmt("%.4g", r.levels[0].ratio) << " (+-" << fmt("%.2g", r.levels[0].half_width) << ") -> "
           << fmt("%.4g", r.levels[1].ratio) << " (+-" << fmt("%.2g", r.levels[1].half_width) << ") growth "
           << fmt("%+.1f%%", 100 * r.growth());
    }
    return {ok, "200 samples, (N, steps) 64 -> 128, growth limit 25%" + os.str()};
}

// 9 ------------------------------------------------------------------------
Outcome scaling() {
    const ProblemParams sets[] = {{1.0, 1.0, 1.0, 2.0, 0.0, 0.01}, {0.8, 0.9, 0.7, 2.0, 0.0, 0.01}};
    bool ok = true;
    std::ostringstream os;
    for (const auto& p : sets) {
        ScalingConfig c;
        c.params = p;
        const auto r = verify_scaling_criticality(c);
        ok = ok && r.pass;
        os << "\n      (alpha, beta1) = (" << p.alpha << ", " << p.beta1 << ") c0=" << fmt("%.4g", r.c0)
           << ": slopes at c0-0.3, c0, c0+0.3 = " << fmt("%+.4f %+.2e %+.4f", r.slopes[0], r.slopes[1], r.slopes[2]);
    }
    return {ok, "scales {1/4, 1/2, 1, 2, 4}; |slope| <= 0.05 at c0, >= 0.2 at c0 +- 0.3" + os.str()};
}

// 10 -----------------------------------------------------------------------
Outcome dimension_gate() {
    struct Row {
        double alpha, beta2, p;
        int d;
        bool accept;
    };
    // d0 = 4 - 2 (2 beta2 - 2/p)^+ / alpha; accept iff d < d0
    const Row rows[] = {
        {1.0, 1.0, 2.0, 1, true},  {1.0, 1.0, 2.0, 2, false}, {1.0, 1.0, 2.0, 3, false},
        {1.0, 1.0, 3.0, 1, true},  {1.0, 1.0, 3.0, 2, false}, {1.0, 1.0, 2.5, 1, true},
        {1.0, 0.5, 2.0, 3, true},  {1.0, 0.7, 2.0, 3, true},  {1.0, 0.8, 2.0, 3, false},
        {1.0, 0.8, 2.0, 2, true},  {0.5, 0.9, 2.0, 1, false}, {0.5, 0.6, 2.0, 3, true},
        {1.5, 1.4, 2.0, 1, true},  {1.5, 1.4, 2.0, 2, false}, {1.9, 0.3, 4.0, 3, true},
    };
    int bad = 0;
    for (const auto& r : rows) {
        const ProblemParams pp{r.alpha, 0.5 * r.alpha, r.beta2, r.p, 0.0, 0.01};
        const auto g = white_noise_gate(pp, r.d);
        bool thrown = false;
        try {
            require_white_noise_gate(pp, r.d);
        } catch (const ParameterError&) {
            thrown = true;
        }
        bool solver_refused = false;
        if (!r.accept) {
            const TorusGrid grid{r.d, 8, 1.0};
            ProblemData d;
            d.u0 = Field(grid);
            try {
                solve_white_noise(d, pp, grid, 1, {1.0, JumpLaw::TwoPoint, 1.0, 1, 1}, {1.0, 2}, 1, {});
            } catch (const ParameterError&) {
                solver_refused = true;
            }
        }
        if (g.accepted != r.accept || thrown == r.accept || (!r.accept && !solver_refused)) ++bad;
    }
    return {bad == 0, fmt("%d/%zu rows of the accept/reject table reproduced, including alpha = beta2 = 1, p = 2: "
                          "d0 = %.3g, only d = 1 admitted",
                          int(std::size(rows)) - bad, std::size(rows), white_noise_gate({1, 0.5, 1, 2, 0, 0.01}, 1).d0)};
}

// 11 -----------------------------------------------------------------------
Outcome picard() {
    const TorusGrid g{1, 64, 2 * std::numbers::pi};
    const TimeGrid tg{1.0, 64};
    const ProblemParams pp{0.8, 0.9, 0.7, 2.0, 0.0, 0.01};
    ProblemData d;
    d.u0 = Field(g);
    Field gp(g), hp(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x;
        g.position(i, &x);
        d.u0.values[i] = std::cos(x);
        gp.values[i] = std::sin(2 * x);
        hp.values[i] = 1.0 + 0.5 * std::cos(x);
    }
    d.g = {gp};
    d.h = {hp};
    d.f_u = {[](double u) { return 0.3 * std::sin(u); }, 0.3};
    d.g_u = {[](double u) { return 0.2 * std::tanh(u); }, 0.2};
    d.h_u = {[](double u) { return 0.2 * u; }, 0.2};
    NoiseRealization noise;
    noise.wiener = sample_wiener_path(tg, 1, 11);
    noise.jumps.push_back(sample_jump_path({3.0, JumpLaw::Gaussian, 0.5, 1, 1}, 1.0, 11));
    const auto u = solve_semilinear(d, pp, tg, noise, {1e-8, 50});
    bool below = true;
    for (double r : u.ratios) below = below && r < 1.0;
    std::ostringstream os;
    for (double r : u.ratios) os << fmt(" %.3f", r);
    return {u.converged && u.iterations <= 10 && below,
            fmt("Lipschitz constants (0.3, 0.2, 0.2): converged=%d after %d iterations, final increment %.2e; ratios",
                int(u.converged), u.iterations, u.increments.empty() ? 0.0 : u.increments.back()) +
                os.str()};
}

// 12 -----------------------------------------------------------------------
Outcome reproducibility() {
    using io::json;
    const json docs[] = {
        json::parse(R"({"verify": {"kind": "q", "alpha": 0.8, "beta": 0.9, "eps": 0.3, "delta": 0.1, "samples": 6}})"),
        json::parse(R"({"params": {"alpha": 0.8, "beta1": 0.9, "beta2": 0.7, "p": 2}, "seeds": [3],
                        "verify": {"samples": 12}})"),
        json::parse(R"({"verify": {"kind": "P", "alpha": 1.5, "delta": 0.5, "n": 2048, "length": 32}})"),
        json::parse(R"({"params": {"alpha": 1.2, "beta1": 1.0, "beta2": 0.9, "p": 2}, "seeds": [5],
                        "verify": {"samples": 6, "n": 32, "steps": 32}})"),
    };
    const char* claims[] = {"besov-conv", "max-reg", "band-envelope", "gronwall"};
    int identical = 0;
    const int saved = thread_count();
    for (int k = 0; k < 4; ++k) {
        set_thread_count(1);
        const std::string a = io::canonical_dump(io::run_verification(claims[k], docs[k]));
        set_thread_count(2);
        const std::string b = io::canonical_dump(io::run_verification(claims[k], docs[k]));
        const std::string c = io::canonical_dump(io::run_verification(claims[k], docs[k]));
        identical += (a == b && b == c);
    }
    set_thread_count(saved);
    return {identical == 4, fmt("%d/4 claims produced byte-identical reports over three runs (1, 2, 2 threads)", identical)};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    const std::vector<Criterion> all = {
        {1, "Mittag-Leffler cross-validation", 10, ml_cross_validation},
        {2, "classical heat reduction", 5, heat_reduction},
        {3, "kernel scaling identity", 60, kernel_scaling},
        {4, "fractional-calculus algebra", 60, frac_algebra},
        {5, "band envelopes", 300, band_envelopes},
        {6, "Besov convolution estimates", 600, besov},
        {7, "single-jump exactness", 60, single_jump},
        {8, "maximal-regularity Monte Carlo", 1800, max_regularity},
        {9, "scaling criticality", 300, scaling},
        {10, "white-noise dimension gate", 5, dimension_gate},
        {11, "Picard contraction", 60, picard},
        {12, "reproducibility", 300, reproducibility},
    };
    std::set<int> pick;
    for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& c : all) {
        if (!pick.empty() && !pick.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("[%s] criterion %2d: %s (%.1f s of %.0f s)\n      %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    c.budget_s, o.detail.c_str());
    }
    std::printf("%s\n", failed ? "acceptance: FAILED" : "acceptance: all criteria passed");
    return failed ? 1 : 0;
}
