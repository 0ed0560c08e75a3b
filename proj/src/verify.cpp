#include "fspde/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "fspde/errors.hpp"
#include "fspde/fraccalc.hpp"
#include "fspde/lpnorms.hpp"
#include "fspde/parallel.hpp"
#include "fspde/quadrature.hpp"
#include "fspde/solver.hpp"
#include "fspde/specfun.hpp"

namespace fspde {
namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t mix(std::uint64_t seed, std::uint64_t i) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void require(bool ok, const char* what) {
    if (!ok) throw ParameterError(what);
}

// Symbol through the cached Mittag-Leffler table.
double table_symbol(const KernelSymbol& s, double xi_sq) {
    double mult = 1.0;
    if (s.gamma != 0.0) {
        if (xi_sq == 0.0) return 0.0;
        mult = std::pow(xi_sq, 0.5 * s.gamma);
    }
    const MLTable& e = shared_ml_table(s.alpha, s.ml_b());
    return mult * std::pow(s.t, s.time_power()) * e(std::pow(s.t, s.alpha) * xi_sq);
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

// Field sampled from a formula in physical coordinates (d = 1).
Field sample(const TorusGrid& g, const std::function<double(double)>& fn) {
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x;
        g.position(i, &x);
        f.values[i] = fn(x);
    }
    return f;
}

// (-Delta)^{e/2} applied to each field, then the pointwise l2 norm over the list.
Field l2_stack(const std::vector<Field>& fs, MultiplierKind kind, double order) {
    Field out(fs.front().grid);
    for (const Field& f : fs) {
        const Field m = order == 0.0 ? f : spectral_multiplier(f, kind, order);
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += m.values[i] * m.values[i];
    }
    for (double& v : out.values) v = std::sqrt(v);
    return out;
}

double pow_norm(const Field& f, double p) { return std::pow(lp_norm(f, p), p); }

// Right-endpoint sum of dt * ||Delta u(t_i)||^p over i >= 1.
double laplacian_lp_p(const SolutionField& u, double p) {
    const TorusGrid& g = u.grid;
    const double dt = u.times[1] - u.times[0];
    double acc = 0.0;
    for (std::size_t i = 1; i < u.times.size(); ++i) {
        auto s = u.slice(i);
        Field f(g, std::vector<double>(s.begin(), s.end()));
        acc += dt * pow_norm(spectral_multiplier(f, MultiplierKind::FracLaplacian, 2.0), p);
    }
    return acc;
}

struct MeanVar {
    double mean = 0.0, half_width = 0.0;
};

MeanVar mean_ci(const std::vector<double>& xs) {
    MeanVar r;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) r.mean += x;
    r.mean /= n;
    if (xs.size() > 1) {
        double v = 0.0;
        for (double x : xs) v += (x - r.mean) * (x - r.mean);
        v /= (n - 1.0);
        r.half_width = 1.96 * std::sqrt(v / n);
    }
    return r;
}

// Test profiles shared by the Monte Carlo studies. `k` is the base wave number 2 pi / L.
double forcing_profile(double x, double k) { return std::cos(k * x) + 0.5 * std::sin(3.0 * k * x); }
double wiener_profile(double x, double k, int c) {
    return std::cos((c + 1) * k * x) + 0.5 * std::sin((c + 2) * k * x) / (c + 1);
}
double jump_profile(double x, double k, int c, int r) {
    return std::sin((c + r + 1) * k * x + 0.3) + 0.25 * std::cos((c + r + 3) * k * x);
}

}  // namespace

// ---------------------------------------------------------------------------
// Band envelopes

void EnvelopeConfig::validate() const {
    require(alpha > 0.0 && alpha < 2.0, "0 < alpha < 2");
    require(j_min >= 1 && j_max >= j_min, "1 <= j_min <= j_max");
    require(t_count >= 2 && t_min > 0.0 && t_max > t_min, "0 < t_min < t_max with t_count >= 2");
    require(slack >= 1.0, "slack >= 1");
    switch (kind) {
        case KernelKind::q: {
            require(p >= 2.0, "p >= 2");
            require(1.0 / p < beta && beta < alpha + 1.0 / p, "1/p < beta < alpha + 1/p");
            require(1.0 / p < beta - 0.5 * alpha * eps, "1/p < beta - alpha*eps/2");
            require(beta - alpha < 1.0 / p - delta, "beta - alpha < 1/p - delta");
            require(delta > 0.0, "1/p - delta < 1/p");
            const double c1 = 2.0 * (alpha + 1.0 / p - beta) / alpha;
            require(c1 + eps > 0.0, "c1 + eps > 0");
            break;
        }
        case KernelKind::P:
            require(alpha > 1.0, "1 < alpha < 2");
            require(delta > 0.0 && delta < alpha, "0 < delta < alpha");
            break;
        case KernelKind::p: break;
    }
    TorusGrid g{1, n, length};
    g.validate();
    if (std::ldexp(1.0, j_max + 1) > g.nyquist()) {
        std::ostringstream os;
        os << "band " << j_max << " reaches |xi| = " << std::ldexp(1.0, j_max + 1)
           << " beyond the Nyquist frequency " << g.nyquist();
        throw ResolutionError(os.str(), 0);
    }
}

double band_envelope(const EnvelopeConfig& c, int j, double t) {
    const double a = c.alpha;
    switch (c.kind) {
        case KernelKind::q:
            return std::min(std::pow(2.0, (2.0 * c.delta / a + c.eps) * j) * std::pow(t, -1.0 / c.p + c.delta),
                            std::pow(t, -1.0 / c.p - 0.5 * a * c.eps));
        case KernelKind::p: return std::min(std::pow(2.0, -2.0 * j / a) / t, 1.0);
        case KernelKind::P:
            return std::min(std::pow(2.0, -2.0 * j + 2.0 * c.delta * j / a) * std::pow(t, 1.0 - a + c.delta), t);
    }
    return 0.0;
}

double band_kernel_l1(const EnvelopeConfig& c, int j, double t) {
    const TorusGrid g{1, c.n, c.length};
    KernelSymbol s;
    s.kind = c.kind;
    s.alpha = c.alpha;
    s.beta = c.beta;
    s.t = t;
    if (c.kind == KernelKind::q) s.gamma = 2.0 * (c.alpha + 1.0 / c.p - c.beta) / c.alpha + c.eps;
    std::vector<cplx> spec(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double xi2 = g.xi_sq(i);
        const double w = lp_window(std::ldexp(std::sqrt(xi2), -j));
        spec[i] = w == 0.0 ? 0.0 : w * table_symbol(s, xi2);
    }
    const auto v = inverse_fft_real(g, spec);
    double acc = 0.0;
    for (double x : v) acc += std::abs(x);
    // Kernel samples are (N/L) v and cells have width L/N.
    return acc;
}

EnvelopeReport verify_band_envelopes(const EnvelopeConfig& cfg) {
    cfg.validate();
    EnvelopeReport r;
    r.config = cfg;
    r.claim = std::string("band-envelope:") + (cfg.kind == KernelKind::q ? "q" : cfg.kind == KernelKind::p ? "p" : "P");
    const int nj = cfg.j_max - cfg.j_min + 1;
    r.points.resize(static_cast<std::size_t>(nj) * cfg.t_count);
    const double lr = std::log(cfg.t_max / cfg.t_min) / (cfg.t_count - 1);
    parallel_for(r.points.size(), [&](std::size_t k) {
        const int j = cfg.j_min + static_cast<int>(k) / cfg.t_count;
        const int i = static_cast<int>(k) % cfg.t_count;
        EnvelopePoint& pt = r.points[k];
        pt.j = j;
        pt.t = cfg.t_min * std::exp(lr * i);
        pt.norm = band_kernel_l1(cfg, j, pt.t);
        pt.envelope = band_envelope(cfg, j, pt.t);
        pt.calibration = (j + i) % 2 == 0;
    });
    for (const auto& pt : r.points) {
        const double ratio = pt.norm / pt.envelope;
        if (pt.calibration) {
            ++r.calibration;
            r.max_ratio_calibration = std::max(r.max_ratio_calibration, ratio);
        } else {
            ++r.held_out;
            r.max_ratio_held_out = std::max(r.max_ratio_held_out, ratio);
        }
    }
    r.fitted_c = cfg.slack * r.max_ratio_calibration;
    std::vector<double> xs, ys;
    for (const auto& pt : r.points) {
        if (!pt.calibration && pt.norm > r.fitted_c * pt.envelope) ++r.violations;
        const double s = std::pow(2.0, 2.0 * pt.j / cfg.alpha) * pt.t;
        if (s >= 10.0) {
            xs.push_back(std::log(s));
            ys.push_back(std::log(pt.norm / pt.envelope));
        }
    }
    if (xs.size() >= 3) r.tail_slope = slope_fit(xs, ys);
    return r;
}

// ---------------------------------------------------------------------------
// Ratio studies

double RatioStudy::growth() const {
    double g = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < levels.size(); ++i)
        g = std::max(g, levels[i].ratio / levels[i - 1].ratio - 1.0);
    return levels.size() < 2 ? 0.0 : g;
}

bool RatioStudy::pass() const {
    if (levels.size() < 2) return false;
    for (const auto& l : levels)
        if (!std::isfinite(l.ratio)) return false;
    return growth() <= growth_limit;
}

void BesovConfig::validate() const {
    require(alpha > 0.0 && alpha < 2.0, "0 < alpha < 2");
    require(p >= 2.0, "p >= 2");
    require(horizon > 0.0, "horizon > 0");
    require(samples >= 1, "samples >= 1");
    require(levels.size() >= 2, "at least two mesh levels");
    require(max_wave >= 2, "max_wave >= 2");
    for (const auto& l : levels) require(l.n / 2 >= max_wave && l.steps >= 2, "levels resolve max_wave");
    if (kind == KernelKind::q) {
        require(1.0 / p < beta && beta < alpha + 1.0 / p, "1/p < beta < alpha + 1/p");
        require(1.0 / p < beta - 0.5 * alpha * eps, "1/p < beta - alpha*eps/2");
        require(beta - alpha < 1.0 / p - delta, "beta - alpha < 1/p - delta");
        require(delta > 0.0, "1/p - delta < 1/p");
    }
    if (kind == KernelKind::P) require(alpha > 1.0, "1 < alpha < 2");
}

double BesovConfig::rhs_index() const {
    switch (kind) {
        case KernelKind::q: return eps;
        case KernelKind::p: return -2.0 / (alpha * p);
        case KernelKind::P: return alpha > 1.0 + 1.0 / p ? -2.0 / (alpha * p) - 2.0 / alpha : -2.0 / alpha;
    }
    return 0.0;
}

double BesovConfig::lhs_order() const {
    return kind == KernelKind::q ? 2.0 * (alpha + 1.0 / p - beta) / alpha + eps : 0.0;
}

Field besov_test_function(const TorusGrid& grid, int max_wave, std::uint64_t seed, int index) {
    Stream s(seed, static_cast<std::uint64_t>(index), 77);
    const double power = -2.0 + 4.0 * s.uniform();
    std::vector<double> a(max_wave), b(max_wave);
    for (int m = 0; m < max_wave; ++m) {
        const double w = std::pow(1.0 + m, power);
        a[m] = w * s.normal();
        b[m] = m == 0 ? 0.0 : w * s.normal();
    }
    const double k = 2.0 * kPi / grid.length;
    return sample(grid, [&](double x) {
        double v = 0.0;
        for (int m = 0; m < max_wave; ++m) v += a[m] * std::cos(m * k * x) + b[m] * std::sin(m * k * x);
        return v;
    });
}

RatioStudy verify_besov_convolution(const BesovConfig& cfg) {
    cfg.validate();
    RatioStudy study;
    study.claim = std::string("besov-conv:") + (cfg.kind == KernelKind::q ? "q" : cfg.kind == KernelKind::p ? "p" : "P");
    study.samples = cfg.samples;
    study.params = {{"kind", cfg.kind == KernelKind::q ? "q" : cfg.kind == KernelKind::p ? "p" : "P"},
                    {"alpha", cfg.alpha},
                    {"beta", cfg.beta},
                    {"p", cfg.p},
                    {"eps", cfg.eps},
                    {"delta", cfg.delta},
                    {"horizon", cfg.horizon},
                    {"rhs_index", cfg.rhs_index()},
                    {"lhs_order", cfg.lhs_order()}};

    KernelSymbol base;
    base.kind = cfg.kind;
    base.alpha = cfg.alpha;
    base.beta = cfg.beta;
    base.gamma = cfg.lhs_order();
    const double nu = std::min(0.0, base.time_power());
    const int grade = std::max(2, static_cast<int>(std::ceil(2.0 / (1.0 + nu * cfg.p))));
    constexpr int kGauss = 4;
    double gx[kGauss], gw[kGauss];
    quad::gauss_legendre(kGauss, gx, gw);

    for (const MeshLevel& lvl : cfg.levels) {
        const TorusGrid g{1, lvl.n, cfg.length};
        const std::size_t m = g.size();
        std::vector<std::vector<cplx>> spectra(cfg.samples);
        std::vector<double> rhs(cfg.samples);
        const DyadicPartition part(g);
        for (int s = 0; s < cfg.samples; ++s) {
            const Field f = besov_test_function(g, cfg.max_wave, cfg.seed, s);
            spectra[s] = forward_fft(g, f.values);
            const double b = norm(f, {Space::Besov, cfg.p, cfg.rhs_index()}, &part);
            rhs[s] = (cfg.kind == KernelKind::q ? cfg.horizon : 1.0) * std::pow(b, cfg.p);
        }
        // Quadrature nodes in r: Gauss-Legendre per step; the first step is split
        // geometrically towards r = 0 and its innermost piece is graded.
        std::vector<double> rn, rw;
        const double h = cfg.horizon / lvl.steps;
        auto panel = [&](double lo, double hi) {
            for (int q = 0; q < kGauss; ++q) {
                rn.push_back(lo + 0.5 * (gx[q] + 1.0) * (hi - lo));
                rw.push_back(0.5 * gw[q] * (hi - lo));
            }
        };
        constexpr int kSplits = 48;
        const double inner = std::ldexp(h, -kSplits);
        for (int q = 0; q < kGauss; ++q) {
            const double u = 0.5 * (gx[q] + 1.0);
            rn.push_back(inner * std::pow(u, grade));
            rw.push_back(0.5 * gw[q] * inner * grade * std::pow(u, grade - 1));
        }
        for (int k = kSplits; k > 0; --k) panel(std::ldexp(h, -k), std::ldexp(h, -k + 1));
        for (int k = 1; k < lvl.steps; ++k) panel(k * h, (k + 1) * h);
        std::vector<double> lhs(cfg.samples, 0.0);
        std::vector<std::vector<double>> per_node(rn.size(), std::vector<double>(cfg.samples));
        parallel_for(rn.size(), [&](std::size_t q) {
            KernelSymbol s = base;
            s.t = rn[q];
            std::map<long, double> radial;
            std::vector<double> sym(m);
            for (std::size_t i = 0; i < m; ++i) {
                const long key = g.wave_sq(i);
                auto it = radial.find(key);
                if (it == radial.end()) it = radial.emplace(key, table_symbol(s, g.xi_sq(i))).first;
                sym[i] = it->second;
            }
            const double wt = cfg.kind == KernelKind::q ? cfg.horizon - rn[q] : 1.0;
            std::vector<cplx> buf(m);
            for (int j = 0; j < cfg.samples; ++j) {
                for (std::size_t i = 0; i < m; ++i) buf[i] = sym[i] * spectra[j][i];
                const Field v(g, inverse_fft_real(g, buf));
                per_node[q][j] = rw[q] * wt * pow_norm(v, cfg.p);
            }
        });
        for (std::size_t q = 0; q < rn.size(); ++q)
            for (int j = 0; j < cfg.samples; ++j) lhs[j] += per_node[q][j];
        LevelResult res;
        res.level = lvl;
        for (int j = 0; j < cfg.samples; ++j) {
            const double ratio = rhs[j] > 0.0 ? lhs[j] / rhs[j] : 0.0;
            if (ratio > res.ratio) {
                res.ratio = ratio;
                res.lhs = lhs[j];
                res.rhs = rhs[j];
            }
        }
        study.levels.push_back(res);
    }
    return study;
}

void MaxRegConfig::validate() const {
    params.validate();
    require(derived_exponents(params).theta > 0.0, "theta > 0");
    require(horizon > 0.0, "horizon > 0");
    require(samples >= 1, "samples >= 1");
    require(levels.size() >= 2, "at least two mesh levels");
    require(wiener_copies >= 1, "wiener copies >= 1");
    require(forcing || wiener || jumps, "at least one of forcing, wiener, jumps");
    levy.validate();
    int finest = 0;
    for (const auto& l : levels) finest = std::max(finest, l.steps);
    for (const auto& l : levels) require(finest % l.steps == 0, "level steps divide the finest step count");
}

RatioStudy verify_max_regularity(const MaxRegConfig& cfg) {
    cfg.validate();
    const ProblemParams& pp = cfg.params;
    const DerivedExponents ex = derived_exponents(pp);
    RatioStudy study;
    study.claim = "max-reg";
    study.samples = cfg.samples;
    study.params = to_json(pp);
    study.params["c0"] = ex.c0;
    study.params["c0bar"] = ex.c0bar;
    int finest = 0;
    for (const auto& l : cfg.levels) finest = std::max(finest, l.steps);
    const double k = 2.0 * kPi / cfg.length;
    const double p = pp.p;

    for (const MeshLevel& lvl : cfg.levels) {
        const TorusGrid g{1, lvl.n, cfg.length};
        const TimeGrid tg{cfg.horizon, lvl.steps};
        ProblemData data;
        const Field fprof = sample(g, [&](double x) { return forcing_profile(x, k); });
        if (cfg.forcing)
            data.f = [&](double t, std::span<double> out) {
                for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::cos(kPi * t) * fprof.values[i];
            };
        if (cfg.wiener)
            for (int c = 0; c < cfg.wiener_copies; ++c)
                data.g.push_back(sample(g, [&](double x) { return wiener_profile(x, k, c); }));
        if (cfg.jumps) {
            data.d1 = cfg.levy.d1;
            for (int c = 0; c < cfg.levy.copies; ++c)
                for (int r = 0; r < cfg.levy.d1; ++r)
                    data.h.push_back(sample(g, [&](double x) { return jump_profile(x, k, c, r); }));
        }
        data.u0 = Field(g);

        // Right-hand side, deterministic.
        double rhs = 0.0;
        if (cfg.forcing) {
            double acc = 0.0;
            for (int i = 1; i <= lvl.steps; ++i)
                acc += tg.dt() * std::pow(std::abs(std::cos(kPi * tg.node(i))), p) * pow_norm(fprof, p);
            rhs += std::pow(acc, 1.0 / p);
        }
        if (cfg.wiener)
            rhs += std::pow(cfg.horizon * pow_norm(l2_stack(data.g, MultiplierKind::FracLaplacian, ex.c0), p), 1.0 / p);
        if (cfg.jumps)
            rhs += std::pow(cfg.horizon * pow_norm(l2_stack(data.h, MultiplierKind::FracLaplacian, ex.c0bar), p),
                            1.0 / p);

        std::vector<double> lhs(cfg.samples);
        for (int s = 0; s < cfg.samples; ++s) {
            const std::uint64_t seed = mix(cfg.seed, static_cast<std::uint64_t>(s));
            NoiseRealization noise;
            if (cfg.wiener) noise.wiener = sample_wiener_path(tg, cfg.wiener_copies, seed, finest);
            if (cfg.jumps)
                for (int c = 0; c < cfg.levy.copies; ++c)
                    noise.jumps.push_back(sample_jump_path(cfg.levy, cfg.horizon, seed, c));
            const SolutionField u = solve_linear(data, pp, tg, noise);
            lhs[s] = laplacian_lp_p(u, p);
        }
        const MeanVar mv = mean_ci(lhs);
        LevelResult res;
        res.level = lvl;
        res.lhs = std::pow(mv.mean, 1.0 / p);
        res.rhs = rhs;
        res.ratio = res.lhs / rhs;
        res.half_width = mv.mean > 0.0 ? res.ratio * mv.half_width / (p * mv.mean) : 0.0;
        study.levels.push_back(res);
    }
    return study;
}

// ---------------------------------------------------------------------------
// Scaling criticality

void ScalingConfig::validate() const {
    params.validate();
    require(params.beta1 > 0.5, "beta1 > 1/2");
    require(scales.size() >= 2, "at least two scales");
    for (double c : scales) require(c > 0.0, "scales > 0");
    require(!offsets.empty(), "at least one exponent offset");
    require(samples >= 1, "samples >= 1");
    TorusGrid{1, n, length}.validate();
    TimeGrid{horizon, steps}.validate();
}

ScalingReport verify_scaling_criticality(const ScalingConfig& cfg) {
    cfg.validate();
    const ProblemParams& pp = cfg.params;
    const double a = pp.alpha, p = pp.p;
    ScalingReport rep;
    rep.config = cfg;
    rep.c0 = derived_exponents(pp).c0;
    for (double off : cfg.offsets) rep.exponents.push_back(rep.c0 + off);
    rep.ratios.assign(rep.exponents.size(), std::vector<double>(cfg.scales.size()));

    const TorusGrid g0{1, cfg.n, cfg.length};
    const double k = 2.0 * kPi / cfg.length;
    const Field gbase = sample(g0, [&](double x) { return wiener_profile(x, k, 0); });
    const TimeGrid t0{cfg.horizon, cfg.steps};
    std::vector<WienerPath> paths;
    for (int s = 0; s < cfg.samples; ++s)
        paths.push_back(sample_wiener_path(t0, 1, mix(cfg.seed, static_cast<std::uint64_t>(s))));

    for (std::size_t ci = 0; ci < cfg.scales.size(); ++ci) {
        const double c = cfg.scales[ci];
        const TorusGrid gc{1, cfg.n, cfg.length / c};
        const TimeGrid tc{std::pow(c, -2.0 / a) * cfg.horizon, cfg.steps};
        const double gfac = std::pow(c, 2.0 - (2.0 * pp.beta1 - 1.0) / a);
        Field gcf(gc, gbase.values);
        for (double& v : gcf.values) v *= gfac;
        double acc = 0.0;
        for (const WienerPath& w0 : paths) {
            WienerPath w = w0;
            w.grid = tc;
            for (double& dw : w.increments) dw *= std::pow(c, -1.0 / a);
            const SolutionField u = stochastic_convolution_wiener({gcf}, pp.beta1, w, pp, tc);
            acc += laplacian_lp_p(u, p);
        }
        const double lhs = std::pow(acc / cfg.samples, 1.0 / p);
        for (std::size_t ei = 0; ei < rep.exponents.size(); ++ei) {
            const Field ge = spectral_multiplier(gcf, MultiplierKind::FracLaplacian, rep.exponents[ei]);
            const double den = std::pow(tc.tmax * pow_norm(ge, p), 1.0 / p);
            rep.ratios[ei][ci] = lhs / den;
        }
    }
    std::vector<double> lc;
    for (double c : cfg.scales) lc.push_back(std::log(c));
    rep.pass = true;
    for (std::size_t ei = 0; ei < rep.exponents.size(); ++ei) {
        std::vector<double> lr;
        for (double r : rep.ratios[ei]) lr.push_back(std::log(r));
        const double sl = slope_fit(lc, lr);
        rep.slopes.push_back(sl);
        if (cfg.offsets[ei] == 0.0) {
            if (!(std::abs(sl) <= cfg.flat_tol)) rep.pass = false;
        } else if (!(std::abs(sl) >= cfg.steep_min)) {
            rep.pass = false;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Gronwall bound

void GronwallConfig::validate() const {
    params.validate();
    require(derived_exponents(params).theta > 0.0, "theta > 0");
    require(samples >= 1, "samples >= 1");
    require(slack >= 1.0, "slack >= 1");
    levy.validate();
    TorusGrid{1, n, length}.validate();
    TimeGrid{horizon, steps}.validate();
}

GronwallReport verify_gronwall(const GronwallConfig& cfg) {
    cfg.validate();
    const ProblemParams& pp = cfg.params;
    const double p = pp.p, gam = pp.gamma;
    GronwallReport rep;
    rep.config = cfg;
    rep.theta = derived_exponents(pp).theta;
    const TorusGrid g{1, cfg.n, cfg.length};
    const TimeGrid tg{cfg.horizon, cfg.steps};
    const double k = 2.0 * kPi / cfg.length;
    auto hnorm_p = [&](const Field& f) {
        return std::pow(norm(f, {Space::Sobolev, p, gam}), p);
    };
    auto bessel_l2 = [&](const std::vector<Field>& fs) {
        return std::pow(lp_norm(l2_stack(fs, MultiplierKind::Bessel, gam), p), p);
    };

    ProblemData data;
    data.u0 = Field(g);
    double initial = 0.0;
    if (cfg.initial) {
        data.u0 = sample(g, [&](double x) { return std::exp(std::sin(k * x)) - 1.0; });
        initial += hnorm_p(data.u0);
        if (pp.alpha > 1.0) {
            data.v0 = sample(g, [&](double x) { return std::cos(2.0 * k * x); });
            initial += hnorm_p(data.v0);
        }
    }
    const Field fprof = sample(g, [&](double x) { return forcing_profile(x, k); });
    if (cfg.forcing)
        data.f = [&](double t, std::span<double> out) {
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 + t) * fprof.values[i];
        };
    if (cfg.wiener) data.g.push_back(sample(g, [&](double x) { return wiener_profile(x, k, 0); }));
    if (cfg.jumps) {
        data.d1 = cfg.levy.d1;
        for (int c = 0; c < cfg.levy.copies; ++c)
            for (int r = 0; r < cfg.levy.d1; ++r)
                data.h.push_back(sample(g, [&](double x) { return jump_profile(x, k, c, r); }));
    }
    const double fp = cfg.forcing ? hnorm_p(fprof) : 0.0;
    const double gp = cfg.wiener ? bessel_l2(data.g) : 0.0;
    const double hp = cfg.jumps ? bessel_l2(data.h) : 0.0;

    // Cumulative data mass M(t_i) = sum_{k<=i} dt (||f(t_k)||^p + ||g||^p + ||h||^p).
    const int n = cfg.steps;
    std::vector<double> mass(n + 1, 0.0);
    for (int i = 1; i <= n; ++i)
        mass[i] = mass[i - 1] + tg.dt() * (std::pow(1.0 + tg.node(i), p) * fp + gp + hp);
    const GridFunction im = frac_integral({tg, mass}, rep.theta);

    std::vector<double> lhs(n + 1, 0.0);
    for (int s = 0; s < cfg.samples; ++s) {
        const std::uint64_t seed = mix(cfg.seed, static_cast<std::uint64_t>(s));
        NoiseRealization noise;
        if (cfg.wiener) noise.wiener = sample_wiener_path(tg, 1, seed);
        if (cfg.jumps)
            for (int c = 0; c < cfg.levy.copies; ++c)
                noise.jumps.push_back(sample_jump_path(cfg.levy, cfg.horizon, seed, c));
        const SolutionField u = solve_linear(data, pp, tg, noise);
        double acc = 0.0;
        for (int i = 1; i <= n; ++i) {
            acc += tg.dt() * hnorm_p(u.at(i));
            lhs[i] += acc / cfg.samples;
        }
    }
    double max_cal = 0.0;
    for (int i = 1; i <= n; ++i) {
        rep.times.push_back(tg.node(i));
        rep.lhs.push_back(lhs[i]);
        rep.rhs.push_back(std::tgamma(rep.theta) * im.values[i] + initial);
        if (i % 2 == 0) {
            ++rep.calibration;
            if (rep.lhs.back() > 0.0) max_cal = std::max(max_cal, rep.lhs.back() / rep.rhs.back());
        }
    }
    rep.fitted_c = cfg.slack * max_cal;
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        if ((i + 1) % 2 == 0) continue;
        ++rep.held_out;
        if (rep.lhs[i] > rep.fitted_c * rep.rhs[i]) ++rep.violations;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Fractional calculus refinement

double poly_frac_integral(std::span<const double> poly, double g, double t) {
    double v = 0.0;
    for (std::size_t k = 0; k < poly.size(); ++k)
        v += poly[k] * std::tgamma(k + 1.0) / std::tgamma(k + 1.0 + g) * std::pow(t, k + g);
    return v;
}

namespace {

GridFunction poly_on(const TimeGrid& tg, std::span<const double> poly) {
    std::vector<double> v(tg.n + 1);
    for (int i = 0; i <= tg.n; ++i) {
        double acc = 0.0, tk = 1.0;
        for (double c : poly) {
            acc += c * tk;
            tk *= tg.node(i);
        }
        v[i] = acc;
    }
    return {tg, std::move(v)};
}

void finish(RefinementResult& r) {
    for (std::size_t i = 0; i + 1 < r.errors.size(); ++i) r.ratios.push_back(r.errors[i] / r.errors[i + 1]);
}

}  // namespace

RefinementResult semigroup_refinement(std::span<const double> poly, double a, double b, double tmax,
                                      int base, int levels, double from) {
    RefinementResult r;
    for (int l = 0; l < levels; ++l) {
        const TimeGrid tg{tmax, base << l};
        const GridFunction ab = frac_integral(frac_integral(poly_on(tg, poly), b), a);
        double err = 0.0;
        for (int i = 0; i <= tg.n; ++i)
            if (tg.node(i) >= from * tmax)
                err = std::max(err, std::abs(ab.values[i] - poly_frac_integral(poly, a + b, tg.node(i))));
        r.steps.push_back(tg.n);
        r.errors.push_back(err);
    }
    finish(r);
    return r;
}

RefinementResult inversion_refinement(std::span<const double> poly, double a, double tmax, int base,
                                      int levels, double from) {
    RefinementResult r;
    for (int l = 0; l < levels; ++l) {
        const TimeGrid tg{tmax, base << l};
        const GridFunction phi = poly_on(tg, poly);
        const GridFunction back = rl_derivative(frac_integral(phi, a), a);
        double err = 0.0;
        for (int i = 0; i <= tg.n; ++i)
            if (tg.node(i) >= from * tmax) err = std::max(err, std::abs(back.values[i] - phi.values[i]));
        r.steps.push_back(tg.n);
        r.errors.push_back(err);
    }
    finish(r);
    return r;
}

// ---------------------------------------------------------------------------
// Reports

json to_json(const ProblemParams& p) {
    return {{"alpha", p.alpha}, {"beta1", p.beta1}, {"beta2", p.beta2},
            {"p", p.p},         {"gamma", p.gamma}, {"kappa", p.kappa}};
}

json to_json(const DerivedExponents& e) {
    return {{"c0", e.c0},       {"c0bar", e.c0bar},       {"theta", e.theta},
            {"d0", e.d0},       {"u0_index", e.u0_index}, {"v0_index", e.v0_index}};
}

json to_json(const EnvelopeReport& r) {
    const auto& c = r.config;
    json pts = json::array();
    for (const auto& pt : r.points)
        pts.push_back({{"j", pt.j}, {"t", pt.t}, {"norm", pt.norm}, {"envelope", pt.envelope},
                       {"calibration", pt.calibration}});
    return {{"claim", r.claim},
            {"params",
             {{"alpha", c.alpha}, {"beta", c.beta}, {"p", c.p}, {"eps", c.eps}, {"delta", c.delta},
              {"j_range", {c.j_min, c.j_max}}, {"t_range", {c.t_min, c.t_max}}, {"t_count", c.t_count},
              {"n", c.n}, {"length", c.length}, {"slack", c.slack}}},
            {"fitted_constants", {{"C", r.fitted_c}}},
            {"violations", r.violations},
            {"calibration_points", r.calibration},
            {"held_out_points", r.held_out},
            {"max_ratio_calibration", r.max_ratio_calibration},
            {"max_ratio_held_out", r.max_ratio_held_out},
            {"tail_slope", r.tail_slope},
            {"points", pts},
            {"ratios_by_level", json::array()},
            {"verdict", r.pass() ? "pass" : "fail"}};
}

json to_json(const RatioStudy& r) {
    json lv = json::array();
    for (const auto& l : r.levels)
        lv.push_back({{"n", l.level.n}, {"steps", l.level.steps}, {"ratio", l.ratio},
                      {"half_width", l.half_width}, {"lhs", l.lhs}, {"rhs", l.rhs}});
    return {{"claim", r.claim},
            {"params", r.params},
            {"fitted_constants", json::object()},
            {"violations", r.pass() ? 0 : 1},
            {"samples", r.samples},
            {"growth", r.growth()},
            {"growth_limit", r.growth_limit},
            {"ratios_by_level", lv},
            {"verdict", r.pass() ? "pass" : "fail"}};
}

json to_json(const ScalingReport& r) {
    const auto& c = r.config;
    int bad = 0;
    for (std::size_t i = 0; i < r.slopes.size(); ++i) {
        const bool ok = c.offsets[i] == 0.0 ? std::abs(r.slopes[i]) <= c.flat_tol
                                            : std::abs(r.slopes[i]) >= c.steep_min;
        if (!ok) ++bad;
    }
    return {{"claim", "scaling"},
            {"params", to_json(c.params)},
            {"fitted_constants", {{"c0", r.c0}}},
            {"violations", bad},
            {"scales", c.scales},
            {"exponents", r.exponents},
            {"ratios", r.ratios},
            {"slopes", r.slopes},
            {"ratios_by_level", json::array()},
            {"verdict", r.pass ? "pass" : "fail"}};
}

json to_json(const GronwallReport& r) {
    return {{"claim", "gronwall"},
            {"params", to_json(r.config.params)},
            {"fitted_constants", {{"C", r.fitted_c}, {"theta", r.theta}}},
            {"violations", r.violations},
            {"calibration_points", r.calibration},
            {"held_out_points", r.held_out},
            {"times", r.times},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"ratios_by_level", json::array()},
            {"verdict", r.pass() ? "pass" : "fail"}};
}

}  // namespace fspde
