#include "fspde/specfun.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "fspde/errors.hpp"
#include "fspde/quadrature.hpp"

namespace fspde {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lanczos g = 7, n = 9.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

double lanczos_gamma(double x) {
    // x >= 0.5
    x -= 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x + i);
    const double t = x + 7.5;
    // t^(x+0.5) split in two factors so that Gamma up to ~171 does not overflow early.
    const double half = std::pow(t, 0.5 * (x + 0.5));
    return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * acc;
}

// sign(Gamma(x)) for non-pole x.
double gamma_sign(double x) {
    if (x > 0.0) return 1.0;
    return (static_cast<long long>(std::ceil(-x)) % 2 == 0) ? 1.0 : -1.0;
}

// log|term_k| of the Mittag-Leffler series, -inf at poles.
double log_term(double a, double b, double logz, int k) {
    const double g = a * k + b;
    if (is_pole(g)) return -std::numeric_limits<double>::infinity();
    return k * logz - std::lgamma(g);
}

// First index from which the series terms decrease in magnitude.
int series_peak_index(double a, double b, double absz) {
    if (absz <= 0.0) return 0;
    const double k0 = (std::pow(absz, 1.0 / a) - b) / a;
    return std::max(0, static_cast<int>(std::ceil(k0)) + 1);
}

struct SeriesSum {
    double sum = 0.0;
    double abs_sum = 0.0;
    int terms = 0;
    bool converged = false;
};

SeriesSum series_double(double a, double b, double z, double tol) {
    SeriesSum out;
    const double absz = std::abs(z);
    const double logz = absz > 0.0 ? std::log(absz) : 0.0;
    const int k_peak = series_peak_index(a, b, absz);
    double sum = 0.0, comp = 0.0, abs_sum = 0.0;
    int small = 0;
    for (int k = 0; k < kMLSeriesTermCap; ++k) {
        double term;
        const double g = a * k + b;
        if (k == 0) {
            term = rgamma(b);
        } else if (z == 0.0) {
            term = 0.0;
        } else if (is_pole(g)) {
            term = 0.0;
        } else if (g < 160.0 && k * logz < 650.0) {
            term = std::pow(z, k) * rgamma(g);
        } else {
            const double mag = std::exp(log_term(a, b, logz, k));
            const double sgn = ((k % 2 == 1) && z < 0.0 ? -1.0 : 1.0) * gamma_sign(g);
            term = sgn * mag;
        }
        // Neumaier compensated summation.
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
        abs_sum += std::abs(term);
        out.terms = k + 1;
        if (k >= k_peak && std::abs(term) <= tol * std::abs(sum + comp)) {
            if (++small >= 3) {
                out.converged = true;
                break;
            }
        } else {
            small = 0;
        }
        if (z == 0.0) {
            out.converged = true;
            break;
        }
    }
    out.sum = sum + comp;
    out.abs_sum = abs_sum;
    return out;
}

// Double-precision result is trusted when rounding in the terms, amplified by
// the cancellation factor abs_sum/|sum|, stays below ~1e-14 relative.
bool series_double_trusted(const SeriesSum& s) {
    return s.converged && 8.0 * kEps * s.abs_sum <= 1e-14 * std::abs(s.sum);
}

class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

constexpr int kMpfrTermCap = 20000;
constexpr long kMpfrMaxBits = 16384;

// Series in MPFR. `bits` is the working precision; returns the sum rounded to double.
double series_mpfr(double a, double b, double z, long bits, double log2_max_term) {
    Mpfr sum(bits), zk(bits), zz(bits), g(bits), gam(bits), term(bits), bound(bits);
    mpfr_set_d(sum.get(), 0.0, MPFR_RNDN);
    mpfr_set_d(zk.get(), 1.0, MPFR_RNDN);
    mpfr_set_d(zz.get(), z, MPFR_RNDN);
    // Stop threshold: 2^(log2 max term - bits).
    mpfr_set_d(bound.get(), 1.0, MPFR_RNDN);
    mpfr_mul_2si(bound.get(), bound.get(), static_cast<long>(std::ceil(log2_max_term)) - bits,
                 MPFR_RNDN);
    const int k_peak = series_peak_index(a, b, std::abs(z));
    int small = 0;
    for (int k = 0; k < kMpfrTermCap; ++k) {
        if (k > 0) mpfr_mul(zk.get(), zk.get(), zz.get(), MPFR_RNDN);
        // g = a*k + b, exact for double a, b at this precision.
        mpfr_set_d(g.get(), a, MPFR_RNDN);
        mpfr_mul_ui(g.get(), g.get(), static_cast<unsigned long>(k), MPFR_RNDN);
        mpfr_add_d(g.get(), g.get(), b, MPFR_RNDN);
        if (mpfr_integer_p(g.get()) && mpfr_sgn(g.get()) <= 0) {
            mpfr_set_d(term.get(), 0.0, MPFR_RNDN);
        } else {
            mpfr_gamma(gam.get(), g.get(), MPFR_RNDN);
            mpfr_div(term.get(), zk.get(), gam.get(), MPFR_RNDN);
        }
        mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
        if (k >= k_peak && mpfr_cmpabs(term.get(), bound.get()) <= 0) {
            if (++small >= 3) return mpfr_get_d(sum.get(), MPFR_RNDN);
        } else {
            small = 0;
        }
        if (z == 0.0) return mpfr_get_d(sum.get(), MPFR_RNDN);
    }
    throw AccuracyError("Mittag-Leffler series did not converge within " +
                            std::to_string(kMpfrTermCap) +
                            " extended-precision terms; use the integral representation",
                        std::numeric_limits<double>::infinity());
}

}  // namespace

void MLParams::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw DomainError("Mittag-Leffler parameters must be finite");
    if (!(a > 0.0 && a < 2.0)) {
        std::ostringstream os;
        os << "Mittag-Leffler order a=" << a << " outside (0,2)";
        throw DomainError(os.str());
    }
}

std::pair<double, double> MLContour::admissible(double a) {
    return {0.5 * a * kPi, std::min(kPi, a * kPi)};
}

MLContour MLContour::with_eta(double a, double eta) {
    const auto [lo, hi] = admissible(a);
    if (!(eta > lo && eta < hi)) {
        std::ostringstream os;
        os << "contour angle eta=" << eta << " outside (" << lo << ", " << hi << ") for a=" << a;
        throw DomainError(os.str());
    }
    MLContour c;
    c.eta = eta;
    c.eta1 = -std::cos(eta / a);
    c.eta2 = eta / a;
    c.eta3 = std::cos(eta);
    return c;
}

MLContour MLContour::midpoint(double a) {
    const auto [lo, hi] = admissible(a);
    return with_eta(a, 0.5 * (lo + hi));
}

double gamma_fn(double x) {
    if (std::isnan(x)) return x;
    if (is_pole(x)) {
        std::ostringstream os;
        os << "Gamma has a pole at x=" << x;
        throw DomainError(os.str());
    }
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        return kPi / (std::sin(kPi * x) * lanczos_gamma(1.0 - x));
    }
    if (x > 171.7) return std::numeric_limits<double>::infinity();
    return lanczos_gamma(x);
}

double rgamma(double x) {
    if (is_pole(x)) return 0.0;
    if (x > 170.0) return std::exp(-std::lgamma(x));
    if (x < -170.0) {
        // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
        const double s = std::sin(kPi * x) / kPi;
        return s * std::exp(std::lgamma(1.0 - x));
    }
    return 1.0 / gamma_fn(x);
}

double ml_series(const MLParams& params, double z, double tol) {
    params.validate();
    if (!(tol > 0.0)) throw DomainError("series tolerance must be positive");
    if (!std::isfinite(z)) throw DomainError("series argument must be finite");
    const double a = params.a, b = params.b;
    const SeriesSum s = series_double(a, b, z, tol);
    if (series_double_trusted(s) || z == 0.0) return s.sum;

    // Cancellation-limited: size the MPFR precision from the largest term.
    const double absz = std::abs(z);
    const double logz = std::log(absz);
    const int k_peak = series_peak_index(a, b, absz);
    double max_log = 0.0;
    for (int k = 0; k <= k_peak + 2; ++k) max_log = std::max(max_log, log_term(a, b, logz, k));
    const double log2_max = max_log / std::log(2.0);
    long bits = 128 + static_cast<long>(std::ceil(std::max(0.0, log2_max)));
    for (int attempt = 0; attempt < 3; ++attempt) {
        if (bits > kMpfrMaxBits)
            throw AccuracyError("Mittag-Leffler series needs more than " +
                                    std::to_string(kMpfrMaxBits) +
                                    " bits at this argument; use the integral representation",
                                std::ldexp(1.0, static_cast<int>(log2_max) - 52));
        const double v = series_mpfr(a, b, z, bits, log2_max);
        // Bits of the result that survive the cancellation.
        const double lost = v != 0.0 ? log2_max - std::log2(std::abs(v)) : bits;
        if (bits - lost >= 64.0 || log2_max - bits < -100.0) return v;
        bits += static_cast<long>(std::ceil(lost)) + 32;
    }
    throw AccuracyError("Mittag-Leffler series precision escalation failed", 0.0);
}

double ml_integral(const MLParams& params, double v, const std::optional<MLContour>& contour) {
    params.validate();
    const double a = params.a, b = params.b;
    if (!(b < a + 1.0)) {
        std::ostringstream os;
        os << "integral representation requires b < a + 1 (a=" << a << ", b=" << b << ")";
        throw DomainError(os.str());
    }
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("ml_integral requires finite v >= 0");
    if (v == 0.0) return rgamma(b);

    const MLContour c = contour ? MLContour::with_eta(a, contour->eta) : MLContour::midpoint(a);
    const double s = a - b;  // exponent of u, > -1
    const double w = std::sin(c.eta2);
    const double phase0 = c.eta * (a + 1.0 - b) / a;
    const double v2 = v * v;

    // Smooth part of the integrand; the factor u^s is handled separately.
    auto smooth = [&](double u) {
        const double ua = std::pow(u, a);
        const double psi = u * w + phase0;
        const double num = ua * std::sin(psi - c.eta) + v * std::sin(psi);
        const double den = ua * ua + 2.0 * ua * v * c.eta3 + v2;
        return std::exp(-c.eta1 * u) * num / den;
    };
    auto full = [&](double u) { return u > 0.0 ? std::pow(u, s) * smooth(u) : 0.0; };

    const double upper = 46.0 / c.eta1;
    const double ustar = std::pow(v, 1.0 / a);
    const double center = std::min(ustar, 0.5 * upper);

    std::vector<double> pts;
    pts.push_back(0.0);
    for (double p = center / 8.0; p < upper; p *= (p < 8.0 * center ? 2.0 : 4.0)) pts.push_back(p);
    pts.push_back(upper);

    constexpr double kAbsTol = 1e-16;
    constexpr double kRelTol = 1e-14;
    double total = 0.0, err = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        quad::Result r;
        if (i == 0 && s < 0.0) {
            // u = p1 * w^{1/(1+s)} removes the endpoint singularity u^s.
            const double p1 = pts[1];
            const double e = 1.0 / (1.0 + s);
            r = quad::gauss_kronrod([&](double x) { return smooth(p1 * std::pow(x, e)); }, 0.0,
                                    1.0, kAbsTol, kRelTol);
            const double scale = std::pow(p1, 1.0 + s) * e;
            r.value *= scale;
            r.error *= scale;
        } else {
            r = quad::gauss_kronrod(full, pts[i], pts[i + 1], kAbsTol, kRelTol);
        }
        total += r.value;
        err += r.error;
        ok = ok && r.converged;
    }
    if (!ok && err > 1e-11) {
        std::ostringstream os;
        os << "Mittag-Leffler quadrature did not converge (a=" << a << ", b=" << b << ", v=" << v
           << ", achieved " << err / kPi << ")";
        throw AccuracyError(os.str(), err / kPi);
    }
    return total / kPi;
}

std::string_view to_string(MLMethod m) {
    switch (m) {
        case MLMethod::Series: return "series";
        case MLMethod::Integral: return "integral";
        case MLMethod::Asymptotic: return "asymptotic";
        case MLMethod::Auto: return "auto";
    }
    return "auto";
}

MLMethod parse_ml_method(std::string_view s) {
    if (s == "series") return MLMethod::Series;
    if (s == "integral") return MLMethod::Integral;
    if (s == "asymptotic") return MLMethod::Asymptotic;
    if (s == "auto") return MLMethod::Auto;
    throw DomainError("unknown Mittag-Leffler method '" + std::string(s) + "'");
}

namespace {

double integral_route(double a, double b, double z) {
    if (b < a + 1.0) return ml_integral({a, b}, -z);
    // E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z
    return (integral_route(a, b - a, z) - rgamma(b - a)) / z;
}

}  // namespace

double ml_asymptotic(const MLParams& params, double v, double* error) {
    params.validate();
    if (!(v > 0.0)) throw DomainError("asymptotic expansion requires v > 0");
    constexpr int kTerms = 10;
    const double a = params.a, b = params.b;
    double acc = 0.0, pw = 1.0, last = 0.0;
    for (int k = 1; k <= kTerms + 2; ++k) {
        pw /= -v;
        const double t = -pw * rgamma(b - a * k);
        if (k <= kTerms)
            acc += t;
        else
            last = std::max(last, std::abs(t));
    }
    if (error) {
        double osc = 0.0;
        if (a >= 1.0)
            osc = (2.0 / a) * std::pow(v, (1.0 - b) / a) *
                  std::exp(std::pow(v, 1.0 / a) * std::cos(kPi / a));
        *error = last + osc;
    }
    return acc;
}

namespace {

bool asymptotic_accurate(double a, double b, double v, double* value) {
    if (v < 16.0) return false;
    double err = 0.0;
    const double val = ml_asymptotic({a, b}, v, &err);
    if (err <= 1e-16 * std::abs(val)) {
        *value = val;
        return true;
    }
    return false;
}

}  // namespace

MLValue ml_eval(const MLParams& params, double z, MLMethod method) {
    params.validate();
    if (!(z <= 0.0)) {
        std::ostringstream os;
        os << "Mittag-Leffler evaluation supports z <= 0 only (got z=" << z << ")";
        throw DomainError(os.str());
    }
    if (z == 0.0) return {rgamma(params.b), method == MLMethod::Integral ? method : MLMethod::Series};
    switch (method) {
        case MLMethod::Series: return {ml_series(params, z), MLMethod::Series};
        case MLMethod::Integral: return {integral_route(params.a, params.b, z), MLMethod::Integral};
        case MLMethod::Asymptotic: return {ml_asymptotic(params, -z), MLMethod::Asymptotic};
        case MLMethod::Auto: break;
    }
    if (params.a == 1.0 && params.b <= 1.0 && params.b == std::floor(params.b))
        return {std::pow(z, 1.0 - params.b) * std::exp(z), MLMethod::Series};
    if (double v = 0.0; asymptotic_accurate(params.a, params.b, -z, &v))
        return {v, MLMethod::Asymptotic};
    if (-z <= kMLSeriesRadius) {
        const SeriesSum s = series_double(params.a, params.b, z, 1e-17);
        if (series_double_trusted(s)) return {s.sum, MLMethod::Series};
    }
    return {integral_route(params.a, params.b, z), MLMethod::Integral};
}

double ml(const MLParams& params, double z) { return ml_eval(params, z).value; }

// ---------------------------------------------------------------------------
// MLTable

namespace {

constexpr int kChebMin = 24;
constexpr int kChebMax = 96;

std::vector<double> cheb_fit(const std::vector<double>& f) {
    const int n = static_cast<int>(f.size());
    std::vector<double> c(n, 0.0);
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += f[j] * std::cos(kPi * k * (j + 0.5) / n);
        c[k] = 2.0 * acc / n;
    }
    c[0] *= 0.5;
    return c;
}

double clenshaw(const std::vector<double>& c, double x) {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        const double t = 2.0 * x * b1 - b2 + c[k];
        b2 = b1;
        b1 = t;
    }
    return x * b1 - b2 + c[0];
}

}  // namespace

MLTable::MLTable(double a, double b) : a_(a), b_(b) {
    MLParams{a, b}.validate();
    // Past v_max the expansion is accurate at every point, not only at 2^kmax.
    int kmax = 4;
    for (; kmax < 60; ++kmax) {
        double unused = 0.0;
        const double lo = std::ldexp(1.0, kmax);
        if (asymptotic_accurate(a, b, lo, &unused) && asymptotic_accurate(a, b, 2.0 * lo, &unused))
            break;
    }
    v_max_ = std::ldexp(1.0, kmax);
    slots_ = kmax + 1;
    slot_ = std::make_unique<Slot[]>(slots_);
}

MLTable::~MLTable() = default;

void MLTable::build_segment(std::vector<Segment>& out, double lo, double hi, int depth) const {
    const MLParams p{a_, b_};
    for (int n = kChebMin; n <= kChebMax; n *= 2) {
        std::vector<double> f(n);
        double scale = 0.0;
        for (int j = 0; j < n; ++j) {
            const double x = std::cos(kPi * (j + 0.5) / n);
            const double v = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x;
            f[j] = ml(p, -v);
            scale = std::max(scale, std::abs(f[j]));
        }
        auto c = cheb_fit(f);
        const double tail = std::max({std::abs(c[n - 1]), std::abs(c[n - 2]), std::abs(c[n - 3])});
        if (tail <= std::max(2e-14 * scale, 1e-18) || (n * 2 > kChebMax && depth >= 8)) {
            while (c.size() > 4 && std::abs(c.back()) <= 1e-17 * scale) c.pop_back();
            out.push_back({lo, hi, std::move(c)});
            return;
        }
    }
    const double mid = 0.5 * (lo + hi);
    build_segment(out, lo, mid, depth + 1);
    build_segment(out, mid, hi, depth + 1);
}

double MLTable::operator()(double v) const {
    if (!(v >= 0.0)) throw DomainError("MLTable argument must be >= 0");
    if (v >= v_max_) return ml_asymptotic({a_, b_}, v);
    int idx = 0;
    double lo = 0.0, hi = 1.0;
    if (v >= 1.0) {
        int e = 0;
        std::frexp(v, &e);  // v in [2^(e-1), 2^e)
        idx = e;
        lo = std::ldexp(1.0, e - 1);
        hi = 2.0 * lo;
    }
    Slot& slot = slot_[idx];
    std::call_once(slot.once, [&] { build_segment(slot.segments, lo, hi, 0); });
    auto it = std::upper_bound(slot.segments.begin(), slot.segments.end(), v,
                               [](double x, const Segment& s) { return x < s.lo; });
    const Segment& s = *(it - 1);
    const double x = (2.0 * v - s.lo - s.hi) / (s.hi - s.lo);
    return clenshaw(s.coeffs, x);
}

const MLTable& shared_ml_table(double a, double b) {
    static std::mutex mutex;
    static std::map<std::pair<double, double>, std::unique_ptr<MLTable>> tables;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = tables[{a, b}];
    if (!slot) slot = std::make_unique<MLTable>(a, b);
    return *slot;
}

}  // namespace fspde
