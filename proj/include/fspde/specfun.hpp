#pragma once

// Gamma and two-parameter Mittag-Leffler functions on the non-positive real axis.

#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <string_view>
#include <vector>

namespace fspde {

/// Order pair (a, b) of E_{a,b}. Valid when 0 < a < 2.
struct MLParams {
    double a = 1.0;
    double b = 1.0;

    /// Throws DomainError unless 0 < a < 2 and both values are finite.
    void validate() const;
};

/// Contour constants of the real-line integral representation of E_{a,b}(-v).
/// All of them depend on the angle eta only, which must lie in
/// (a*pi/2, min(pi, a*pi)).
struct MLContour {
    double eta = 0.0;
    double eta1 = 0.0;  ///< -cos(eta/a) > 0, decay rate of the integrand
    double eta2 = 0.0;  ///< eta/a
    double eta3 = 0.0;  ///< cos(eta) in (-1, 1)

    /// Midpoint of the admissible interval for eta.
    static MLContour midpoint(double a);
    /// Contour for a caller-chosen eta; DomainError if eta is not admissible.
    static MLContour with_eta(double a, double eta);
    /// Open interval of admissible eta for order a.
    static std::pair<double, double> admissible(double a);
};

/// Gamma function, Lanczos approximation with reflection for x < 1/2.
/// Throws DomainError at the poles 0, -1, -2, ...
double gamma_fn(double x);

/// 1/Gamma(x); exactly zero at the poles of Gamma.
double rgamma(double x);

/// Series radius used by the `ml` dispatcher.
inline constexpr double kMLSeriesRadius = 5.0;
/// Hard cap on the number of series terms evaluated in double precision.
inline constexpr int kMLSeriesTermCap = 600;

/// Power series E_{a,b}(z) = sum_k z^k / Gamma(a k + b).
///
/// Terms are added with Neumaier compensation and the sum stops once three
/// consecutive terms fall below tol * |partial sum|. When the alternating
/// series would lose more digits to cancellation than double precision can
/// absorb, the sum is redone in MPFR with a working precision sized from the
/// largest term. Throws AccuracyError when neither route can converge within
/// its term cap (large |z|, small a), which means the caller should use
/// `ml_integral` instead.
double ml_series(const MLParams& params, double z, double tol = 1e-17);

/// E_{a,b}(-v) for v >= 0 through the real-line integral representation,
/// integrated after the substitution u = r^{1/a}. Requires b < a + 1.
double ml_integral(const MLParams& params, double v,
                   const std::optional<MLContour>& contour = std::nullopt);

enum class MLMethod { Series, Integral, Asymptotic, Auto };

std::string_view to_string(MLMethod m);
MLMethod parse_ml_method(std::string_view s);

struct MLValue {
    double value = 0.0;
    MLMethod method = MLMethod::Series;  ///< route that produced the value
};

/// Large-argument expansion E_{a,b}(-v) ~ -sum_{k=1}^{K} (-v)^{-k} / Gamma(b - a k).
/// `error` receives the size of the first omitted term plus, for a > 1, a bound
/// on the exponentially damped oscillating part the expansion leaves out.
double ml_asymptotic(const MLParams& params, double v, double* error = nullptr);

/// E_{a,b}(z) for z <= 0 with an explicit route choice.
MLValue ml_eval(const MLParams& params, double z, MLMethod method = MLMethod::Auto);

/// E_{a,b}(z) for z <= 0. For a = 1 and integer b <= 1 the series sums to
/// z^{1-b} e^z, which is used directly. Otherwise series inside kMLSeriesRadius when it is cancellation
/// free, the asymptotic expansion when its error estimate is below 1e-16
/// relative, integral representation elsewhere; b >= a + 1 is brought below a + 1
/// by E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z before integrating.
double ml(const MLParams& params, double z);

/// Piecewise Chebyshev interpolant of v -> E_{a,b}(-v) on [0, inf).
///
/// Built from `ml` and evaluated in O(degree). The slots are [0,1] and the
/// dyadic intervals [2^k, 2^{k+1}]; each slot is fitted on first use (thread
/// safe) and bisected until its trailing Chebyshev coefficients are below
/// 2e-14 of the local scale. From the point where the asymptotic expansion is
/// accurate on, the expansion is used.
class MLTable {
public:
    MLTable(double a, double b);
    ~MLTable();
    MLTable(const MLTable&) = delete;
    MLTable& operator=(const MLTable&) = delete;

    double operator()(double v) const;
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double v_max() const noexcept { return v_max_; }

private:
    struct Segment {
        double lo, hi;
        std::vector<double> coeffs;
    };
    struct Slot {
        std::once_flag once;
        std::vector<Segment> segments;
    };
    void build_segment(std::vector<Segment>& out, double lo, double hi, int depth) const;

    double a_, b_;
    double v_max_;
    int slots_ = 0;
    std::unique_ptr<Slot[]> slot_;
};

/// Process-wide table for (a, b), created on first request and kept alive.
const MLTable& shared_ml_table(double a, double b);

}  // namespace fspde
