#pragma once

// Numerical studies behind the quantitative estimates: dyadic kernel
// envelopes, Besov convolution bounds, maximal regularity, the scaling
// exponent of the noise term and the Gronwall-type a priori bound.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fspde/kernels.hpp"
#include "fspde/levy.hpp"
#include "fspde/params.hpp"
#include "json.hpp"

namespace fspde {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Band envelopes

struct EnvelopeConfig {
    KernelKind kind = KernelKind::p;
    double alpha = 1.4;
    double beta = 1.0;   ///< q only
    double p = 2.0;      ///< q only
    double eps = 0.3;    ///< q only
    double delta = 0.2;  ///< q and P
    int j_min = 1;
    int j_max = 6;
    int t_count = 20;
    double t_min = 1e-6;
    double t_max = 1.0;
    int n = 4096;
    double length = 64.0;
    double slack = 2.0;  ///< C = slack * largest calibration ratio

    /// ParameterError naming the violated constraint on (alpha, beta, p, eps, delta).
    void validate() const;
};

struct EnvelopePoint {
    int j = 0;
    double t = 0.0;
    double norm = 0.0;      ///< ||K_j(t)||_{L_1}
    double envelope = 0.0;  ///< envelope without its constant
    bool calibration = false;
};

struct EnvelopeReport {
    std::string claim;
    EnvelopeConfig config;
    double fitted_c = 0.0;
    double max_ratio_calibration = 0.0;
    double max_ratio_held_out = 0.0;
    int calibration = 0;
    int held_out = 0;
    int violations = 0;
    /// Slope of log(norm/envelope) against log(2^{2j/alpha} t) over points with
    /// 2^{2j/alpha} t >= 10. A bounded envelope ratio needs this to be <= 0.
    double tail_slope = 0.0;
    std::vector<EnvelopePoint> points;

    bool pass() const noexcept { return violations == 0; }
};

/// Envelope shape of the band-j kernel at time t (constant omitted).
double band_envelope(const EnvelopeConfig& cfg, int j, double t);

/// L_1 norm of the band-j part of the kernel on the configured torus.
double band_kernel_l1(const EnvelopeConfig& cfg, int j, double t);

/// Fits C on a checkerboard half of the (j, t) grid and counts held-out points
/// above C * envelope.
EnvelopeReport verify_band_envelopes(const EnvelopeConfig& cfg);

// ---------------------------------------------------------------------------
// Ratio studies

struct MeshLevel {
    int n = 64;      ///< points per axis
    int steps = 64;  ///< time steps
};

struct LevelResult {
    MeshLevel level;
    double ratio = 0.0;
    double half_width = 0.0;  ///< 95% half-width of the ratio, 0 when deterministic
    double lhs = 0.0;
    double rhs = 0.0;
};

struct RatioStudy {
    std::string claim;
    json params;
    std::vector<LevelResult> levels;
    int samples = 0;
    double growth_limit = 0.25;

    /// Largest relative increase of the ratio between consecutive levels.
    double growth() const;
    bool pass() const;
};

struct BesovConfig {
    KernelKind kind = KernelKind::q;
    double alpha = 0.8;
    double beta = 0.9;  ///< q only
    double p = 2.0;
    double eps = 0.3;    ///< q only
    double delta = 0.1;  ///< q only, for the admissibility audit
    double horizon = 1.0;
    double length = 6.283185307179586;
    int max_wave = 12;  ///< test functions use integer wave numbers below this
    int samples = 50;
    std::uint64_t seed = 1;
    std::vector<MeshLevel> levels{{64, 64}, {128, 128}};

    void validate() const;
    /// Besov index on the right-hand side.
    double rhs_index() const;
    /// Order of (-Delta)^{c/2} applied to the kernel on the left-hand side.
    double lhs_order() const;
};

/// Random test function: Gaussian coefficients with a random power-law
/// profile |m|^s, s uniform in [-2, 2], on integer wave numbers |m| < max_wave.
Field besov_test_function(const TorusGrid& grid, int max_wave, std::uint64_t seed, int index);

/// Ratio LHS/RHS for each test function and level; the study keeps the maximum.
RatioStudy verify_besov_convolution(const BesovConfig& cfg);

struct MaxRegConfig {
    ProblemParams params{1.0, 1.0, 1.0, 2.0, 0.0, 0.01};
    double horizon = 1.0;
    double length = 6.283185307179586;
    int samples = 200;
    std::uint64_t seed = 7;
    LevySpec levy{5.0, JumpLaw::TwoPoint, 1.0, 1, 1};
    int wiener_copies = 1;
    bool forcing = true;
    bool wiener = true;
    bool jumps = true;
    std::vector<MeshLevel> levels{{64, 64}, {128, 128}};

    void validate() const;
};

/// ||Delta u||_{L_p} against ||f|| + ||(-Delta)^{c0/2} g|| + ||(-Delta)^{c0bar/2} h||,
/// all in L_p(Omega x (0,T) x torus), zero initial data, sample averages over seeds.
RatioStudy verify_max_regularity(const MaxRegConfig& cfg);

// ---------------------------------------------------------------------------
// Scaling criticality

struct ScalingConfig {
    ProblemParams params{1.0, 1.0, 1.0, 2.0, 0.0, 0.01};
    std::vector<double> scales{0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> offsets{-0.3, 0.0, 0.3};  ///< e = c0 + offset
    int n = 64;
    int steps = 64;
    double horizon = 1.0;
    double length = 6.283185307179586;
    int samples = 4;
    std::uint64_t seed = 11;
    double flat_tol = 0.05;
    double steep_min = 0.2;

    void validate() const;
};

struct ScalingReport {
    ScalingConfig config;
    double c0 = 0.0;
    std::vector<double> exponents;
    std::vector<std::vector<double>> ratios;  ///< [exponent][scale]
    std::vector<double> slopes;
    bool pass = false;
};

/// R(c; e) = ||Delta u_c|| / ||(-Delta)^{e/2} g_c|| on the torus of length L/c over
/// [0, c^{-2/alpha} T] with g_c(t,x) = c^{2-(2 beta1-1)/alpha} g(c^{2/alpha} t, c x)
/// and W_c(t) = c^{-1/alpha} W(c^{2/alpha} t); slope of log R against log c.
ScalingReport verify_scaling_criticality(const ScalingConfig& cfg);

// ---------------------------------------------------------------------------
// Gronwall bound

struct GronwallConfig {
    ProblemParams params{1.0, 1.0, 1.0, 2.0, 0.0, 0.01};
    double horizon = 1.0;
    double length = 6.283185307179586;
    int n = 64;
    int steps = 64;
    int samples = 50;
    std::uint64_t seed = 13;
    LevySpec levy{5.0, JumpLaw::TwoPoint, 1.0, 1, 1};
    bool initial = true;
    bool forcing = true;
    bool wiener = true;
    bool jumps = true;
    double slack = 2.0;

    void validate() const;
};

struct GronwallReport {
    GronwallConfig config;
    double theta = 0.0;
    std::vector<double> times;
    std::vector<double> lhs;
    std::vector<double> rhs;
    double fitted_c = 0.0;
    int calibration = 0;
    int held_out = 0;
    int violations = 0;

    bool pass() const noexcept { return violations == 0; }
};

/// E int_0^t ||u||^p_{H^gamma_p} against
/// int_0^t (t-s)^{theta-1} (||f||^p + ||g||^p + ||h||^p)_{H^gamma_p(s)} ds
/// + E||u0||^p_{H^gamma_p} + 1_{alpha>1} E||v0||^p_{H^gamma_p}, at every time node.
GronwallReport verify_gronwall(const GronwallConfig& cfg);

// ---------------------------------------------------------------------------
// Fractional calculus refinement

struct RefinementResult {
    std::vector<int> steps;
    std::vector<double> errors;
    std::vector<double> ratios;  ///< errors[i] / errors[i+1]
};

/// Exact I^g of the polynomial sum_k poly[k] t^k at t.
double poly_frac_integral(std::span<const double> poly, double g, double t);

/// Max-norm error of I^a I^b phi against the exact I^{a+b} phi for a polynomial
/// phi, on grids with base, 2 base, ... steps, over nodes t >= from * tmax.
/// With from = 0 and phi(0) != 0 the first node dominates and the order is a + b.
RefinementResult semigroup_refinement(std::span<const double> poly, double a, double b, double tmax,
                                      int base, int levels, double from = 0.25);
/// Max-norm error of D^a I^a phi - phi on the same grids, over t >= from * tmax.
/// For phi(0) != 0 the error at a fixed node index near 0 does not shrink.
RefinementResult inversion_refinement(std::span<const double> poly, double a, double tmax, int base,
                                      int levels, double from = 0.25);

// ---------------------------------------------------------------------------
// Reports

json to_json(const EnvelopeReport& r);
json to_json(const RatioStudy& r);
json to_json(const ScalingReport& r);
json to_json(const GronwallReport& r);
json to_json(const DerivedExponents& e);
json to_json(const ProblemParams& p);

}  // namespace fspde
