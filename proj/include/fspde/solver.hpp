#pragma once

// Mild solutions of
//   d^alpha_t u = Delta u + f + d^{beta1}_t sum_k int g^k dW^k + d^{beta2}_t sum_k int h^k . dZ^k
// on a torus, mode by mode in Fourier space, with Picard iteration for
// pointwise Lipschitz nonlinearities.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fspde/fraccalc.hpp"
#include "fspde/levy.hpp"
#include "fspde/params.hpp"
#include "fspde/torus.hpp"

namespace fspde {

/// Explicit forcing: writes f(t, x) at every grid node into `out`.
using ForcingFn = std::function<void(double t, std::span<double> out)>;
/// Scalar function of time.
using TimeFn = std::function<double(double t)>;

/// Pointwise map u -> F(u) with its declared Lipschitz constant.
struct SemilinearMap {
    std::function<double(double)> map;
    double lipschitz = 0.0;

    explicit operator bool() const noexcept { return static_cast<bool>(map); }
};

/// Data of one problem. Fields with empty `values` count as zero.
///
/// Noise coefficients are g^k(t, x, u) = g_time(t) * g_u(u) * g[k](x) and
/// h^{rk}(t, x, u) = h_time(t) * h_u(u) * h[k * d1 + r](x); unset factors are 1.
/// Time factors are sampled at the left end of each step.
struct ProblemData {
    Field u0;
    Field v0;  ///< used when alpha > 1
    ForcingFn f;
    SemilinearMap f_u;
    std::vector<Field> g;
    TimeFn g_time;
    SemilinearMap g_u;
    std::vector<Field> h;
    TimeFn h_time;
    SemilinearMap h_u;
    int d1 = 1;

    bool has_maps() const noexcept { return f_u || g_u || h_u; }
};

/// One draw of the driving noises.
struct NoiseRealization {
    std::optional<WienerPath> wiener;
    std::vector<JumpPath> jumps;  ///< one path per copy k
};

struct SolveOptions {
    double picard_tol = 1e-8;
    int max_iter = 50;
};

struct SolutionField {
    TorusGrid grid;
    std::vector<double> times;
    std::vector<double> values;  ///< times.size() * grid.size(), time-major
    ProblemParams params;
    std::vector<std::uint64_t> seeds;
    std::string kind;
    int iterations = 0;
    bool converged = true;
    std::vector<double> increments;  ///< discrete L_p(T) norms of u^{(m+1)} - u^{(m)}
    std::vector<double> ratios;      ///< increments[m] / increments[m-1]
    std::optional<WhiteNoiseGate> gate;

    std::span<const double> slice(std::size_t i) const;
    Field at(std::size_t i) const;
};

/// E_{alpha,1} u0 + 1_{alpha>1} t E_{alpha,2} v0 + int q_{alpha,1}(t-s) f(s) ds per mode,
/// the forcing term by exact product integration of the piecewise-linear f.
SolutionField deterministic_propagate(const ProblemData& data, const ProblemParams& params,
                                      const TimeGrid& time);

/// sum_k sum_{tau_i <= t} q_{alpha,beta2}(t - tau_i) * h^k(tau_i-) dZ^k_i, exact.
/// For beta2 > alpha the kernel is infinite at lag 0, so a jump landing exactly on
/// an output time contributes only to later times.
SolutionField stochastic_convolution_jump(const std::vector<Field>& h, int d1, double beta2,
                                          const std::vector<JumpPath>& paths,
                                          const ProblemParams& params, const TimeGrid& time);

/// sum_k sum_steps q_{alpha,beta1}(t - s_j) g^k(s_j) dW^k_j with the kernel at the left point.
SolutionField stochastic_convolution_wiener(const std::vector<Field>& g, double beta1,
                                            const WienerPath& w, const ProblemParams& params,
                                            const TimeGrid& time);

/// Superposition of the three parts above for data without nonlinear maps.
SolutionField solve_linear(const ProblemData& data, const ProblemParams& params, const TimeGrid& time,
                           const NoiseRealization& noise);

/// Picard iteration u^{(m+1)} = R u^{(m)} from the linear part u^{(0)}. Stops when the
/// discrete L_p(T) increment drops below picard_tol; `converged` is false when
/// max_iter is reached first, with the increment and ratio history kept.
SolutionField solve_semilinear(const ProblemData& data, const ProblemParams& params,
                               const TimeGrid& time, const NoiseRealization& noise,
                               const SolveOptions& options);

/// White-noise equation with g^k(u) = h(u) eta^k(x): K basis functions paired with
/// independent scalar jump paths. Rejects d >= d0 before doing any work.
SolutionField solve_white_noise(const ProblemData& data, const ProblemParams& params,
                                const TorusGrid& grid, int basis_size, const LevySpec& spec,
                                const TimeGrid& time, std::uint64_t seed, const SolveOptions& options);

/// Discrete L_p(0,T; L_p) norm of a solution (or of a difference), right-endpoint rule.
double space_time_lp(const SolutionField& u, double p);

}  // namespace fspde
