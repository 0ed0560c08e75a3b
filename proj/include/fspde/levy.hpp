#pragma once

// Finite-activity, mean-zero compound Poisson drivers, Wiener increments and
// the trigonometric white-noise expansion.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fspde/fraccalc.hpp"
#include "fspde/torus.hpp"

namespace fspde {

/// Counter-based generator: SplitMix64 over a key derived from
/// (master seed, copy index, purpose tag). Streams with different keys are
/// independent for all practical purposes and need no shared state.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t copy, std::uint64_t tag);

    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Standard normal (Box-Muller, both variates used).
    double normal();

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

enum class JumpLaw { TwoPoint, Uniform, Gaussian };
JumpLaw parse_jump_law(const std::string& s);
std::string to_string(JumpLaw law);

struct LevySpec {
    double lambda = 1.0;  ///< jump intensity
    JumpLaw law = JumpLaw::TwoPoint;
    double sigma = 1.0;   ///< jump scale: +-sigma, [-sigma, sigma], or Gaussian sd truncated at 3 sigma
    int d1 = 1;           ///< jump dimension
    int copies = 1;       ///< number K of independent copies Z^k

    void validate() const;
    /// E|z|^2 under the jump law (not scaled by lambda).
    double second_moment() const;
};

struct JumpPath {
    double horizon = 0.0;
    int d1 = 1;
    std::uint64_t seed = 0;
    int copy = 0;
    std::vector<double> times;  ///< strictly increasing in (0, horizon]
    std::vector<double> sizes;  ///< times.size() * d1, jump vectors row by row

    std::size_t count() const noexcept { return times.size(); }
    /// Z_t coordinate r (cadlag: includes a jump at exactly t).
    double value(double t, int r = 0) const;
};

/// Poisson(lambda T) jumps with sorted uniform times and i.i.d. sizes. With
/// `forced_count` the number of jumps is fixed instead of drawn.
JumpPath sample_jump_path(const LevySpec& spec, double horizon, std::uint64_t seed, int copy = 0,
                          std::optional<int> forced_count = std::nullopt);

/// m_p = (int |z|^p nu(dz))^{1/p} with nu = lambda * (jump law).
double moment_mp(const LevySpec& spec, double p);

/// Left-continuous step integrand: h(s, r) is the coefficient of dZ^r at time s.
using StepIntegrand = std::function<double(double s, int r)>;

/// [M]_t = sum_{s_i <= t} (sum_r h(s_i-, r) dZ^r_i)^2.
double quad_variation(const StepIntegrand& h, const JumpPath& path, double t);

/// int_0^t h dZ at each requested time (exact finite sum over jumps).
std::vector<double> stochastic_integral(const StepIntegrand& h, const JumpPath& path,
                                        std::span<const double> times);

struct WienerPath {
    TimeGrid grid;
    int copies = 1;
    std::uint64_t seed = 0;
    std::vector<double> increments;  ///< copies * grid.n, copy-major

    double increment(int k, int step) const { return increments[static_cast<std::size_t>(k) * grid.n + step]; }
};

/// Independent N(0, dt) increments. The path is drawn at `base_steps` (a
/// multiple of grid.n, default grid.n) and summed down, so coarser grids of
/// one seed see the same Brownian motion.
WienerPath sample_wiener_path(const TimeGrid& grid, int copies, std::uint64_t seed, int base_steps = 0);

/// W(t_step + f dt) - W(t_step) at increasing fractions f in (0, 1), drawn
/// from the Brownian bridge pinned to the step increment. Deterministic in
/// (seed, copy, step).
std::vector<double> wiener_bridge(const WienerPath& w, int k, int step, std::span<const double> fracs);

/// int_0^{t_i} h dW^k at every node, h evaluated at the left end of each step.
std::vector<double> stochastic_integral(const std::function<double(double)>& h, const WienerPath& w, int k);

/// Real orthonormal trigonometric basis on the torus: eta^0 = L^{-d/2}, then
/// sqrt(2) L^{-d/2} cos(xi.x), sqrt(2) L^{-d/2} sin(xi.x) over half-space wave
/// vectors ordered by |m|^2. Nyquist wave numbers are excluded.
class TrigBasis {
public:
    TrigBasis(const TorusGrid& grid, int count);
    int size() const noexcept { return static_cast<int>(fields_.size()); }
    const Field& operator[](int k) const { return fields_.at(k); }
    /// Integer wave vector of basis function k and whether it is a sine.
    const std::vector<int>& wave(int k) const { return waves_.at(k); }
    bool is_sine(int k) const { return sine_.at(k); }
    /// Largest count a grid supports.
    static int capacity(const TorusGrid& grid);

private:
    std::vector<Field> fields_;
    std::vector<std::vector<int>> waves_;
    std::vector<bool> sine_;
};

/// Basis functions paired with independent jump paths Z^k.
class WhiteNoise {
public:
    WhiteNoise(const LevySpec& spec, const TorusGrid& grid, int count, double horizon,
               std::uint64_t seed);
    WhiteNoise(const TorusGrid& grid, int count, std::vector<JumpPath> paths);

    const TrigBasis& basis() const noexcept { return basis_; }
    const std::vector<JumpPath>& paths() const noexcept { return paths_; }

    /// sum_k int_0^t (int X(s-, x) eta^k(x) dx) dZ^k_s for X given as a field-valued
    /// function of time.
    double integrate(const std::function<Field(double)>& x_of_s, double t) const;

private:
    TrigBasis basis_;
    std::vector<JumpPath> paths_;
};

}  // namespace fspde
