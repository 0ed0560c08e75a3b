#include "fspde/levy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fspde/errors.hpp"
#include "fspde/quadrature.hpp"

namespace fspde {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

enum Tag : std::uint64_t {
    kTagCount = 1,
    kTagTimes = 2,
    kTagSizes = 3,
    kTagWiener = 4,
    kTagBridge = 5,
};

constexpr double kGaussCut = 3.0;

double truncated_normal_mass() { return std::erf(kGaussCut / std::numbers::sqrt2); }

double sample_coordinate(Stream& rng, const LevySpec& spec) {
    switch (spec.law) {
        case JumpLaw::TwoPoint: return rng.uniform() < 0.5 ? -spec.sigma : spec.sigma;
        case JumpLaw::Uniform: return spec.sigma * (2.0 * rng.uniform() - 1.0);
        case JumpLaw::Gaussian:
            for (;;) {
                const double z = rng.normal();
                if (std::abs(z) <= kGaussCut) return spec.sigma * z;
            }
    }
    return 0.0;
}

// E|z_1|^q for one coordinate of the jump law.
double coordinate_moment(const LevySpec& spec, double q) {
    const double s = std::pow(spec.sigma, q);
    switch (spec.law) {
        case JumpLaw::TwoPoint: return s;
        case JumpLaw::Uniform: return s / (q + 1.0);
        case JumpLaw::Gaussian: {
            auto f = [q](double x) { return std::pow(x, q) * std::exp(-0.5 * x * x); };
            const double integral = quad::gauss_kronrod(f, 0.0, kGaussCut, 1e-15, 1e-14).value;
            return s * 2.0 * integral / (std::sqrt(2.0 * std::numbers::pi) * truncated_normal_mass());
        }
    }
    return 0.0;
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t copy, std::uint64_t tag) {
    std::uint64_t s = mix64(seed + kGolden);
    s = mix64(s ^ (copy * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL));
    s = mix64(s ^ (tag * 0x8CB92BA72F3D8DD7ULL + 0x14057B7EF767814FULL));
    state_ = s;
}

std::uint64_t Stream::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double Stream::uniform() {
    // 53 random bits, shifted off zero.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
}

JumpLaw parse_jump_law(const std::string& s) {
    if (s == "two_point") return JumpLaw::TwoPoint;
    if (s == "uniform") return JumpLaw::Uniform;
    if (s == "gaussian") return JumpLaw::Gaussian;
    throw ParameterError("unknown jump law '" + s + "' (expected two_point, uniform or gaussian)");
}

std::string to_string(JumpLaw law) {
    switch (law) {
        case JumpLaw::TwoPoint: return "two_point";
        case JumpLaw::Uniform: return "uniform";
        case JumpLaw::Gaussian: return "gaussian";
    }
    return "two_point";
}

void LevySpec::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("jump intensity must be positive");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("jump scale must be positive");
    if (d1 < 1) throw ParameterError("jump dimension d1 must be >= 1");
    if (copies < 1) throw ParameterError("number of noise copies must be >= 1");
}

double LevySpec::second_moment() const { return d1 * coordinate_moment(*this, 2.0); }

double JumpPath::value(double t, int r) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < times.size() && times[i] <= t; ++i)
        acc += sizes[i * static_cast<std::size_t>(d1) + r];
    return acc;
}

JumpPath sample_jump_path(const LevySpec& spec, double horizon, std::uint64_t seed, int copy,
                          std::optional<int> forced_count) {
    spec.validate();
    if (!(horizon > 0.0)) throw ParameterError("path horizon must be positive");
    JumpPath path;
    path.horizon = horizon;
    path.d1 = spec.d1;
    path.seed = seed;
    path.copy = copy;
    int count = 0;
    if (forced_count) {
        if (*forced_count < 0) throw ParameterError("forced jump count must be >= 0");
        count = *forced_count;
    } else {
        // Count exponential inter-arrival times inside (0, horizon].
        Stream rng(seed, static_cast<std::uint64_t>(copy), kTagCount);
        double t = 0.0;
        for (;;) {
            t += -std::log(rng.uniform()) / spec.lambda;
            if (t > horizon) break;
            ++count;
        }
    }
    Stream times(seed, static_cast<std::uint64_t>(copy), kTagTimes);
    path.times.resize(count);
    for (double& t : path.times) t = horizon * (1.0 - times.uniform());  // (0, horizon]
    std::sort(path.times.begin(), path.times.end());
    Stream sizes(seed, static_cast<std::uint64_t>(copy), kTagSizes);
    path.sizes.resize(static_cast<std::size_t>(count) * spec.d1);
    for (double& z : path.sizes) z = sample_coordinate(sizes, spec);
    return path;
}

double moment_mp(const LevySpec& spec, double p) {
    spec.validate();
    if (!(p >= 2.0)) throw ParameterError("moment order p must be >= 2");
    double e;  // E|z|^p under the jump law
    if (spec.d1 == 1) {
        e = coordinate_moment(spec, p);
    } else if (spec.law == JumpLaw::TwoPoint) {
        e = std::pow(spec.sigma * std::sqrt(static_cast<double>(spec.d1)), p);
    } else {
        const double half = 0.5 * p;
        if (half != std::floor(half))
            throw ParameterError("moment of order p for d1 > 1 needs an even integer p for this jump law");
        // (sum_r z_r^2)^{p/2} expanded over compositions of p/2 into d1 parts.
        const int m = static_cast<int>(half);
        std::vector<double> mom(m + 1);
        for (int i = 0; i <= m; ++i) mom[i] = coordinate_moment(spec, 2.0 * i);
        // dp[r][s] = sum over compositions of s among the first r coordinates
        std::vector<double> cur(m + 1, 0.0), next(m + 1, 0.0);
        std::vector<double> fact(m + 1, 1.0);
        for (int i = 1; i <= m; ++i) fact[i] = fact[i - 1] * i;
        cur[0] = 1.0;
        for (int r = 0; r < spec.d1; ++r) {
            std::fill(next.begin(), next.end(), 0.0);
            for (int s = 0; s <= m; ++s)
                for (int i = 0; s + i <= m; ++i) next[s + i] += cur[s] * mom[i] / fact[i];
            cur.swap(next);
        }
        e = fact[m] * cur[m];
    }
    return std::pow(spec.lambda * e, 1.0 / p);
}

double quad_variation(const StepIntegrand& h, const JumpPath& path, double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < path.count() && path.times[i] <= t; ++i) {
        double inc = 0.0;
        for (int r = 0; r < path.d1; ++r)
            inc += h(path.times[i], r) * path.sizes[i * static_cast<std::size_t>(path.d1) + r];
        acc += inc * inc;
    }
    return acc;
}

std::vector<double> stochastic_integral(const StepIntegrand& h, const JumpPath& path,
                                        std::span<const double> times) {
    std::vector<double> out(times.size(), 0.0);
    for (std::size_t q = 0; q < times.size(); ++q) {
        double acc = 0.0;
        for (std::size_t i = 0; i < path.count() && path.times[i] <= times[q]; ++i)
            for (int r = 0; r < path.d1; ++r)
                acc += h(path.times[i], r) * path.sizes[i * static_cast<std::size_t>(path.d1) + r];
        out[q] = acc;
    }
    return out;
}

WienerPath sample_wiener_path(const TimeGrid& grid, int copies, std::uint64_t seed, int base_steps) {
    grid.validate();
    if (copies < 1) throw ParameterError("number of Wiener copies must be >= 1");
    if (base_steps == 0) base_steps = grid.n;
    if (base_steps < grid.n || base_steps % grid.n != 0)
        throw SizeError("base resolution must be a multiple of the step count");
    const int group = base_steps / grid.n;
    const double sd = std::sqrt(grid.tmax / base_steps);
    WienerPath w;
    w.grid = grid;
    w.copies = copies;
    w.seed = seed;
    w.increments.assign(static_cast<std::size_t>(copies) * grid.n, 0.0);
    for (int k = 0; k < copies; ++k) {
        Stream rng(seed, static_cast<std::uint64_t>(k), kTagWiener);
        for (int i = 0; i < grid.n; ++i) {
            double acc = 0.0;
            for (int g = 0; g < group; ++g) acc += sd * rng.normal();
            w.increments[static_cast<std::size_t>(k) * grid.n + i] = acc;
        }
    }
    return w;
}

std::vector<double> wiener_bridge(const WienerPath& w, int k, int step, std::span<const double> fracs) {
    const double dt = w.grid.dt();
    const double total = w.increment(k, step);
    Stream rng(w.seed, static_cast<std::uint64_t>(k),
               kTagBridge + (static_cast<std::uint64_t>(step) << 8));
    std::vector<double> out(fracs.size());
    double f_prev = 0.0, w_prev = 0.0;
    for (std::size_t i = 0; i < fracs.size(); ++i) {
        const double f = fracs[i];
        if (!(f > f_prev && f < 1.0)) throw SizeError("bridge fractions must increase inside (0,1)");
        const double rem = 1.0 - f_prev;
        const double mean = w_prev + (f - f_prev) / rem * (total - w_prev);
        const double var = (f - f_prev) * (1.0 - f) / rem * dt;
        w_prev = mean + std::sqrt(var) * rng.normal();
        f_prev = f;
        out[i] = w_prev;
    }
    return out;
}

std::vector<double> stochastic_integral(const std::function<double(double)>& h, const WienerPath& w,
                                        int k) {
    std::vector<double> out(w.grid.n + 1, 0.0);
    for (int i = 0; i < w.grid.n; ++i) out[i + 1] = out[i] + h(w.grid.node(i)) * w.increment(k, i);
    return out;
}

int TrigBasis::capacity(const TorusGrid& grid) {
    int c = 1;
    for (int i = 0; i < grid.d; ++i) c *= grid.n - 1;
    return c;
}

TrigBasis::TrigBasis(const TorusGrid& grid, int count) {
    grid.validate();
    if (count < 1 || count > capacity(grid)) {
        std::ostringstream os;
        os << "basis size " << count << " outside [1, " << capacity(grid) << "] for this grid";
        throw SizeError(os.str());
    }
    const int h = grid.n / 2;
    // Half-space wave vectors with |m_i| < N/2: first nonzero component positive.
    std::vector<std::vector<int>> half;
    const int side = grid.n - 1;
    std::vector<int> m(grid.d);
    long combos = 1;
    for (int i = 0; i < grid.d; ++i) combos *= side;
    for (long c = 0; c < combos; ++c) {
        long r = c;
        for (int ax = grid.d - 1; ax >= 0; --ax) {
            m[ax] = static_cast<int>(r % side) - (h - 1);
            r /= side;
        }
        int first = 0;
        for (int v : m)
            if (v != 0) {
                first = v;
                break;
            }
        if (first > 0) half.push_back(m);
    }
    auto sq = [](const std::vector<int>& v) {
        long s = 0;
        for (int x : v) s += static_cast<long>(x) * x;
        return s;
    };
    std::stable_sort(half.begin(), half.end(), [&](const auto& a, const auto& b) {
        const long sa = sq(a), sb = sq(b);
        if (sa != sb) return sa < sb;
        return a < b;
    });
    const double amp0 = std::pow(grid.length, -0.5 * grid.d);
    const double amp = std::numbers::sqrt2 * amp0;
    const double kw = 2.0 * std::numbers::pi / grid.length;
    const std::size_t total = grid.size();
    std::vector<double> x(grid.d);
    fields_.emplace_back(grid, std::vector<double>(total, amp0));
    waves_.emplace_back(grid.d, 0);
    sine_.push_back(false);
    for (std::size_t q = 0; static_cast<int>(fields_.size()) < count; ++q) {
        const auto& wv = half[q];
        for (int s = 0; s < 2 && static_cast<int>(fields_.size()) < count; ++s) {
            std::vector<double> vals(total);
            for (std::size_t i = 0; i < total; ++i) {
                grid.position(i, x.data());
                double ph = 0.0;
                for (int ax = 0; ax < grid.d; ++ax) ph += kw * wv[ax] * x[ax];
                vals[i] = amp * (s == 0 ? std::cos(ph) : std::sin(ph));
            }
            fields_.emplace_back(grid, std::move(vals));
            waves_.push_back(wv);
            sine_.push_back(s == 1);
        }
    }
}

WhiteNoise::WhiteNoise(const LevySpec& spec, const TorusGrid& grid, int count, double horizon,
                       std::uint64_t seed)
    : basis_(grid, count) {
    spec.validate();
    if (spec.d1 != 1) throw ParameterError("white noise expansion uses scalar jumps (d1 = 1)");
    paths_.reserve(count);
    for (int k = 0; k < count; ++k) paths_.push_back(sample_jump_path(spec, horizon, seed, k));
}

WhiteNoise::WhiteNoise(const TorusGrid& grid, int count, std::vector<JumpPath> paths)
    : basis_(grid, count), paths_(std::move(paths)) {
    if (static_cast<int>(paths_.size()) != count) throw SizeError("one jump path per basis function required");
}

double WhiteNoise::integrate(const std::function<Field(double)>& x_of_s, double t) const {
    const double cell = basis_[0].grid.cell_volume();
    double acc = 0.0;
    for (int k = 0; k < basis_.size(); ++k) {
        const auto& path = paths_[k];
        for (std::size_t i = 0; i < path.count() && path.times[i] <= t; ++i) {
            const Field xf = x_of_s(path.times[i]);
            const auto& eta = basis_[k].values;
            double proj = 0.0;
            for (std::size_t q = 0; q < eta.size(); ++q) proj += xf.values[q] * eta[q];
            acc += proj * cell * path.sizes[i];
        }
    }
    return acc;
}

}  // namespace fspde
