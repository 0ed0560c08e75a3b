#include "fspde/torus.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <tuple>

#include "fspde/errors.hpp"

namespace fspde {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::atomic<int> g_threads{0};

// FFTW planning is not thread safe; execution with the new-array interface is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct PlanKey {
    int d, n, sign;
    bool operator<(const PlanKey& o) const {
        return std::tie(d, n, sign) < std::tie(o.d, o.n, o.sign);
    }
};

fftw_plan get_plan(const TorusGrid& g, int sign) {
    static std::map<PlanKey, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    const PlanKey key{g.d, g.n, sign};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    int dims[3] = {g.n, g.n, g.n};
    const std::size_t total = g.size();
    auto* buf = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft(g.d, dims, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
    fftw_free(buf);
    cache.emplace(key, plan);
    return plan;
}

}  // namespace

void TorusGrid::validate() const {
    if (d < 1 || d > 3) throw SizeError("torus dimension must be 1, 2 or 3");
    if (n < 8 || n % 2 != 0) {
        std::ostringstream os;
        os << "points per axis must be even and >= 8 (got " << n << ")";
        throw SizeError(os.str());
    }
    if (!(length > 0.0) || !std::isfinite(length)) throw SizeError("torus period must be positive");
}

std::size_t TorusGrid::size() const noexcept {
    std::size_t s = 1;
    for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(n);
    return s;
}

double TorusGrid::cell_volume() const noexcept { return std::pow(dx(), d); }
double TorusGrid::volume() const noexcept { return std::pow(length, d); }
double TorusGrid::nyquist() const noexcept { return std::numbers::pi * n / length; }

void TorusGrid::wave_vector(std::size_t flat, int* out) const noexcept {
    for (int ax = d - 1; ax >= 0; --ax) {
        out[ax] = wave_number(static_cast<int>(flat % n));
        flat /= n;
    }
}

long TorusGrid::wave_sq(std::size_t flat) const noexcept {
    long s = 0;
    for (int ax = 0; ax < d; ++ax) {
        const long m = wave_number(static_cast<int>(flat % n));
        s += m * m;
        flat /= n;
    }
    return s;
}

double TorusGrid::xi_sq(std::size_t flat) const noexcept {
    const double k = kTwoPi / length;
    return k * k * static_cast<double>(wave_sq(flat));
}

void TorusGrid::position(std::size_t flat, double* x) const noexcept {
    for (int ax = d - 1; ax >= 0; --ax) {
        x[ax] = static_cast<double>(flat % n) * dx();
        flat /= n;
    }
}

Field::Field(const TorusGrid& g) : grid(g), values(g.size(), 0.0) { grid.validate(); }

Field::Field(const TorusGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    grid.validate();
    if (values.size() != grid.size()) throw SizeError("field length does not match the grid");
}

void fft_inplace(const TorusGrid& grid, std::span<cplx> data, int sign) {
    if (data.size() != grid.size()) throw SizeError("FFT buffer does not match the grid");
    fftw_plan plan = get_plan(grid, sign);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
}

std::vector<cplx> forward_fft(const TorusGrid& grid, std::span<const double> values) {
    if (values.size() != grid.size()) throw SizeError("field length does not match the grid");
    std::vector<cplx> buf(values.begin(), values.end());
    fft_inplace(grid, buf, -1);
    return buf;
}

std::vector<double> inverse_fft_real(const TorusGrid& grid, std::span<const cplx> spectrum) {
    if (spectrum.size() != grid.size()) throw SizeError("spectrum length does not match the grid");
    std::vector<cplx> buf(spectrum.begin(), spectrum.end());
    fft_inplace(grid, buf, +1);
    const double scale = 1.0 / static_cast<double>(grid.size());
    std::vector<double> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real() * scale;
    return out;
}

double trig_interpolate(const TorusGrid& grid, std::span<const cplx> spectrum, const double* x) {
    if (spectrum.size() != grid.size()) throw SizeError("spectrum length does not match the grid");
    const double k = kTwoPi / grid.length;
    const int n = grid.n;
    // Per-axis phase factors; Nyquist index uses cos only (average of +-N/2).
    std::vector<cplx> phase(static_cast<std::size_t>(grid.d) * n);
    for (int ax = 0; ax < grid.d; ++ax) {
        for (int m = 0; m < n; ++m) {
            const int w = grid.wave_number(m);
            cplx e;
            if (m == n / 2)
                e = cplx(std::cos(k * (n / 2) * x[ax]), 0.0);
            else
                e = std::polar(1.0, k * w * x[ax]);
            phase[static_cast<std::size_t>(ax) * n + m] = e;
        }
    }
    double acc = 0.0;
    const std::size_t total = grid.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t f = flat;
        cplx e(1.0, 0.0);
        for (int ax = grid.d - 1; ax >= 0; --ax) {
            e *= phase[static_cast<std::size_t>(ax) * n + f % n];
            f /= n;
        }
        acc += (spectrum[flat] * e).real();
    }
    return acc / static_cast<double>(total);
}

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw DomainError("L_p norm requires p >= 1");
    double acc = 0.0;
    if (p == 2.0) {
        for (double v : f.values) acc += v * v;
    } else {
        for (double v : f.values) acc += std::pow(std::abs(v), p);
    }
    return std::pow(acc * f.grid.cell_volume(), 1.0 / p);
}

void set_thread_count(int n) { g_threads.store(std::max(0, n)); }

int thread_count() {
    const int n = g_threads.load();
    if (n > 0) return n;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace fspde
