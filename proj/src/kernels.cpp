#include "fspde/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "fspde/errors.hpp"
#include "fspde/parallel.hpp"
#include "fspde/specfun.hpp"

namespace fspde {

void KernelSymbol::validate() const {
    std::ostringstream os;
    if (!(alpha > 0.0 && alpha < 2.0)) {
        os << "alpha=" << alpha << " outside (0,2)";
        throw ParameterError(os.str());
    }
    if (kind == KernelKind::q && !(beta < alpha + 0.5)) {
        os << "kernel q needs beta < alpha + 1/2 (alpha=" << alpha << ", beta=" << beta << ")";
        throw ParameterError(os.str());
    }
    if (kind == KernelKind::P && !(alpha > 1.0)) {
        os << "kernel P needs alpha > 1 (alpha=" << alpha << ")";
        throw ParameterError(os.str());
    }
    if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("kernel time must be positive");
    if (sigma != 0 && sigma != 1) throw ParameterError("time derivative order must be 0 or 1");
    if (!(gamma >= 0.0)) throw ParameterError("multiplier order gamma must be >= 0");
}

double KernelSymbol::effective_beta() const noexcept {
    switch (kind) {
        case KernelKind::p: return alpha;
        case KernelKind::q: return beta;
        case KernelKind::P: return alpha - 1.0;
    }
    return alpha;
}

double KernelSymbol::scaling_power(int d) const noexcept {
    return -sigma - alpha * (d + gamma) / 2.0 + alpha - effective_beta();
}

KernelKind parse_kernel_kind(const std::string& s) {
    if (s == "p") return KernelKind::p;
    if (s == "q") return KernelKind::q;
    if (s == "P") return KernelKind::P;
    throw ParameterError("unknown kernel kind '" + s + "' (expected p, q or P)");
}

double symbol_value(const KernelSymbol& sym, double xi_sq) {
    sym.validate();
    if (!(xi_sq >= 0.0)) throw DomainError("|xi|^2 must be non-negative");
    double mult = 1.0;
    if (sym.gamma > 0.0) {
        if (xi_sq == 0.0) return 0.0;
        mult = std::pow(xi_sq, 0.5 * sym.gamma);
    }
    const double ta = std::pow(sym.t, sym.alpha);
    const double e = ml({sym.alpha, sym.ml_b()}, -ta * xi_sq);
    return mult * std::pow(sym.t, sym.time_power()) * e;
}

std::vector<double> symbol_on_grid(const KernelSymbol& sym, const TorusGrid& grid) {
    sym.validate();
    grid.validate();
    const std::size_t total = grid.size();
    // Distinct integer |m|^2, evaluated once each.
    const long max_sq = static_cast<long>(grid.d) * (grid.n / 2) * (grid.n / 2);
    std::vector<char> present(max_sq + 1, 0);
    for (std::size_t i = 0; i < total; ++i) present[grid.wave_sq(i)] = 1;
    std::vector<long> keys;
    for (long s = 0; s <= max_sq; ++s)
        if (present[s]) keys.push_back(s);
    std::vector<double> radial(max_sq + 1, 0.0);
    const double k = 2.0 * std::numbers::pi / grid.length;
    parallel_for(keys.size(), [&](std::size_t i) {
        radial[keys[i]] = symbol_value(sym, k * k * static_cast<double>(keys[i]));
    });
    std::vector<double> out(total);
    for (std::size_t i = 0; i < total; ++i) out[i] = radial[grid.wave_sq(i)];
    return out;
}

int required_modes(const KernelSymbol& sym, double length, double tol) {
    for (int n = 8; n <= (1 << 24); n *= 2) {
        const double nyq = std::numbers::pi * n / length;
        if (std::abs(symbol_value(sym, nyq * nyq)) < tol) return n;
    }
    return 0;
}

Field kernel_field(const KernelSymbol& sym, const TorusGrid& grid, double alias_tol) {
    sym.validate();
    grid.validate();
    if (std::isfinite(alias_tol)) {
        const double nyq = grid.nyquist();
        const double at_nyq = std::abs(symbol_value(sym, nyq * nyq));
        if (!(at_nyq < alias_tol)) {
            const int need = required_modes(sym, grid.length, alias_tol);
            std::ostringstream os;
            os << "grid with N=" << grid.n << " does not resolve the kernel: |symbol| at Nyquist is "
               << at_nyq << " >= " << alias_tol << "; ";
            if (need > 0)
                os << "N=" << need << " points per axis required";
            else
                os << "no N up to 2^24 points per axis suffices";
            throw ResolutionError(os.str(), need);
        }
    }
    const auto sym_grid = symbol_on_grid(sym, grid);
    std::vector<cplx> spec(sym_grid.begin(), sym_grid.end());
    auto values = inverse_fft_real(grid, spec);
    // (1/L^d) sum_xi = (N^d / L^d) * inverse DFT
    const double scale = static_cast<double>(grid.size()) / grid.volume();
    for (double& v : values) v *= scale;
    return {grid, std::move(values)};
}

double kernel_value(const KernelSymbol& sym, const TorusGrid& grid, const double* x) {
    const auto sym_grid = symbol_on_grid(sym, grid);
    std::vector<cplx> spec(sym_grid.begin(), sym_grid.end());
    return trig_interpolate(grid, spec, x) * static_cast<double>(grid.size()) / grid.volume();
}

Field spectral_multiplier(const Field& f, MultiplierKind kind, double gamma) {
    const TorusGrid& g = f.grid;
    auto spec = forward_fft(g, f.values);
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double xs = g.xi_sq(i);
        double m;
        if (kind == MultiplierKind::Bessel) {
            m = std::pow(1.0 + xs, 0.5 * gamma);
        } else if (gamma == 0.0) {
            m = 1.0;
        } else {
            m = xs > 0.0 ? std::pow(xs, 0.5 * gamma) : 0.0;
        }
        spec[i] *= m;
    }
    return {g, inverse_fft_real(g, spec)};
}

}  // namespace fspde
