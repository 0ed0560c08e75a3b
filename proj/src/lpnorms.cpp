#include "fspde/lpnorms.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "fspde/errors.hpp"
#include "fspde/kernels.hpp"

namespace fspde {

double lp_bump(double r) {
    if (!(r > 0.5 && r < 2.0)) return 0.0;
    const double s = std::log2(r);
    return std::exp(-1.0 / (1.0 - s * s));
}

double lp_window(double r) {
    if (!(r > 0.0)) return 0.0;
    const double num = lp_bump(r);
    if (num == 0.0) return 0.0;
    const double l = std::log2(r);
    const long k0 = static_cast<long>(std::floor(l));
    double den = 0.0;
    for (long k = k0 - 1; k <= k0 + 2; ++k) den += lp_bump(std::ldexp(r, static_cast<int>(-k)));
    return num / den;
}

DyadicPartition::DyadicPartition(const TorusGrid& grid) : grid_(grid) {
    grid_.validate();
    const std::size_t total = grid_.size();
    double max_xi = 0.0;
    std::vector<double> r(total);
    for (std::size_t i = 0; i < total; ++i) {
        r[i] = std::sqrt(grid_.xi_sq(i));
        max_xi = std::max(max_xi, r[i]);
    }
    nyquist_band_ = static_cast<int>(std::floor(std::log2(grid_.nyquist())));
    // Band j reaches down to 2^{j-1}; stop once that exceeds every grid frequency.
    int top = 1;
    while (std::ldexp(1.0, top) < max_xi) ++top;
    if (top < 2) {
        std::ostringstream os;
        os << "grid frequencies up to " << max_xi << " carry fewer than 3 dyadic bands";
        throw ResolutionError(os.str(), 0);
    }
    windows_.assign(top + 1, std::vector<double>(total, 0.0));
    for (std::size_t i = 0; i < total; ++i) {
        double high = 0.0;
        for (int j = 1; j <= top; ++j) {
            const double w = lp_window(std::ldexp(r[i], -j));
            windows_[j][i] = w;
            high += w;
        }
        windows_[0][i] = 1.0 - high;
    }
}

const std::vector<double>& DyadicPartition::window(int j) const {
    if (j < 0 || j > top()) {
        std::ostringstream os;
        os << "band " << j << " outside [0, " << top() << "]";
        throw SizeError(os.str());
    }
    return windows_[j];
}

DyadicPartition build_partition(const TorusGrid& grid) { return DyadicPartition(grid); }

namespace {

void check_grid(const Field& f, const DyadicPartition& part) {
    const auto& a = f.grid;
    const auto& b = part.grid();
    if (a.d != b.d || a.n != b.n || a.length != b.length)
        throw SizeError("field grid does not match the partition grid");
}

Field apply_window(const TorusGrid& g, const std::vector<cplx>& spec, const std::vector<double>& w) {
    std::vector<cplx> s(spec.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = spec[i] * w[i];
    return {g, inverse_fft_real(g, s)};
}

}  // namespace

Field band_project(const Field& f, const DyadicPartition& part, int j) {
    check_grid(f, part);
    const auto& w = part.window(j);
    return apply_window(f.grid, forward_fft(f.grid, f.values), w);
}

std::vector<Field> band_decompose(const Field& f, const DyadicPartition& part) {
    check_grid(f, part);
    const auto spec = forward_fft(f.grid, f.values);
    std::vector<Field> out;
    out.reserve(part.band_count());
    for (int j = 0; j <= part.top(); ++j) out.push_back(apply_window(f.grid, spec, part.window(j)));
    return out;
}

Space parse_space(const std::string& s) {
    if (s == "lp") return Space::Lp;
    if (s == "sobolev") return Space::Sobolev;
    if (s == "besov") return Space::Besov;
    throw ParameterError("unknown space '" + s + "' (expected lp, sobolev or besov)");
}

void NormSpec::validate() const {
    if (!(p >= 2.0) || !std::isfinite(p)) {
        std::ostringstream os;
        os << "integrability p=" << p << " must lie in [2, inf)";
        throw ParameterError(os.str());
    }
    if (!std::isfinite(index)) throw ParameterError("smoothness index must be finite");
}

double norm(const Field& f, const NormSpec& spec, const DyadicPartition* part) {
    spec.validate();
    switch (spec.space) {
        case Space::Lp: return lp_norm(f, spec.p);
        case Space::Sobolev:
            if (spec.index == 0.0) return lp_norm(f, spec.p);
            return lp_norm(spectral_multiplier(f, MultiplierKind::Bessel, spec.index), spec.p);
        case Space::Besov: break;
    }
    std::optional<DyadicPartition> local;
    if (!part) part = &local.emplace(f.grid);
    const auto bands = band_decompose(f, *part);
    double acc = 0.0;
    for (int j = 1; j <= part->top(); ++j) {
        const double nj = lp_norm(bands[j], spec.p);
        acc += std::pow(2.0, spec.index * spec.p * j) * std::pow(nj, spec.p);
    }
    return lp_norm(bands[0], spec.p) + std::pow(acc, 1.0 / spec.p);
}

double check_equivalence(const Field& f, double gamma, double p, const DyadicPartition& part) {
    NormSpec{Space::Sobolev, p, gamma}.validate();
    const auto bands = band_decompose(f, part);
    std::vector<double> sq(f.values.size(), 0.0);
    for (int j = 1; j <= part.top(); ++j) {
        const double w = std::pow(2.0, 2.0 * gamma * j);
        for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += w * bands[j].values[i] * bands[j].values[i];
    }
    for (double& v : sq) v = std::sqrt(v);
    const double den = lp_norm(bands[0], p) + lp_norm(Field(f.grid, std::move(sq)), p);
    const double num = norm(f, {Space::Sobolev, p, gamma});
    return num / den;
}

}  // namespace fspde
