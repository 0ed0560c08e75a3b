#include "fspde/fraccalc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fspde/errors.hpp"
#include "fspde/specfun.hpp"

namespace fspde {
namespace {

constexpr double kIntegerSnap = 1e-12;

void check_order(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        std::ostringstream os;
        os << "derivative order alpha=" << alpha << " outside (0,2)";
        throw DomainError(os.str());
    }
}

// Classical first derivative: central inside, first-order one-sided at the ends.
std::vector<double> first_difference(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    d[0] = (f[1] - f[0]) / h;
    d[n - 1] = (f[n - 1] - f[n - 2]) / h;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    return d;
}

std::vector<double> second_difference(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    const double h2 = h * h;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    d[0] = (f[2] - 2.0 * f[1] + f[0]) / h2;
    d[n - 1] = (f[n - 1] - 2.0 * f[n - 2] + f[n - 3]) / h2;
    return d;
}

}  // namespace

void TimeGrid::validate() const {
    if (!(tmax > 0.0) || !std::isfinite(tmax)) throw SizeError("time horizon must be positive");
    if (n < 2) throw SizeError("time grid needs at least 2 steps");
}

std::vector<double> TimeGrid::nodes() const {
    std::vector<double> t(n + 1);
    for (int i = 0; i <= n; ++i) t[i] = node(i);
    return t;
}

GridFunction::GridFunction(TimeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    grid.validate();
    if (values.size() != static_cast<std::size_t>(grid.n) + 1)
        throw SizeError("grid function length does not match the grid");
}

std::vector<double> product_integration_weights(int n, double alpha, double dt) {
    std::vector<double> w(n + 1, 0.0);
    if (n == 0) return w;
    const double c = std::pow(dt, alpha) * rgamma(alpha + 2.0);
    const double a1 = alpha + 1.0;
    w[0] = c * (std::pow(n - 1.0, a1) - (n - alpha - 1.0) * std::pow(static_cast<double>(n), alpha));
    for (int j = 1; j < n; ++j) {
        const double m = n - j;
        w[j] = c * (std::pow(m + 1.0, a1) + std::pow(m - 1.0, a1) - 2.0 * std::pow(m, a1));
    }
    w[n] = c;
    return w;
}

GridFunction frac_integral(const GridFunction& phi, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        std::ostringstream os;
        os << "fractional integral order alpha=" << alpha << " must be positive";
        throw DomainError(os.str());
    }
    phi.grid.validate();
    const int n = phi.grid.n;
    const double h = phi.grid.dt();
    const double c = std::pow(h, alpha) * rgamma(alpha + 2.0);
    const double a1 = alpha + 1.0;
    // Interior weights depend on the lag only: b[m] for lag m >= 1.
    std::vector<double> b(n + 1, 0.0);
    for (int m = 1; m <= n; ++m)
        b[m] = c * (std::pow(m + 1.0, a1) + std::pow(m - 1.0, a1) - 2.0 * std::pow(m, a1));
    std::vector<double> out(n + 1, 0.0);
    const auto& f = phi.values;
    for (int k = 1; k <= n; ++k) {
        double acc = c * (std::pow(k - 1.0, a1) - (k - alpha - 1.0) * std::pow(k, alpha)) * f[0];
        for (int j = 1; j < k; ++j) acc += b[k - j] * f[j];
        acc += c * f[k];
        out[k] = acc;
    }
    return {phi.grid, std::move(out)};
}

GridFunction rl_derivative(const GridFunction& phi, double alpha) {
    check_order(alpha);
    phi.grid.validate();
    const double h = phi.grid.dt();
    if (std::abs(alpha - 1.0) < kIntegerSnap) return {phi.grid, first_difference(phi.values, h)};
    if (alpha < 1.0) {
        const GridFunction psi = frac_integral(phi, 1.0 - alpha);
        return {phi.grid, first_difference(psi.values, h)};
    }
    const GridFunction psi = frac_integral(phi, 2.0 - alpha);
    return {phi.grid, second_difference(psi.values, h)};
}

GridFunction caputo_derivative(const GridFunction& phi, double alpha) {
    check_order(alpha);
    phi.grid.validate();
    const auto& f = phi.values;
    const double h = phi.grid.dt();
    std::vector<double> r(f.size());
    const double f0 = f[0];
    double d0 = 0.0;
    if (alpha > 1.0 + kIntegerSnap) d0 = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i] - f0 - d0 * phi.grid.node(static_cast<int>(i));
    return rl_derivative({phi.grid, std::move(r)}, alpha);
}

double grid_lp_norm(const GridFunction& phi, double p) {
    if (!(p >= 1.0)) throw DomainError("L_p norm requires p >= 1");
    const auto& f = phi.values;
    const double h = phi.grid.dt();
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double w = (i == 0 || i + 1 == f.size()) ? 0.5 * h : h;
        acc += w * std::pow(std::abs(f[i]), p);
    }
    return std::pow(acc, 1.0 / p);
}

}  // namespace fspde
