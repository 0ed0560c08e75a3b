#pragma once

// Riemann-Liouville integral, Riemann-Liouville derivative and Caputo derivative
// on uniform time grids.

#include <span>
#include <vector>

namespace fspde {

/// Uniform grid t_i = i * tmax / n on [0, tmax].
struct TimeGrid {
    double tmax = 1.0;
    int n = 2;

    /// Throws SizeError unless n >= 2 and tmax > 0.
    void validate() const;
    double dt() const noexcept { return tmax / n; }
    double node(int i) const noexcept { return i * dt(); }
    std::vector<double> nodes() const;
};

/// Scalar samples on a TimeGrid, linear between nodes.
struct GridFunction {
    TimeGrid grid;
    std::vector<double> values;  ///< n + 1 entries

    GridFunction() = default;
    GridFunction(TimeGrid g, std::vector<double> v);
};

/// Weights w_0..w_n with I^alpha phi(t_n) = sum_j w_j phi_j for piecewise-linear phi.
/// The weights depend on n - j only through (n - j), except for the j = 0 entry.
std::vector<double> product_integration_weights(int n, double alpha, double dt);

/// I^alpha phi at every node. Value at t_0 is 0. DomainError for alpha <= 0.
GridFunction frac_integral(const GridFunction& phi, double alpha);

/// D^alpha phi = (d/dt)^m I^{m-alpha} phi with m = ceil(alpha), alpha in (0, 2).
/// Central differences inside, one-sided differences at both ends. Orders
/// within 1e-12 of 1 use the classical derivative.
GridFunction rl_derivative(const GridFunction& phi, double alpha);

/// Caputo derivative: rl_derivative of phi minus its Taylor head at 0; phi'(0)
/// for alpha > 1 comes from the second-order one-sided difference.
GridFunction caputo_derivative(const GridFunction& phi, double alpha);

/// Discrete L_p norm over the nodes with trapezoid weights.
double grid_lp_norm(const GridFunction& phi, double p);

}  // namespace fspde
