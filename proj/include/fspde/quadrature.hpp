#pragma once

#include <functional>
#include <span>

namespace fspde::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
    bool converged = true;
};

/// Adaptive 21-point Gauss-Kronrod on [a, b] with bisection.
/// Stops when the summed error estimate drops below max(abs_tol, rel_tol*|I|)
/// or when `max_panels` panels have been generated.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol = 0.0, int max_panels = 4000);

/// Fixed n-point Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch free,
/// Newton iteration on P_n).
void gauss_legendre(int n, std::span<double> nodes, std::span<double> weights);

}  // namespace fspde::quad
