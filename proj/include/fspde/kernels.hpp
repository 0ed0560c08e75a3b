#pragma once

// Fundamental solutions p, q_{alpha,beta} and P of the time-fractional heat
// equation through their Fourier symbols
//   |xi|^gamma t^{alpha-beta-sigma} E_{alpha, 1+alpha-beta-sigma}(-t^alpha |xi|^2),
// with beta = alpha for p and beta = alpha - 1 for P.

#include <limits>
#include <string>
#include <vector>

#include "fspde/torus.hpp"

namespace fspde {

enum class KernelKind { p, q, P };

struct KernelSymbol {
    KernelKind kind = KernelKind::p;
    double alpha = 1.0;
    double beta = 1.0;   ///< used for kind q only
    double t = 1.0;
    int sigma = 0;       ///< time derivative order, 0 or 1
    double gamma = 0.0;  ///< order of the |xi|^gamma multiplier

    /// Throws ParameterError for alpha outside (0,2), beta >= alpha + 1/2 (q),
    /// alpha <= 1 (P), t <= 0, sigma not in {0,1} or gamma < 0.
    void validate() const;
    /// beta after resolving the kind.
    double effective_beta() const noexcept;
    /// Exponent of t in front of the Mittag-Leffler factor.
    double time_power() const noexcept { return alpha - effective_beta() - sigma; }
    /// Second Mittag-Leffler parameter.
    double ml_b() const noexcept { return 1.0 + alpha - effective_beta() - sigma; }
    /// Exponent e in K(t, x) = t^e K(1, t^{-alpha/2} x) on R^d.
    double scaling_power(int d) const noexcept;
};

KernelKind parse_kernel_kind(const std::string& s);

inline constexpr double kNoAliasCheck = std::numeric_limits<double>::infinity();

/// Symbol at |xi|^2 = xi_sq.
double symbol_value(const KernelSymbol& sym, double xi_sq);

/// Symbol at every grid frequency (FFT ordering), one Mittag-Leffler
/// evaluation per distinct |xi|^2.
std::vector<double> symbol_on_grid(const KernelSymbol& sym, const TorusGrid& grid);

/// Smallest even N (power of two) for which |symbol| at the axis Nyquist
/// frequency is below tol; 0 when no N up to 2^24 suffices.
int required_modes(const KernelSymbol& sym, double length, double tol);

/// Periodized kernel on the grid, (1/L^d) sum_xi symbol(xi) e^{i xi x}.
/// Throws ResolutionError when |symbol| at the Nyquist frequency exceeds alias_tol.
Field kernel_field(const KernelSymbol& sym, const TorusGrid& grid, double alias_tol = 1e-12);

/// Kernel at an arbitrary point via the trigonometric interpolant of the grid symbol.
double kernel_value(const KernelSymbol& sym, const TorusGrid& grid, const double* x);

enum class MultiplierKind { FracLaplacian, Bessel };

/// |xi|^gamma (FracLaplacian, so gamma = 2 is -Delta) or (1 + |xi|^2)^{gamma/2} (Bessel).
Field spectral_multiplier(const Field& f, MultiplierKind kind, double gamma);

}  // namespace fspde
