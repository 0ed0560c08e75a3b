#pragma once

// Exponent tuple of the model equation and the quantities derived from it.

#include <string>

namespace fspde {

struct ProblemParams {
    double alpha = 1.0;
    double beta1 = 1.0;
    double beta2 = 1.0;
    double p = 2.0;
    double gamma = 0.0;
    double kappa = 0.01;

    /// Throws ParameterError naming the violated inequality:
    /// "0 < alpha < 2", "beta1 < alpha + 1/2", "beta2 < alpha + 1/p", "p >= 2", "kappa > 0".
    void validate() const;
    /// Returns the first violated inequality, or an empty string.
    std::string violation() const;
};

struct DerivedExponents {
    double c0 = 0.0;
    double c0bar = 0.0;
    double theta = 0.0;
    double d0 = 4.0;
    /// Sobolev index of the u0 space relative to gamma: (2 - 2/(alpha p))^+.
    double u0_index = 0.0;
    /// Sobolev index of the v0 space relative to gamma (alpha > 1 only).
    double v0_index = 0.0;
};

/// c0 = 1_{beta1>1/2}(2 beta1 - 1)/alpha + kappa 1_{beta1=1/2}, likewise c0bar with
/// (beta2, 1/p); theta = min{alpha, 2(alpha-beta1)+1, p(alpha-beta2)+2};
/// d0 = 4 - 2(2 beta2 - 2/p)^+/alpha.
DerivedExponents derived_exponents(const ProblemParams& params);

/// Admissibility audit for the white-noise equation in dimension d.
struct WhiteNoiseGate {
    int d = 1;
    double d0 = 4.0;
    double kappa_lo = 0.5;  ///< d/2
    double kappa_hi = 1.0;  ///< min(2 - (2 beta2 - 2/p)^+/alpha, d)
    double kappa0 = 0.75;   ///< midpoint of (kappa_lo, kappa_hi)
    bool accepted = false;
};

/// Pure arithmetic; never throws for valid params.
WhiteNoiseGate white_noise_gate(const ProblemParams& params, int d);

/// Throws ParameterError quoting d0 when d >= d0, or when the kappa0 interval is empty.
WhiteNoiseGate require_white_noise_gate(const ProblemParams& params, int d);

}  // namespace fspde
