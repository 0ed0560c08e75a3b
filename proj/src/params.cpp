#include "fspde/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fspde/errors.hpp"

namespace fspde {

std::string ProblemParams::violation() const {
    if (!(alpha > 0.0 && alpha < 2.0)) return "0 < alpha < 2";
    if (!(p >= 2.0) || !std::isfinite(p)) return "p >= 2";
    if (!(beta1 < alpha + 0.5)) return "beta1 < alpha + 1/2";
    if (!(beta2 < alpha + 1.0 / p)) return "beta2 < alpha + 1/p";
    if (!(kappa > 0.0)) return "kappa > 0";
    if (!std::isfinite(gamma)) return "gamma finite";
    return {};
}

void ProblemParams::validate() const {
    const std::string v = violation();
    if (v.empty()) return;
    std::ostringstream os;
    os << "parameter constraint violated: " << v << " (alpha=" << alpha << ", beta1=" << beta1
       << ", beta2=" << beta2 << ", p=" << p << ")";
    throw ParameterError(os.str());
}

DerivedExponents derived_exponents(const ProblemParams& params) {
    params.validate();
    const double a = params.alpha, p = params.p;
    DerivedExponents e;
    if (params.beta1 > 0.5)
        e.c0 = (2.0 * params.beta1 - 1.0) / a;
    else if (params.beta1 == 0.5)
        e.c0 = params.kappa;
    if (params.beta2 > 1.0 / p)
        e.c0bar = (2.0 * params.beta2 - 2.0 / p) / a;
    else if (params.beta2 == 1.0 / p)
        e.c0bar = params.kappa;
    e.theta = std::min({a, 2.0 * (a - params.beta1) + 1.0, p * (a - params.beta2) + 2.0});
    e.d0 = 4.0 - 2.0 * std::max(0.0, 2.0 * params.beta2 - 2.0 / p) / a;
    e.u0_index = std::max(0.0, 2.0 - 2.0 / (a * p));
    if (a > 1.0 + 1.0 / p)
        e.v0_index = 2.0 - 2.0 / a - 2.0 / (a * p);
    else if (a > 1.0)
        e.v0_index = 2.0 - 2.0 / a;
    return e;
}

WhiteNoiseGate white_noise_gate(const ProblemParams& params, int d) {
    const auto e = derived_exponents(params);
    const double x = std::max(0.0, 2.0 * params.beta2 - 2.0 / params.p) / params.alpha;
    WhiteNoiseGate g;
    g.d = d;
    g.d0 = e.d0;
    g.kappa_lo = 0.5 * d;
    g.kappa_hi = std::min(2.0 - x, static_cast<double>(d));
    g.kappa0 = 0.5 * (g.kappa_lo + g.kappa_hi);
    g.accepted = d >= 1 && d < e.d0 && g.kappa_lo < g.kappa_hi;
    return g;
}

WhiteNoiseGate require_white_noise_gate(const ProblemParams& params, int d) {
    const auto g = white_noise_gate(params, d);
    std::ostringstream os;
    if (!(d < g.d0)) {
        os << "dimension gate: d=" << d << " is not below d0=" << g.d0
           << " = 4 - 2(2 beta2 - 2/p)^+/alpha";
        throw ParameterError(os.str());
    }
    if (!(g.kappa_lo < g.kappa_hi)) {
        os << "empty kappa0 interval (" << g.kappa_lo << ", " << g.kappa_hi << ")";
        throw ParameterError(os.str());
    }
    return g;
}

}  // namespace fspde
