#pragma once

// Littlewood-Paley bands on a torus grid and the L_p, H^gamma_p and B^s_p norms.

#include <string>
#include <vector>

#include "fspde/torus.hpp"

namespace fspde {

/// Smooth bump supported on [1/2, 2] in |xi|.
double lp_bump(double r);
/// Psi-hat(xi) = chi(|xi|) / sum_k chi(2^{-k}|xi|); zero at xi = 0.
double lp_window(double r);

/// Dyadic windows Psi_0..Psi_top tabulated at the grid frequencies.
class DyadicPartition {
public:
    explicit DyadicPartition(const TorusGrid& grid);

    const TorusGrid& grid() const noexcept { return grid_; }
    /// Highest band index; band j >= 1 lives on 2^{j-1} <= |xi| <= 2^{j+1}.
    int top() const noexcept { return static_cast<int>(windows_.size()) - 1; }
    int band_count() const noexcept { return static_cast<int>(windows_.size()); }
    /// floor(log2 of the axis Nyquist frequency).
    int nyquist_band() const noexcept { return nyquist_band_; }
    /// Window values of band j at every grid frequency (FFT ordering).
    const std::vector<double>& window(int j) const;

private:
    TorusGrid grid_;
    int nyquist_band_ = 0;
    std::vector<std::vector<double>> windows_;
};

/// Builds the partition; ResolutionError if the grid carries fewer than 3 bands.
DyadicPartition build_partition(const TorusGrid& grid);

/// f_j = Psi_j * f by frequency windowing. SizeError for j outside [0, top].
Field band_project(const Field& f, const DyadicPartition& part, int j);
/// All bands at once from one forward transform.
std::vector<Field> band_decompose(const Field& f, const DyadicPartition& part);

enum class Space { Lp, Sobolev, Besov };
Space parse_space(const std::string& s);

struct NormSpec {
    Space space = Space::Lp;
    double p = 2.0;
    double index = 0.0;  ///< gamma for Sobolev, s for Besov

    /// ParameterError unless p >= 2 and finite.
    void validate() const;
};

/// Norm of f. The partition is built on demand for Besov when not supplied.
double norm(const Field& f, const NormSpec& spec, const DyadicPartition* part = nullptr);

/// ||u||_{H^gamma_p} / (||u_0||_{L_p} + ||(sum_{j>=1} 2^{2 gamma j} |u_j|^2)^{1/2}||_{L_p}).
double check_equivalence(const Field& f, double gamma, double p, const DyadicPartition& part);

}  // namespace fspde
