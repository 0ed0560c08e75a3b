#pragma once

// Periodic grids on [0, L)^d and the FFT plumbing shared by kernels, norms and
// the solver. Arrays are row-major with the last axis fastest; spectra use the
// usual FFT ordering, so index m on an axis is the wave number m for m < N/2
// and m - N otherwise.

#include <complex>
#include <span>
#include <vector>

namespace fspde {

using cplx = std::complex<double>;

struct TorusGrid {
    int d = 1;             ///< dimension, 1..3
    int n = 64;            ///< points per axis, even, >= 8
    double length = 1.0;   ///< period L

    void validate() const;
    std::size_t size() const noexcept;
    double dx() const noexcept { return length / n; }
    double cell_volume() const noexcept;
    double volume() const noexcept;
    /// Largest |xi| along one axis, pi N / L.
    double nyquist() const noexcept;

    /// Signed integer wave number of FFT index m on one axis.
    int wave_number(int m) const noexcept { return m < n / 2 ? m : m - n; }
    /// Integer multi-index of a flat index, in FFT ordering.
    void wave_vector(std::size_t flat, int* out) const noexcept;
    /// Sum of squared integer wave numbers of a flat index.
    long wave_sq(std::size_t flat) const noexcept;
    /// |xi|^2 in physical units, (2 pi / L)^2 * wave_sq.
    double xi_sq(std::size_t flat) const noexcept;
    /// Coordinates of a flat node index.
    void position(std::size_t flat, double* x) const noexcept;
};

/// Real-valued samples on a TorusGrid.
struct Field {
    TorusGrid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const TorusGrid& g);
    Field(const TorusGrid& g, std::vector<double> v);
};

/// Unnormalized forward DFT of real samples.
std::vector<cplx> forward_fft(const TorusGrid& grid, std::span<const double> values);
/// Inverse DFT including the 1/N^d factor; returns the real part.
std::vector<double> inverse_fft_real(const TorusGrid& grid, std::span<const cplx> spectrum);
/// In-place transforms on caller-owned buffers. `sign` = -1 forward, +1 backward (unnormalized).
void fft_inplace(const TorusGrid& grid, std::span<cplx> data, int sign);

/// Evaluates the trigonometric interpolant of a spectrum at an arbitrary point.
/// Nyquist modes are split evenly between +N/2 and -N/2 so real samples give real values.
double trig_interpolate(const TorusGrid& grid, std::span<const cplx> spectrum, const double* x);

/// Discrete L_p norm with cell-volume weights.
double lp_norm(const Field& f, double p);

/// Sets the number of worker threads used by the library (0 = hardware default).
void set_thread_count(int n);
int thread_count();

}  // namespace fspde
