#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "levy/grid.hpp"

namespace levy {

using cplx = std::complex<double>;
using Spectrum = std::vector<cplx>;

/// Forward transform: coefficients c_k = (1/n^d) sum_j f_j e^{-2 pi i j.k/n},
/// so that f(x) = sum_k c_k e^{i xi_k . (x + L)} with xi_k = pi k / L.
Spectrum spectrum(const Field& f);

/// Inverse of `spectrum`; imaginary residue is discarded.
Field inverse_spectrum(const Grid& g, const Spectrum& c);

Spectrum forward_complex(const Grid& g, Spectrum in);
Spectrum inverse_complex(const Grid& g, Spectrum in);

/// Applies a Fourier multiplier xi -> g(xi) to a real field.
Field apply_multiplier(const Field& f, const std::function<cplx(const Vec&)>& mult);

/// Same, with the multiplier given per FFT bin (cached evaluations).
Field apply_multiplier(const Field& f, const Spectrum& mult_values);

/// Tabulates a multiplier on the grid's frequency lattice.
Spectrum multiplier_table(const Grid& g, const std::function<cplx(const Vec&)>& mult);

/// Spectral partial derivative d/dx_axis (Nyquist mode zeroed).
Field derivative(const Field& f, int axis);

/// Spectral second derivative d^2/dx_axis dx_axis2.
Field second_derivative(const Field& f, int axis1, int axis2);

/// Exact periodic shift: returns x -> f(x + y) for band-limited f.
Field shift(const Field& f, const Vec& y);

/// Zeroes all modes with max_axis |k| > k_max.
Field band_limit(const Field& f, int k_max);

/// Keeps only modes with k_min <= max_axis |k| <= k_max.
Field band_pass(const Field& f, int k_min, int k_max);

/// Evaluates a band-limited field at an arbitrary point by direct mode
/// summation. Exact but O(n^d) per call; use SpectralInterpolant on paths.
double eval_offgrid(const Field& f, const Vec& x);

/// Fast off-grid evaluation: spectral zero-pad upsampling onto a finer
/// lattice followed by local cubic (Catmull-Rom) interpolation.
class SpectralInterpolant {
  public:
    SpectralInterpolant() = default;
    SpectralInterpolant(const Field& f, int upsample = 8);
    double operator()(const Vec& x) const;

  private:
    Grid fine_;
    std::vector<double> fine_values_;
};

/// Periodic circular convolution of two grid fields scaled by cell volume,
/// (f * g)(x_i) = dx^d sum_j f(x_j) g(x_i - x_j).
Field convolve(const Field& f, const Field& g);

}  // namespace levy
