#pragma once

namespace levy {

/// Constant c_{d,kappa} > 0 such that the generator-form fractional
/// Laplacian int [u(x+y)-u(x)-chi(y)(grad u,y)] dy/|y|^{d+kappa} has Fourier
/// multiplier -c_{d,kappa} |xi|^kappa. Closed form
///   c_{d,kappa} = pi^{d/2} * (2/kappa) * Gamma(1-kappa/2) / (2^kappa * Gamma((d+kappa)/2)).
double frac_laplacian_constant(int d, double kappa);

/// Surface measure of the unit sphere S^{d-1}: 2 for d=1 (counting measure),
/// 2*pi for d=2.
double sphere_measure(int d);

/// Leading large-|x| coefficient of the isotropic alpha-stable density
/// K = F^{-1}[e^{-|xi|^alpha}] in d dimensions: K(x) ~ coef * |x|^{-d-alpha}.
double stable_tail_coefficient(int d, double alpha);

/// K(0) for the same density, via Gamma-function closed form.
double stable_density_at_zero(int d, double alpha);

/// Inverse of the standard normal CDF (Acklam's rational approximation
/// polished by one Halley step; ~1e-15 absolute accuracy).
double normal_quantile(double p);

/// Survival function of the Kolmogorov distribution,
/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 lambda^2}.
double kolmogorov_survival(double lambda);

}  // namespace levy
