#include "levy/special.hpp"

#include <cmath>
#include <stdexcept>

namespace levy {

double frac_laplacian_constant(int d, double kappa) {
    if (kappa <= 0.0 || kappa >= 2.0) throw std::invalid_argument("frac_laplacian_constant: kappa must lie in (0,2)");
    if (d != 1 && d != 2) throw std::invalid_argument("frac_laplacian_constant: d must be 1 or 2");
    return std::pow(M_PI, 0.5 * d) * (2.0 / kappa) * std::tgamma(1.0 - 0.5 * kappa) /
           (std::pow(2.0, kappa) * std::tgamma(0.5 * (d + kappa)));
}

double sphere_measure(int d) {
    if (d == 1) return 2.0;
    if (d == 2) return 2.0 * M_PI;
    throw std::invalid_argument("sphere_measure: d must be 1 or 2");
}

double stable_tail_coefficient(int d, double alpha) {
    if (d == 1) {
        // (1/pi) Gamma(1+alpha) sin(pi alpha / 2)
        return std::tgamma(1.0 + alpha) * std::sin(0.5 * M_PI * alpha) / M_PI;
    }
    // First term of the Hankel series: (1/2pi) 2^{alpha+1} Gamma(1+alpha/2) / |Gamma(-alpha/2)|.
    // 1/Gamma(-a) = -a/Gamma(1-a), so Gamma(1+a/2)/Gamma(-a/2) = -(a/2)Gamma(1+a/2)/Gamma(1-a/2).
    const double a = 0.5 * alpha;
    const double ratio = -a * std::tgamma(1.0 + a) / std::tgamma(1.0 - a);
    return -(1.0 / (2.0 * M_PI)) * std::pow(2.0, alpha + 1.0) * ratio;
}

double stable_density_at_zero(int d, double alpha) {
    if (d == 1) return std::tgamma(1.0 + 1.0 / alpha) / M_PI;
    return std::tgamma(2.0 / alpha) / (alpha * 2.0 * M_PI);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
    // Acklam's algorithm.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    } else if (p <= phigh) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    }
    // One Halley polish step against erfc.
    const double e = 0.5 * std::erfc(-x / M_SQRT2) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

}  // namespace levy
