#include "levy/sobolev.hpp"

#include <cmath>

namespace levy {

double lp_norm(const Field& f, double p) {
    double acc = 0.0;
    const double vol = std::pow(f.grid.dx(), f.grid.d);
    for (double v : f.values) acc += std::pow(std::abs(v), p);
    return std::pow(acc * vol, 1.0 / p);
}

double lp_norm(const SpaceTimeField& f, double p) {
    double acc = 0.0;
    const double dt = f.dt();
    for (int k = 0; k <= f.n_steps(); ++k) {
        const double w = (k == 0 || k == f.n_steps()) ? 0.5 : 1.0;
        acc += w * dt * std::pow(lp_norm(f[k], p), p);
    }
    return std::pow(acc, 1.0 / p);
}

Field bessel_multiplier(const Field& f, double beta) {
    return apply_multiplier(f, [beta](const Vec& xi) -> cplx {
        return std::pow(1.0 + dot(xi, xi), 0.5 * beta);
    });
}

double sobolev_norm(const Field& f, double beta, double p) {
    if (beta == 0.0) return lp_norm(f, p);
    return lp_norm(bessel_multiplier(f, beta), p);
}

double sobolev_norm(const SpaceTimeField& f, double beta, double p) {
    double acc = 0.0;
    const double dt = f.dt();
    for (int k = 0; k <= f.n_steps(); ++k) {
        const double w = (k == 0 || k == f.n_steps()) ? 0.5 : 1.0;
        acc += w * dt * std::pow(sobolev_norm(f[k], beta, p), p);
    }
    return std::pow(acc, 1.0 / p);
}

}  // namespace levy
