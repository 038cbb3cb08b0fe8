#include <doctest.h>

#include <cmath>
#include <random>

#include "levy/grid.hpp"
#include "levy/sobolev.hpp"
#include "levy/spectral.hpp"

using namespace levy;

namespace {

Field random_band_limited(const Grid& g, int k_max, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Field f(g);
    for (double& v : f.values) v = gauss(rng);
    return band_limit(f, k_max);
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("round trip reproduces values to 1e-12 relative") {
    for (int d : {1, 2}) {
        Grid g(d, M_PI, d == 1 ? 128 : 32);
        Field f = random_band_limited(g, g.n / 2 - 1, 7);
        Field back = inverse_spectrum(g, spectrum(f));
        CHECK(rel_l2_error(back, f) < 1e-12);
    }
}

TEST_CASE("derivative matches analytic derivative of a mode") {
    Grid g(1, M_PI, 64);
    const double xi0 = 3.0;
    Field f = sample(g, [&](const Vec& x) { return std::cos(xi0 * x[0]); });
    Field df = derivative(f, 0);
    Field expect = sample(g, [&](const Vec& x) { return -xi0 * std::sin(xi0 * x[0]); });
    CHECK(rel_l2_error(df, expect) < 1e-12);
}

TEST_CASE("shift is exact for band-limited fields") {
    Grid g(1, M_PI, 128);
    Field f = random_band_limited(g, 20, 11);
    const double y = 0.3717;
    Field shifted = shift(f, vec1(y));
    // Shift by one full cell must equal an index roll.
    Field rolled = shift(f, vec1(g.dx()));
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i) worst = std::max(worst, std::abs(rolled[i] - f[(i + 1) % g.n]));
    CHECK(worst < 1e-10);
    // Off-grid shift agrees with direct mode summation.
    double worst2 = 0.0;
    for (int i = 0; i < g.n; i += 17)
        worst2 = std::max(worst2, std::abs(shifted[i] - eval_offgrid(f, vec1(g.coord(i) + y))));
    CHECK(worst2 < 1e-9);
}

TEST_CASE("interpolant matches direct evaluation off-grid") {
    Grid g(1, M_PI, 128);
    Field f = random_band_limited(g, 16, 13);
    SpectralInterpolant interp(f, 8);
    double worst = 0.0;
    for (double x : {-2.9, -1.3, -0.0123, 0.7, 2.2, 3.1})
        worst = std::max(worst, std::abs(interp(vec1(x)) - eval_offgrid(f, vec1(x))));
    CHECK(worst < 2e-5);  // cubic tail of the 8x upsampled interpolant

    Grid g2(2, M_PI, 32);
    Field f2 = random_band_limited(g2, 6, 17);
    SpectralInterpolant interp2(f2, 8);
    double worst2 = 0.0;
    for (double x : {-2.0, 0.3, 1.9})
        for (double y : {-1.1, 0.77})
            worst2 = std::max(worst2, std::abs(interp2(vec2(x, y)) - eval_offgrid(f2, vec2(x, y))));
    CHECK(worst2 < 1e-4);  // coarser base grid, higher relative band
}

TEST_CASE("convolution diagonalizes as product of transforms") {
    Grid g(1, M_PI, 64);
    Field f = random_band_limited(g, 10, 19);
    Field delta(g);
    delta[0] = 1.0 / g.dx();  // discrete delta at x = -L
    Field conv = convolve(f, delta);
    // Convolving with a delta at node 0 shifts by -L = half a period.
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i) worst = std::max(worst, std::abs(conv[i] - f[(i + g.n / 2) % g.n]));
    CHECK(worst < 1e-10);
}

}  // TEST_SUITE
