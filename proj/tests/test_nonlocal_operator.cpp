#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "levy/nonlocal_operator.hpp"
#include "levy/sobolev.hpp"
#include "levy/special.hpp"

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

TEST_SUITE("nonlocal_operator") {

TEST_CASE("fractional Laplacian: constants, modes, linearity") {
    Grid g(1, M_PI, 128);
    const double kappa = 1.3;

    Field c(g, 3.7);
    CHECK(max_abs(frac_laplacian(c, kappa)) < 1e-12);

    const double xi0 = 5.0;
    Field mode = sample(g, [&](const Vec& x) { return std::cos(xi0 * x[0]); });
    Field lap = frac_laplacian(mode, kappa);
    const double expect = -frac_laplacian_constant(1, kappa) * std::pow(xi0, kappa);
    CHECK(rel_l2_error(lap, expect * mode) < 1e-12);

    // The multiplier constant agrees with the quadrature route.
    auto preset = constant_kernel();
    cplx psi = eval_symbol(preset.kernel, StableIndex(kappa), 1, 0.0, vec1(0.0), vec1(xi0));
    CHECK(psi.real() == doctest::Approx(expect).epsilon(1e-7));

    Field v = random_band_limited(g, 20, 3);
    Field w = random_band_limited(g, 20, 5);
    Field lhs = frac_laplacian(2.0 * v + (-3.0) * w, kappa);
    Field rhs = 2.0 * frac_laplacian(v, kappa) - 3.0 * frac_laplacian(w, kappa);
    CHECK(rel_l2_error(lhs, rhs) < 1e-12);
}

TEST_CASE("apply_A annihilates constants and reports the truncation tail") {
    Grid g(1, M_PI, 128);
    auto preset = constant_kernel();
    StableIndex a(0.8);
    ApplyDiagnostics diag;
    Field out = apply_A(preset.kernel, a, 0.0, Field(g, 2.5), {}, &diag);
    CHECK(max_abs(out) < 1e-12);
    const double trunc = g.L - 0.5 * g.dx();
    CHECK(diag.tail_mass == doctest::Approx(2.0 * std::pow(trunc, -0.8) / 0.8));
}

TEST_CASE("apply_A tracks the truncated-kernel symbol under refinement") {
    // apply_A discretizes the |y| <= L - dx/2 truncation of the operator;
    // its per-mode oracle is the symbol of the windowed kernel.
    auto preset = constant_kernel();
    for (double alpha : {0.6, 1.2, 1.7}) {
        StableIndex a(alpha);
        double prev_err = 0.0;
        for (int n : {128, 256}) {
            Grid g(1, M_PI, n);
            KernelSpec win = windowed(preset.kernel, 0.0, g.L - 0.5 * g.dx());
            Field u = random_band_limited(g, 8, 23);
            Field lat = apply_A(preset.kernel, a, 0.0, u);
            Field ref = apply_multiplier(u, symbol_multiplier(g, win, a, 0.0));
            const double err = rel_l2_error(lat, ref);
            if (prev_err > 0.0) CHECK(err < 0.7 * prev_err);
            prev_err = err;
        }
        CHECK(prev_err < 2e-4);
    }
}

TEST_CASE("apply_A approximates the full operator up to the reported tail") {
    Grid g(1, M_PI, 256);
    auto preset = constant_kernel();
    StableIndex a(1.5);
    Field u = band_pass(random_band_limited(g, 32, 29), 8, 32);
    ApplyDiagnostics diag;
    Field lat = apply_A(preset.kernel, a, 0.0, u, {}, &diag);
    Field full = frac_laplacian(u, 1.5);
    // The dominant dropped term is -u(x) * tail_mass; adding it back should
    // leave only oscillatory remainders.
    Field corrected = lat - (-diag.tail_mass) * u;
    CHECK(rel_l2_error(lat, full) > rel_l2_error(corrected, full));
    CHECK(rel_l2_error(corrected, full) < 0.01);
    CHECK(rel_l2_error(lat, full) < diag.tail_mass / 3.0);  // high-band fields
}

TEST_CASE("apply_A matches the symbol on a single mode for y-only kernels") {
    Grid g(1, M_PI, 256);
    KernelSpec spec;
    spec.m = [](double, const Vec&, const Vec& y) { return 1.0 + 0.5 * (y[0] > 0.0 ? 1.0 : 0.0); };
    spec.K_upper = 1.5;
    spec.x_dependent = false;
    StableIndex a(0.7);
    const double xi0 = 4.0;
    KernelSpec win = windowed(spec, 0.0, g.L - 0.5 * g.dx());
    cplx psi = eval_symbol(win, a, 1, 0.0, vec1(0.0), vec1(xi0));
    Field u = sample(g, [&](const Vec& x) { return std::cos(xi0 * x[0]); });
    Field expect = sample(g, [&](const Vec& x) {
        return psi.real() * std::cos(xi0 * x[0]) - psi.imag() * std::sin(xi0 * x[0]);
    });
    CHECK(rel_l2_error(apply_A(spec, a, 0.0, u), expect) < 1e-4);
}

TEST_CASE("separable spectral application agrees with the lattice") {
    Grid g(1, M_PI, 256);
    auto mix = hoelder_mix_kernel();
    StableIndex a(1.5);
    KernelSpec win = windowed(mix.kernel, 0.0, g.L - 0.5 * g.dx());
    SeparableOperator op(g, win, a, 0.0);
    REQUIRE(op.valid());
    Field u = random_band_limited(g, 8, 31);
    Field spec_route = op.apply(u);
    Field lat_route = apply_A(mix.kernel, a, 0.0, u);
    CHECK(rel_l2_error(lat_route, spec_route) < 1e-3);
    CHECK(op.norm_bound() > 0.0);
}

TEST_CASE("apply_A on a 2-d grid matches the truncated symbol") {
    Grid g(2, M_PI, 32);
    auto preset = constant_kernel();
    StableIndex a(0.9);
    KernelSpec win = windowed(preset.kernel, 0.0, g.L - 0.5 * g.dx());
    SymbolQuadrature quad;
    quad.sphere_nodes = 128;
    Field u = random_band_limited(g, 5, 37);
    Field ref = apply_multiplier(u, symbol_multiplier(g, win, a, 0.0, quad));
    CHECK(rel_l2_error(apply_A(preset.kernel, a, 0.0, u), ref) < 0.01);
}

TEST_CASE("sign at an interior strict maximum") {
    Grid g(1, M_PI, 256);
    auto preset = constant_kernel();
    StableIndex a(0.6);
    Field u = sample(g, [&](const Vec& x) { return std::exp(std::cos(x[0])); });
    Field au = apply_A(preset.kernel, a, 0.0, u);
    std::size_t imax = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] > u[imax]) imax = i;
    CHECK(au[imax] <= 1e-8 * max_abs(u));
}

TEST_CASE("affine functions are annihilated for alpha > 1 on the window") {
    Grid g(1, 4.0 * M_PI, 512);
    StableIndex a(1.5);
    // Smooth field that is affine to cubic accuracy near x = 0.
    Field u = sample(g, [&](const Vec& x) {
        const double L = 4.0 * M_PI;
        return L / M_PI * std::sin(M_PI * x[0] / L);
    });
    auto preset = constant_kernel();
    KernelSpec win = windowed(preset.kernel, 0.0, 1.0);
    Field au = apply_A(win, a, 0.0, u);
    const std::size_t center = g.size() / 2;  // x = 0
    Field probe = random_band_limited(g, 16, 41);
    probe *= max_abs(u) / max_abs(probe);
    const double scale = max_abs(apply_A(win, a, 0.0, probe));
    CHECK(std::abs(au[center]) < 5e-3 * scale);
}

TEST_CASE("apply_B: null measure, atoms, pure drift") {
    Grid g(1, M_PI, 128);
    StableIndex low_a(0.7), high_a(1.5);
    Field u = random_band_limited(g, 10, 43);

    LowerOrderSpec nothing;
    CHECK(max_abs(apply_B(nothing, low_a, 0.0, u)) == 0.0);

    // Single atom at an exact lattice shift, alpha < 1: lambda (u(x+y0) - u(x)).
    LowerOrderSpec atom;
    const int shift_cells = 9;
    atom.atoms = {{vec1(shift_cells * g.dx()), 0.8}};
    Field bu = apply_B(atom, low_a, 0.0, u);
    Field expect(g);
    for (int i = 0; i < g.n; ++i) expect[i] = 0.8 * (u[(i + shift_cells) % g.n] - u[i]);
    CHECK(rel_l2_error(bu, expect) < 1e-9);

    // Pure drift, alpha = 3/2: (e1, grad u) on a mode.
    LowerOrderSpec drift;
    drift.drift = [](double, const Vec&) { return vec1(1.0); };
    const double xi0 = 3.0;
    Field mode = sample(g, [&](const Vec& x) { return std::cos(xi0 * x[0]); });
    Field want = sample(g, [&](const Vec& x) { return -xi0 * std::sin(xi0 * x[0]); });
    CHECK(rel_l2_error(apply_B(drift, high_a, 0.0, mode), want) < 1e-10);
    // Drift is inactive for alpha < 1.
    CHECK(max_abs(apply_B(drift, low_a, 0.0, mode)) == 0.0);
}

TEST_CASE("B splits exactly into small and big parts") {
    Grid g(1, M_PI, 128);
    Field u = random_band_limited(g, 12, 47);
    LowerOrderSpec low;
    low.drift = [](double, const Vec& x) { return vec1(0.2 * std::cos(x[0])); };
    low.pi_density = [](double, const Vec& x, const Vec& y) {
        const double r = norm(y);
        return (0.5 + 0.25 * std::sin(x[0])) * std::min(r, 1.0);
    };
    low.pi_density_upper = 0.75;
    low.atoms = {{vec1(0.3), 0.4}, {vec1(-1.7), 0.25}};
    low.eps0 = 0.6;
    for (double alpha : {0.7, 1.5}) {
        StableIndex a(alpha);
        Field whole = apply_B(low, a, 0.0, u);
        Field split = apply_B_small(low, a, 0.0, u) + apply_B_big(low, a, 0.0, u);
        CHECK(rel_l2_error(split, whole) < 1e-12);
    }
}

TEST_CASE("komatsu reconstruction of a shift") {
    Grid g(1, 16.0, 1024);
    const double delta = 0.5;
    Field v = sample(g, [](const Vec& x) { return std::exp(-x[0] * x[0]); });
    CHECK(max_abs(komatsu_reconstruct(v, delta, vec1(0.0))) < 1e-10);

    const double y = 0.5;
    Field recon = komatsu_reconstruct(v, delta, vec1(y));
    Field target = shift(v, vec1(y)) - v;
    CHECK(rel_l2_error(recon, target) < 0.02);
}

TEST_CASE("komatsu L1 bound carries exponent delta") {
    const double delta = 0.35;
    std::vector<double> ys, sums;
    for (double y = 0.05; y <= 5.01; y *= std::sqrt(10.0)) {
        ys.push_back(std::log(y));
        sums.push_back(std::log(komatsu_l1_norm(delta, y)));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) mx += ys[i], my += sums[i];
    mx /= ys.size(), my /= ys.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        num += (ys[i] - mx) * (sums[i] - my);
        den += (ys[i] - mx) * (ys[i] - mx);
    }
    CHECK(num / den == doctest::Approx(delta).epsilon(0.02));
}

TEST_CASE("Lp certification: constant kernel gives ratio 1") {
    Grid g(1, M_PI, 256);
    std::vector<Field> ensemble;
    for (unsigned s = 0; s < 8; ++s) ensemble.push_back(random_band_limited(g, 8, 100 + s));
    auto preset = constant_kernel();
    for (double alpha : {0.5, 1.0, 1.5}) {
        auto row = certify_lp_bound(preset.kernel, StableIndex(alpha), 2.0, ensemble);
        CHECK(row.ratio_max == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("Lp certification: ratio scales linearly in the kernel bound") {
    Grid g(1, M_PI, 128);
    std::vector<Field> ensemble = {random_band_limited(g, 8, 201), random_band_limited(g, 8, 202)};
    KernelSpec one;
    one.m = [](double, const Vec&, const Vec& y) { return y[0] > 0.0 ? 1.0 : 0.0; };
    one.K_upper = 1.0;
    KernelSpec two = one;
    two.m = [](double, const Vec&, const Vec& y) { return y[0] > 0.0 ? 2.0 : 0.0; };
    two.K_upper = 2.0;
    StableIndex a(0.5);
    auto r1 = certify_lp_bound(one, a, 2.0, ensemble);
    auto r2 = certify_lp_bound(two, a, 2.0, ensemble);
    CHECK(r2.ratio_max == doctest::Approx(2.0 * r1.ratio_max).epsilon(1e-10));
}

TEST_CASE("Lp certification is stable across the truncation sweep") {
    Grid g(1, M_PI, 256);
    std::vector<Field> ensemble;
    for (unsigned s = 0; s < 12; ++s)
        ensemble.push_back(band_pass(random_band_limited(g, 32, 300 + s), 4, 32));
    KernelSpec half;
    half.m = [](double, const Vec&, const Vec& y) { return y[0] > 0.0 ? 1.0 : 0.0; };
    half.K_upper = 1.0;
    StableIndex a(0.5);
    double rmin = 1e300, rmax = 0.0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
        auto row = certify_lp_bound(half, a, 4.0, ensemble, eps);
        rmin = std::min(rmin, row.ratio_max);
        rmax = std::max(rmax, row.ratio_max);
        CHECK(row.tail_mass > 0.0);
    }
    CHECK((rmax - rmin) / rmax < 0.2);
}

TEST_CASE("certify ratios are invariant under dilation by grid relabeling") {
    Grid g1(1, M_PI, 128), g2(1, M_PI / 2.0, 128);
    Field u1 = random_band_limited(g1, 8, 401);
    Field u2(g2);
    u2.values = u1.values;
    KernelSpec half;
    half.m = [](double, const Vec&, const Vec& y) { return y[0] > 0.0 ? 1.0 : 0.0; };
    half.K_upper = 1.0;
    StableIndex a(0.7);
    auto r1 = certify_lp_bound(half, a, 2.0, {u1});
    auto r2 = certify_lp_bound(half, a, 2.0, {u2});
    CHECK(r1.ratio_max == doctest::Approx(r2.ratio_max).epsilon(1e-9));
}

TEST_CASE("Hoermander diagnostic stays bounded over the shift sweep") {
    auto preset = constant_kernel();
    StableIndex a(0.5);
    auto vals = hormander_diagnostic(preset.kernel, a, 1e-2, {0.1, 1.0, 10.0});
    for (double v : vals) {
        CHECK(std::isfinite(v));
        CHECK(v < 50.0);
    }
    const double lo = *std::min_element(vals.begin(), vals.end());
    const double hi = *std::max_element(vals.begin(), vals.end());
    CHECK(hi / (lo + 1e-300) < 20.0);
}

}  // TEST_SUITE
