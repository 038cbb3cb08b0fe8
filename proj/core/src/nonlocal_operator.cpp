#include "levy/nonlocal_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "levy/quadrature.hpp"
#include "levy/special.hpp"

namespace levy {

Field frac_laplacian(const Field& v, double kappa) {
    const double c = frac_laplacian_constant(v.grid.d, kappa);
    return apply_multiplier(v, [&](const Vec& xi) -> cplx {
        const double r = norm(xi);
        return -c * std::pow(r, kappa);
    });
}

Spectrum symbol_multiplier(const Grid& g, const KernelSpec& spec, const StableIndex& alpha, double t,
                           const SymbolQuadrature& quad) {
    if (alpha.alpha == 1.0) {
        if (!check_alpha1_cancellation(spec, g.d, t, vec1(0.0), {0.5, 0.1, 0.01}, 1e-7, quad))
            throw AssumptionError("symbol_multiplier: alpha = 1 kernel fails ring cancellation");
    }
    Spectrum m(g.size());
    const Vec x0 = {0.0, 0.0};
    for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = eval_symbol(spec, alpha, g.d, t, x0, g.freq_vec(i), quad, /*skip_alpha1_check=*/true);
    return m;
}

// ---- Lattice quadrature core ----------------------------------------------

namespace {

enum class ChiMode { principal, lower_order, none };

/// Product-integration cell data: exact (d = 1) or subsampled (d = 2)
/// moments of the kernel |y|^{-d-alpha} over the cell, centered at y_k.
///   w0 = int K,  w1 = int (y - y_k) K,  w2 = int (y - y_k)(y - y_k)^T K.
struct Offset {
    int k0, k1;
    Vec y;
    double w0;
    double w1x, w1y;
    double w2xx, w2xy, w2yy;
};

struct OffsetTable {
    std::vector<Offset> offsets;
    double tail_mass = 0.0;
    double trunc = 0.0;
};

double pow_int(double a, double b, double mu) {  // int_a^b s^{mu-1} ds
    if (std::abs(mu) < 1e-12) return std::log(b / a);
    return (std::pow(b, mu) - std::pow(a, mu)) / mu;
}

Offset make_offset_1d(int k, double dx, double alpha) {
    const double a = (std::abs(k) - 0.5) * dx, b = (std::abs(k) + 0.5) * dx;
    const double sgn = k > 0 ? 1.0 : -1.0;
    const double yk = k * dx;
    const double w0 = pow_int(a, b, -alpha);
    const double m1 = sgn * pow_int(a, b, 1.0 - alpha);
    const double m2 = pow_int(a, b, 2.0 - alpha);
    Offset off{};
    off.k0 = k;
    off.k1 = 0;
    off.y = vec1(yk);
    off.w0 = w0;
    off.w1x = m1 - yk * w0;
    off.w2xx = m2 - 2.0 * yk * m1 + yk * yk * w0;
    return off;
}

Offset make_offset_2d(int k0, int k1, double dx, double alpha) {
    Offset off{};
    off.k0 = k0;
    off.k1 = k1;
    off.y = vec2(k0 * dx, k1 * dx);
    // Subsample with the 8-point rule per axis (cached once per grid/alpha).
    for (int i = 0; i < GaussRule::n; ++i) {
        const double d0 = 0.5 * dx * GaussRule::nodes[i];
        for (int j = 0; j < GaussRule::n; ++j) {
            const double d1 = 0.5 * dx * GaussRule::nodes[j];
            const double K = std::pow(std::hypot(off.y[0] + d0, off.y[1] + d1), -2.0 - alpha);
            const double w = GaussRule::weights[i] * GaussRule::weights[j] * dx * dx / 4.0 * K;
            off.w0 += w;
            off.w1x += w * d0;
            off.w1y += w * d1;
            off.w2xx += w * d0 * d0;
            off.w2xy += w * d0 * d1;
            off.w2yy += w * d1 * d1;
        }
    }
    return off;
}

std::shared_ptr<const OffsetTable> offset_table(const Grid& g, double alpha) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, long long, long long>, std::shared_ptr<const OffsetTable>> cache;
    long long Lbits, abits;
    static_assert(sizeof(double) == sizeof(long long));
    std::memcpy(&Lbits, &g.L, sizeof(double));
    std::memcpy(&abits, &alpha, sizeof(double));
    const auto key = std::make_tuple(g.d, g.n, Lbits, abits);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto table = std::make_shared<OffsetTable>();
    const double dx = g.dx();
    const double trunc = g.L - 0.5 * dx;
    if (g.d == 1) {
        for (int k = -(g.n / 2 - 1); k <= g.n / 2 - 1; ++k) {
            if (k == 0) continue;
            if (std::abs(k) * dx > trunc) continue;
            table->offsets.push_back(make_offset_1d(k, dx, alpha));
        }
    } else {
        for (int k0 = -(g.n / 2 - 1); k0 <= g.n / 2 - 1; ++k0) {
            for (int k1 = -(g.n / 2 - 1); k1 <= g.n / 2 - 1; ++k1) {
                if (k0 == 0 && k1 == 0) continue;
                if (std::hypot(k0 * dx, k1 * dx) > trunc) continue;
                table->offsets.push_back(make_offset_2d(k0, k1, dx, alpha));
            }
        }
    }
    table->tail_mass = sphere_measure(g.d) * std::pow(trunc, -alpha) / alpha;
    table->trunc = trunc;
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = table;
    return table;
}

double chi_of(ChiMode mode, double alpha, double r) {
    switch (mode) {
        case ChiMode::principal:
            return alpha > 1.0 ? 1.0 : (alpha == 1.0 && r <= 1.0 ? 1.0 : 0.0);
        case ChiMode::lower_order:
            return alpha > 1.0 && r <= 1.0 ? 1.0 : 0.0;
        case ChiMode::none:
            return 0.0;
    }
    return 0.0;
}

/// Shared jump-integral quadrature: kernel k(t,x,y) against the bracket
/// u(x+y) - u(x) - chi(y)(grad u, y). Product integration per cell: the
/// singular kernel is integrated exactly (its 0th/1st/2nd moments), the
/// smooth bracket expanded around the cell center with spectral derivatives.
Field lattice_jump_apply(const std::function<double(double, const Vec&, const Vec&)>& kernel, double alpha,
                         ChiMode mode, double t, const Field& u, double window_lo, double window_hi,
                         const LatticeQuadrature& lat, ApplyDiagnostics* diag) {
    (void)lat;
    const Grid& g = u.grid;
    auto table = offset_table(g, alpha);
    if (diag) diag->tail_mass = table->tail_mass;

    Field out(g);
    Field gx = derivative(u, 0);
    Field gy = g.d == 2 ? derivative(u, 1) : Field();
    Field hxx = second_derivative(u, 0, 0);
    Field hxy = g.d == 2 ? second_derivative(u, 0, 1) : Field();
    Field hyy = g.d == 2 ? second_derivative(u, 1, 1) : Field();

    const int n = g.n;
    for (const Offset& off : table->offsets) {
        const double r = norm(off.y);
        if (r <= window_lo || r > window_hi) continue;
        const double chi = chi_of(mode, alpha, r);
        if (g.d == 1) {
            const int k = off.k0 & (n - 1);
            const double comp = chi * (off.w0 * off.y[0] + off.w1x);  // int_cell y K
            for (int i = 0; i < n; ++i) {
                const int j = (i + k) & (n - 1);
                const double shifted = off.w0 * (u[j] - u[i]) + off.w1x * gx[j] + 0.5 * off.w2xx * hxx[j];
                out[i] += kernel(t, g.point(i), off.y) * (shifted - comp * gx[i]);
            }
        } else {
            const int k0 = off.k0 & (n - 1), k1 = off.k1 & (n - 1);
            const double compx = chi * (off.w0 * off.y[0] + off.w1x);
            const double compy = chi * (off.w0 * off.y[1] + off.w1y);
            for (int i0 = 0; i0 < n; ++i0) {
                const int j0 = (i0 + k0) & (n - 1);
                for (int i1 = 0; i1 < n; ++i1) {
                    const std::size_t i = static_cast<std::size_t>(i0) * n + i1;
                    const std::size_t j = static_cast<std::size_t>(j0) * n + ((i1 + k1) & (n - 1));
                    const double shifted = off.w0 * (u[j] - u[i]) + off.w1x * gx[j] + off.w1y * gy[j] +
                                           0.5 * (off.w2xx * hxx[j] + 2.0 * off.w2xy * hxy[j] + off.w2yy * hyy[j]);
                    out[i] += kernel(t, g.point(i), off.y) * (shifted - compx * gx[i] - compy * gy[i]);
                }
            }
        }
    }
    return out;
}

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Field apply_A(const KernelSpec& spec, const StableIndex& alpha, double t, const Field& u,
              const LatticeQuadrature& lat, ApplyDiagnostics* diag) {
    return lattice_jump_apply(spec.m, alpha.alpha, ChiMode::principal, t, u, 0.0, kInf, lat, diag);
}

SeparableOperator::SeparableOperator(const Grid& g, const KernelSpec& spec, const StableIndex& alpha, double t,
                                     const SymbolQuadrature& quad) {
    for (const auto& term : spec.separable) {
        KernelSpec profile;
        profile.m = [p = term.profile](double, const Vec&, const Vec& y) { return p(y); };
        profile.K_upper = spec.K_upper;
        profile.x_dependent = false;
        Term built;
        built.mult = symbol_multiplier(g, profile, alpha, t, quad);
        built.coeff = Field(g);
        for (std::size_t i = 0; i < built.coeff.size(); ++i) built.coeff[i] = term.coeff(t, g.point(i));
        terms_.push_back(std::move(built));
    }
}

Field SeparableOperator::apply(const Field& u) const {
    Field out(u.grid);
    for (const auto& term : terms_) {
        Field part = apply_multiplier(u, term.mult);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += term.coeff[i] * part[i];
    }
    return out;
}

double SeparableOperator::norm_bound() const {
    double total = 0.0;
    for (const auto& term : terms_) {
        double mmax = 0.0;
        for (const cplx& c : term.mult) mmax = std::max(mmax, std::abs(c));
        total += max_abs(term.coeff) * mmax;
    }
    return total;
}

// ---- Lower-order operator --------------------------------------------------

namespace {

Field atom_contribution(const LowerOrderSpec& low, const StableIndex& alpha, const Field& u, double r_lo,
                        double r_hi, bool compensate_b_style) {
    Field out(u.grid);
    if (low.atoms.empty()) return out;
    Field gx = derivative(u, 0);
    Field gy = u.grid.d == 2 ? derivative(u, 1) : Field();
    for (const auto& atom : low.atoms) {
        const double r = norm(atom.y);
        if (r <= r_lo || r > r_hi) continue;
        const double chi = compensate_b_style ? chi_of(ChiMode::lower_order, alpha.alpha, r) : 0.0;
        Field shifted = shift(u, atom.y);
        for (std::size_t i = 0; i < out.size(); ++i) {
            double grad_term = gx[i] * atom.y[0] + (u.grid.d == 2 ? gy[i] * atom.y[1] : 0.0);
            out[i] += atom.weight * (shifted[i] - u[i] - chi * grad_term);
        }
    }
    return out;
}

/// Lattice first moment sum_{r_lo<|y_k|<=r_hi} y_k h(t,x,y_k) w_k, matching
/// the cells used by lattice_jump_apply so the B-split is exact.
void lattice_pi_moment(const LowerOrderSpec& low, const Grid& g, double alpha, double t, double r_lo, double r_hi,
                       Field& mx, Field& my) {
    auto table = offset_table(g, alpha);
    for (const Offset& off : table->offsets) {
        const double r = norm(off.y);
        if (r <= r_lo || r > r_hi) continue;
        for (std::size_t i = 0; i < mx.size(); ++i) {
            const double h = low.pi_density(t, g.point(i), off.y);
            mx[i] += h * (off.w0 * off.y[0] + off.w1x);
            if (g.d == 2) my[i] += h * (off.w0 * off.y[1] + off.w1y);
        }
    }
}

}  // namespace

Field apply_B(const LowerOrderSpec& low, const StableIndex& alpha, double t, const Field& u,
              const LatticeQuadrature& lat) {
    const Grid& g = u.grid;
    Field out(g);
    if (low.has_drift() && alpha.alpha > 1.0) {
        Field gx = derivative(u, 0);
        Field gy = g.d == 2 ? derivative(u, 1) : Field();
        for (std::size_t i = 0; i < out.size(); ++i) {
            const Vec b = low.drift(t, g.point(i));
            out[i] += b[0] * gx[i] + (g.d == 2 ? b[1] * gy[i] : 0.0);
        }
    }
    if (low.has_density())
        out += lattice_jump_apply(low.pi_density, alpha.alpha, ChiMode::lower_order, t, u, 0.0, kInf, lat, nullptr);
    out += atom_contribution(low, alpha, u, 0.0, kInf, /*compensate_b_style=*/true);
    return out;
}

Field apply_B_small(const LowerOrderSpec& low, const StableIndex& alpha, double t, const Field& u,
                    const LatticeQuadrature& lat) {
    const Grid& g = u.grid;
    Field out(g);
    Field gx = derivative(u, 0);
    Field gy = g.d == 2 ? derivative(u, 1) : Field();

    // Effective drift: b minus the first moment of the kept middle-range
    // jumps (alpha > 1 only), so that B = B^{eps0} + R exactly.
    if (alpha.alpha > 1.0) {
        Field mx(g), my(g);
        if (low.has_density()) lattice_pi_moment(low, g, alpha.alpha, t, low.eps0, 1.0, mx, my);
        for (const auto& atom : low.atoms) {
            const double r = norm(atom.y);
            if (r > low.eps0 && r <= 1.0)
                for (std::size_t i = 0; i < mx.size(); ++i) {
                    mx[i] += atom.weight * atom.y[0];
                    if (g.d == 2) my[i] += atom.weight * atom.y[1];
                }
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            Vec b = low.has_drift() ? low.drift(t, g.point(i)) : Vec{0.0, 0.0};
            out[i] += (b[0] - mx[i]) * gx[i] + (g.d == 2 ? (b[1] - my[i]) * gy[i] : 0.0);
        }
    }
    if (low.has_density())
        out += lattice_jump_apply(low.pi_density, alpha.alpha, ChiMode::lower_order, t, u, 0.0, low.eps0, lat,
                                  nullptr);
    out += atom_contribution(low, alpha, u, 0.0, low.eps0, /*compensate_b_style=*/true);
    return out;
}

Field apply_B_big(const LowerOrderSpec& low, const StableIndex& alpha, double t, const Field& u,
                  const LatticeQuadrature& lat) {
    Field out(u.grid);
    if (low.has_density())
        out += lattice_jump_apply(low.pi_density, alpha.alpha, ChiMode::none, t, u, low.eps0, kInf, lat, nullptr);
    out += atom_contribution(low, alpha, u, low.eps0, kInf, /*compensate_b_style=*/false);
    return out;
}

// ---- Komatsu representation ------------------------------------------------

double komatsu_kernel(const Vec& z, const Vec& y, int d, double delta) {
    const double p = -d + delta;
    return std::pow(norm(z + y), p) - std::pow(norm(z), p);
}

double komatsu_constant(int d, double delta) {
    const double c1 = std::pow(M_PI, 0.5 * d) * std::pow(2.0, delta) * std::tgamma(0.5 * delta) /
                      std::tgamma(0.5 * (d - delta));
    return -1.0 / (c1 * frac_laplacian_constant(d, delta));
}

namespace {

/// Exact cell averages of |z - c|^{-1+delta} on a 1-d grid (antiderivative
/// sgn(s)|s|^delta / delta).
double cell_avg_pow_1d(double a, double b, double c, double delta) {
    auto F = [&](double z) {
        const double s = z - c;
        return (s >= 0.0 ? 1.0 : -1.0) * std::pow(std::abs(s), delta) / delta;
    };
    return (F(b) - F(a)) / (b - a);
}

}  // namespace

Field komatsu_reconstruct(const Field& v, double delta, const Vec& y) {
    const Grid& g = v.grid;
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("komatsu_reconstruct: delta must lie in (0,1)");
    Field ktab(g);
    const double dx = g.dx();
    if (g.d == 1) {
        for (int i = 0; i < g.n; ++i) {
            const double a = g.coord(i) - 0.5 * dx, b = g.coord(i) + 0.5 * dx;
            ktab[i] = cell_avg_pow_1d(a, b, -y[0], delta) - cell_avg_pow_1d(a, b, 0.0, delta);
        }
    } else {
        for (std::size_t i = 0; i < ktab.size(); ++i) {
            const Vec z = g.point(i);
            const double rs = std::min(norm(z), norm(z + y));
            if (rs < 1.5 * dx) {
                double acc = 0.0;  // 8x8 subsample across the near-singular cell
                for (int a = 0; a < GaussRule::n; ++a)
                    for (int b = 0; b < GaussRule::n; ++b) {
                        const Vec zz = vec2(z[0] + 0.5 * dx * GaussRule::nodes[a],
                                            z[1] + 0.5 * dx * GaussRule::nodes[b]);
                        acc += GaussRule::weights[a] * GaussRule::weights[b] * komatsu_kernel(zz, y, 2, delta);
                    }
                ktab[i] = acc / 4.0;
            } else {
                ktab[i] = komatsu_kernel(z, y, 2, delta);
            }
        }
    }
    Field dv = frac_laplacian(v, delta);
    Field conv = convolve(ktab, dv);
    conv *= komatsu_constant(g.d, delta);
    return conv;
}

double komatsu_l1_norm(double delta, double y, double R, int panels_per_decade) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("komatsu_l1_norm: delta must lie in (0,1)");
    const double ay = std::abs(y);
    if (ay == 0.0) return 0.0;
    auto f = [&](double z) {
        return std::abs(std::pow(std::abs(z + y), -1.0 + delta) - std::pow(std::abs(z), -1.0 + delta));
    };
    // Singularities at 0 and -y; the difference changes sign only at -y/2.
    std::vector<double> cluster = {-y / 2.0};
    for (int j = 0; j <= 40; ++j) {
        const double gpow = ay * std::pow(2.0, -j);
        for (double c : {0.0, -y})
            for (double s : {-1.0, 1.0}) cluster.push_back(c + s * gpow);
    }
    for (int j = 1; j <= 24; ++j) {
        const double gpow = ay * std::pow(2.0, j);
        if (gpow < R)
            for (double s : {-1.0, 1.0}) cluster.push_back(s * gpow);
    }
    cluster.push_back(-R);
    cluster.push_back(R);
    std::sort(cluster.begin(), cluster.end());
    cluster.erase(std::unique(cluster.begin(), cluster.end()), cluster.end());
    std::vector<double> bounds;
    for (double c : cluster)
        if (c >= -R && c <= R) bounds.push_back(c);

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double a = bounds[i], b = bounds[i + 1];
        if (b - a < 1e-300) continue;
        total += integrate_panels({a, 0.5 * (a + b), b}, f);
    }
    // |z| -> infinity tail: |k| ~ (1-delta)|y| |z|^{-2+delta}.
    total += 2.0 * ay * std::pow(R, -1.0 + delta);
    (void)panels_per_decade;
    return total;
}

// ---- L_p certification -----------------------------------------------------

namespace {

double lp_norm_spatial(const Field& f, double p) {
    double acc = 0.0;
    const double vol = std::pow(f.grid.dx(), f.grid.d);
    for (double v : f.values) acc += std::pow(std::abs(v), p);
    return std::pow(acc * vol, 1.0 / p);
}

}  // namespace

LpCertifyRow certify_lp_bound(const KernelSpec& spec, const StableIndex& alpha, double p,
                              const std::vector<Field>& ensemble, double epsilon, const SymbolQuadrature& quad) {
    if (ensemble.empty()) throw std::invalid_argument("certify_lp_bound: empty ensemble");
    const Grid& g = ensemble.front().grid;
    KernelSpec eff = epsilon > 0.0 ? windowed(spec, epsilon, 1.0 / epsilon) : spec;
    Spectrum num_mult = symbol_multiplier(g, eff, alpha, 0.0, quad);
    const double c = frac_laplacian_constant(g.d, alpha.alpha);
    Spectrum den_mult = multiplier_table(g, [&](const Vec& xi) -> cplx { return -c * std::pow(norm(xi), alpha.alpha); });

    LpCertifyRow row;
    row.epsilon = epsilon;
    row.p = p;
    row.ratio_max = 0.0;
    row.tail_mass = epsilon > 0.0
                        ? spec.K_upper * sphere_measure(g.d) * (epsilon + std::pow(epsilon, alpha.alpha) / alpha.alpha)
                        : 0.0;
    for (const Field& u : ensemble) {
        Field den = apply_multiplier(u, den_mult);
        const double dnorm = lp_norm_spatial(den, p);
        if (dnorm < 1e-14 * (lp_norm_spatial(u, p) + 1e-300)) continue;
        Field num = apply_multiplier(u, num_mult);
        row.ratio_max = std::max(row.ratio_max, lp_norm_spatial(num, p) / dnorm);
    }
    return row;
}

std::vector<double> hormander_diagnostic(const KernelSpec& spec, const StableIndex& alpha, double eps,
                                         const std::vector<double>& s_list) {
    if (alpha.alpha >= 1.0) throw std::invalid_argument("hormander_diagnostic: stated for alpha in (0,1)");
    auto k_eps = [&](double x) {
        double acc = 0.0;
        for (double sgn : {-1.0, 1.0}) {
            auto f = [&](double r) {
                const double kk = std::pow(std::abs(x + sgn * r), -1.0 + alpha.alpha) -
                                  std::pow(std::abs(x), -1.0 + alpha.alpha);
                return kk * spec.eval(0.0, vec1(0.0), vec1(sgn * r)) * std::pow(r, -1.0 - alpha.alpha);
            };
            std::vector<double> breaks;
            const double ax = std::abs(x);
            for (int j = -16; j <= 4; ++j) breaks.push_back(ax * std::pow(2.0, j));
            acc += integrate_panels(log_panels(eps, 1.0 / eps, 32, breaks), f);
        }
        return acc;
    };
    std::vector<double> out;
    for (double s : s_list) {
        const double as = std::abs(s);
        auto f = [&](double x) { return std::abs(k_eps(x - s) - k_eps(x)) + std::abs(k_eps(-x - s) - k_eps(-x)); };
        const double lo = 4.0 * as, hi = std::max(1e3, 100.0 * as);
        out.push_back(integrate_panels(log_panels(lo, hi, 8), f));
    }
    return out;
}

}  // namespace levy
