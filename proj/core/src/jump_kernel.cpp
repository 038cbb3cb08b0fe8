#include "levy/jump_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levy/quadrature.hpp"
#include "levy/special.hpp"

namespace levy {

namespace {

constexpr double kSeriesEdge = 1e-3;  // below this phase the integrand is summed as a series

/// int_a^b s^{mu-1} ds, with the mu = 0 log case.
double power_integral(double a, double b, double mu) {
    if (b <= a) return 0.0;
    if (std::abs(mu) < 1e-12) return std::log(b / a);
    return (std::pow(b, mu) - std::pow(a, mu)) / mu;
}

double cos_minus_one(double s) {
    const double h = std::sin(0.5 * s);
    return -2.0 * h * h;
}

double sin_minus_s(double s) {
    if (std::abs(s) < 1e-3) {
        const double s2 = s * s;
        return -s * s2 / 6.0 * (1.0 - s2 / 20.0 * (1.0 - s2 / 42.0));
    }
    return std::sin(s) - s;
}

/// int_a^b [cos s - 1] s^{-1-alpha} ds for [a,b] inside [0, kSeriesEdge].
double series_re(double a, double b, double alpha) {
    if (b <= a) return 0.0;
    auto P = [&](double k) { return power_integral(a, b, k - alpha); };
    return -P(2.0) / 2.0 + P(4.0) / 24.0 - P(6.0) / 720.0;
}

/// int_a^b [sin s - s*chi] s^{-1-alpha} ds for [a,b] inside [0, kSeriesEdge],
/// with chi constant on the interval.
double series_im(double a, double b, double alpha, bool chi) {
    if (b <= a) return 0.0;
    auto P = [&](double k) { return power_integral(a, b, k - alpha); };
    if (chi) return -P(3.0) / 6.0 + P(5.0) / 120.0 - P(7.0) / 5040.0;
    return P(1.0) - P(3.0) / 6.0 + P(5.0) / 120.0;
}

/// Four-term asymptotic expansion of int_c^infty e^{is} s^{-beta} ds,
/// valid for large c (used beyond the oscillatory cap).
cplx oscillatory_tail(double c, double beta) {
    const cplx i(0.0, 1.0);
    cplx corr = 1.0 - i * (beta + 2.0) / c;
    corr = 1.0 - i * (beta + 1.0) / c * corr;
    corr = 1.0 - i * beta / c * corr;
    return i * std::polar(1.0, c) * std::pow(c, -beta) * corr;
}

struct RayResult {
    double re = 0.0;
    double im = 0.0;
};

/// Scaled radial integral along one ray over the kernel's window [w_lo, w_hi]
/// (phase units):
///   J = int_{w_lo}^{w_hi} [cos s - 1 + i(sin s - s*chi(s))] M(s) s^{-1-alpha} ds
/// where M(s) = m(t, x, (s/|theta|) w) and chi reflects the compensator in
/// the scaled variable. Below the series edge and beyond the oscillation cap
/// the kernel is frozen along the ray and the integral handled analytically.
RayResult ray_integral(const std::function<double(double)>& M, double alpha, double theta_abs, double w_lo,
                       double w_hi, const SymbolQuadrature& quad) {
    RayResult out;
    const double s_edge = std::min(std::max(theta_abs * quad.r_min, 0.0), kSeriesEdge);
    const double s_chi = alpha == 1.0 ? theta_abs : (alpha > 1.0 ? std::numeric_limits<double>::infinity() : 0.0);

    // Series piece [w_lo, min(s_edge, w_hi)].
    const double ser_hi = std::min(s_edge, w_hi);
    if (ser_hi > w_lo) {
        const double m_bar = M(0.5 * (w_lo + ser_hi));
        out.re += m_bar * series_re(w_lo, ser_hi, alpha);
        if (alpha >= 1.0) {
            const double b1 = std::clamp(s_chi, w_lo, ser_hi);
            out.im += m_bar * series_im(w_lo, b1, alpha, true);
            out.im += m_bar * series_im(b1, ser_hi, alpha, false);
        } else {
            out.im += m_bar * series_im(w_lo, ser_hi, alpha, false);
        }
    }

    // Panel quadrature [max(w_lo, s_edge), min(w_hi, osc_cap)].
    const double p_lo = std::max(w_lo, s_edge);
    const double p_hi = std::min(w_hi, quad.osc_cap);
    if (p_hi > p_lo) {
        std::vector<double> breaks;
        if (alpha == 1.0) breaks.push_back(s_chi);
        const double mid = std::clamp(1.0, p_lo, p_hi);
        auto lo_part = log_panels(p_lo, mid, quad.panels_per_decade, breaks);
        auto hi_part = linear_panels(mid, p_hi, quad.osc_panel, breaks);
        auto chi_at = [&](double s) { return alpha > 1.0 || (alpha == 1.0 && s <= s_chi); };
        auto f_re = [&](double s) { return cos_minus_one(s) * M(s) * std::pow(s, -1.0 - alpha); };
        auto f_im = [&](double s) {
            const double osc = chi_at(s) ? sin_minus_s(s) : std::sin(s);
            return osc * M(s) * std::pow(s, -1.0 - alpha);
        };
        out.re += integrate_panels(lo_part, f_re) + integrate_panels(hi_part, f_re);
        out.im += integrate_panels(lo_part, f_im) + integrate_panels(hi_part, f_im);
    }

    // Asymptotic tail [max(p_hi, w_lo), w_hi], kernel frozen at the start.
    const double t_lo = std::max(p_hi, w_lo);
    if (w_hi > t_lo) {
        const double m_bar = M(t_lo);
        const cplx osc = oscillatory_tail(t_lo, 1.0 + alpha) -
                         (std::isfinite(w_hi) ? oscillatory_tail(w_hi, 1.0 + alpha) : cplx(0.0));
        out.re += m_bar * (osc.real() - power_integral(t_lo, w_hi, -alpha));
        out.im += m_bar * osc.imag();
        if (alpha > 1.0) {
            out.im -= m_bar * power_integral(t_lo, w_hi, 1.0 - alpha);
        } else if (alpha == 1.0 && s_chi > t_lo) {
            out.im -= m_bar * power_integral(t_lo, std::min(s_chi, w_hi), 0.0);
        }
    }
    return out;
}

/// Unit directions and sphere-measure weights, listed in antipodal pairs.
std::vector<std::pair<Vec, double>> sphere_nodes(int d, int n_sphere) {
    if (d == 1) return {{vec1(1.0), 1.0}, {vec1(-1.0), 1.0}};
    if (n_sphere < 8 || n_sphere % 2 != 0)
        throw std::invalid_argument("sphere_nodes: need an even node count >= 8 for d = 2");
    std::vector<std::pair<Vec, double>> nodes;
    nodes.reserve(n_sphere);
    const double w = 2.0 * M_PI / n_sphere;
    for (int j = 0; j < n_sphere; ++j) {
        const double th = 2.0 * M_PI * (j + 0.5) / n_sphere;
        nodes.push_back({vec2(std::cos(th), std::sin(th)), w});
    }
    return nodes;
}

}  // namespace

cplx eval_symbol(const KernelSpec& spec, const StableIndex& alpha, int d, double t, const Vec& x, const Vec& xi,
                 const SymbolQuadrature& quad, bool skip_alpha1_check) {
    if (alpha.alpha == 1.0 && !skip_alpha1_check) {
        if (!check_alpha1_cancellation(spec, d, t, x, {0.5, 0.1, 0.01}, 1e-7, quad))
            throw AssumptionError("eval_symbol: alpha = 1 kernel fails the ring cancellation condition; the symbol would be cutoff dependent");
    }
    const double xi_norm = norm(xi);
    if (xi_norm == 0.0) return 0.0;
    cplx acc = 0.0;
    for (const auto& [w, weight] : sphere_nodes(d, quad.sphere_nodes)) {
        const double theta = dot(xi, w);
        if (std::abs(theta) < 1e-14 * xi_norm) continue;
        const double ta = std::abs(theta);
        auto M = [&](double s) { return spec.eval(t, x, (s / ta) * w); };
        const RayResult J = ray_integral(M, alpha.alpha, ta, ta * spec.window_lo, ta * spec.window_hi, quad);
        const double sgn = theta > 0.0 ? 1.0 : -1.0;
        acc += weight * std::pow(ta, alpha.alpha) * cplx(J.re, sgn * J.im);
    }
    return acc;
}

double check_nondegeneracy(const AuxKernelSpec& aux, const StableIndex& alpha, int d, double t, int n_xi,
                           int n_sphere) {
    if (n_xi < 8 || n_sphere < 8) throw std::invalid_argument("check_nondegeneracy: need n_xi, n_sphere >= 8");
    if (d != 1 && d != 2) throw std::invalid_argument("check_nondegeneracy: d must be 1 or 2");
    auto nodes = sphere_nodes(d, d == 1 ? 8 : (n_sphere % 2 ? n_sphere + 1 : n_sphere));
    double max_m0 = 0.0;
    for (const auto& [w, weight] : nodes) max_m0 = std::max(max_m0, aux.m0(t, w));
    if (max_m0 <= 0.0)
        throw AssumptionError("check_nondegeneracy: m0 vanishes on every sphere node; nondegeneracy fails");

    double worst = std::numeric_limits<double>::infinity();
    const int xi_count = d == 1 ? 1 : n_xi;
    for (int i = 0; i < xi_count; ++i) {
        Vec xi = d == 1 ? vec1(1.0) : vec2(std::cos(M_PI * i / xi_count), std::sin(M_PI * i / xi_count));
        double integral = 0.0;
        for (const auto& [w, weight] : nodes)
            integral += weight * std::pow(std::abs(dot(w, xi)), alpha.alpha) * aux.m0(t, w);
        worst = std::min(worst, integral);
    }
    return worst;
}

Vec kernel_first_moment(const KernelSpec& spec, const StableIndex& alpha, int d, double t, const Vec& x,
                        double r_lo, double r_hi, const SymbolQuadrature& quad) {
    Vec total = {0.0, 0.0};
    const double r_cap = std::min(r_hi, std::max(1e3, 10.0 * std::max(r_lo, 1.0)));
    const double r_floor = std::max(r_lo, 1e-9);
    for (const auto& [w, weight] : sphere_nodes(d, quad.sphere_nodes)) {
        auto f = [&](double r) { return spec.eval(t, x, r * w) * std::pow(r, -alpha.alpha); };
        double radial = 0.0;
        if (r_cap > r_floor)
            radial += integrate_panels(log_panels(r_floor, r_cap, quad.panels_per_decade, {1.0}), f);
        if (r_hi > r_cap && alpha.alpha > 1.0)  // frozen-kernel power tail
            radial += spec.eval(t, x, r_cap * w) * power_integral(r_cap, r_hi, 1.0 - alpha.alpha);
        if (r_lo < r_floor && alpha.alpha < 1.0)
            radial += spec.eval(t, x, (0.5 * r_floor) * w) * power_integral(r_lo, r_floor, 1.0 - alpha.alpha);
        total = total + (weight * radial) * w;
    }
    return total;
}

Vec pi_first_moment(const LowerOrderSpec& low, const StableIndex& alpha, int d, double t, const Vec& x,
                    double r_lo, double r_hi, const SymbolQuadrature& quad) {
    Vec total = {0.0, 0.0};
    if (low.has_density()) {
        KernelSpec tmp;
        tmp.m = low.pi_density;
        tmp.K_upper = low.pi_density_upper;
        total = kernel_first_moment(tmp, alpha, d, t, x, r_lo, r_hi, quad);
    }
    for (const auto& atom : low.atoms) {
        const double r = norm(atom.y);
        if (r > r_lo && r <= r_hi) total = total + atom.weight * atom.y;
    }
    return total;
}

std::array<double, 3> kernel_second_moment(const KernelSpec& spec, const StableIndex& alpha, int d, double t,
                                           const Vec& x, double r_hi, const SymbolQuadrature& quad) {
    std::array<double, 3> total = {0.0, 0.0, 0.0};
    const double r_floor = std::min(1e-8 * r_hi, r_hi);
    for (const auto& [w, weight] : sphere_nodes(d, quad.sphere_nodes)) {
        auto f = [&](double r) { return spec.eval(t, x, r * w) * std::pow(r, 1.0 - alpha.alpha); };
        double radial = integrate_panels(log_panels(r_floor, r_hi, quad.panels_per_decade), f);
        radial += spec.eval(t, x, (0.5 * r_floor) * w) * power_integral(0.0, r_floor, 2.0 - alpha.alpha);
        total[0] += weight * radial * w[0] * w[0];
        total[1] += weight * radial * w[0] * w[1];
        total[2] += weight * radial * w[1] * w[1];
    }
    return total;
}

bool check_alpha1_cancellation(const KernelSpec& spec, int d, double t, const Vec& x,
                               const std::vector<double>& r_list, double tol, const SymbolQuadrature& quad) {
    const StableIndex one(1.0);
    for (double r : r_list) {
        if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("check_alpha1_cancellation: radii must lie in (0,1)");
        const Vec ring = kernel_first_moment(spec, one, d, t, x, r, 1.0 / r, quad);
        const double scale = spec.K_upper * sphere_measure(d) * 2.0 * std::log(1.0 / r) + 1e-30;
        if (norm(ring) > tol * scale) return false;
    }
    return true;
}

KernelSpec windowed(const KernelSpec& spec, double r_lo, double r_hi) {
    KernelSpec out = spec;
    auto base = spec.m;
    out.m = [base, r_lo, r_hi](double t, const Vec& x, const Vec& y) {
        const double r = norm(y);
        return (r > r_lo && r <= r_hi) ? base(t, x, y) : 0.0;
    };
    out.window_lo = std::max(spec.window_lo, r_lo);
    out.window_hi = std::min(spec.window_hi, r_hi);
    out.analytic_symbol = nullptr;
    out.separable.clear();
    for (const auto& term : spec.separable) {
        auto prof = term.profile;
        out.separable.push_back({term.coeff, [prof, r_lo, r_hi](const Vec& y) {
                                     const double r = norm(y);
                                     return (r > r_lo && r <= r_hi) ? prof(y) : 0.0;
                                 }});
    }
    return out;
}

KernelSpec kernel_difference(const KernelSpec& a, const KernelSpec& b) {
    KernelSpec out = a;
    auto ma = a.m, mb = b.m;
    out.m = [ma, mb](double t, const Vec& x, const Vec& y) { return ma(t, x, y) - mb(t, x, y); };
    out.K_upper = a.K_upper + b.K_upper;
    out.analytic_symbol = nullptr;
    out.separable.clear();
    if (!a.separable.empty() && !b.separable.empty()) {
        out.separable = a.separable;
        for (const auto& term : b.separable) {
            auto c = term.coeff;
            out.separable.push_back({[c](double t, const Vec& x) { return -c(t, x); }, term.profile});
        }
    }
    return out;
}

KernelSpec time_reflected(const KernelSpec& spec, double T) {
    KernelSpec out = spec;
    auto base = spec.m;
    out.m = [base, T](double t, const Vec& x, const Vec& y) { return base(T - t, x, y); };
    out.separable.clear();
    for (const auto& term : spec.separable) {
        auto c = term.coeff;
        out.separable.push_back({[c, T](double t, const Vec& x) { return c(T - t, x); }, term.profile});
    }
    if (spec.analytic_symbol) {
        auto sym = spec.analytic_symbol;
        out.analytic_symbol = [sym, T](double t, const Vec& x, const Vec& xi) { return sym(T - t, x, xi); };
    }
    return out;
}

KernelValidation validate_kernel(const KernelSpec& spec, int d, double box, int n_x, int n_y,
                                 const std::vector<double>& times) {
    KernelValidation rep;
    rep.min_m = std::numeric_limits<double>::infinity();
    const double slack = 1e-9 * std::max(1.0, spec.K_upper);

    std::vector<Vec> xs;
    for (int i = 0; i < n_x; ++i) {
        const double xi = -box + 2.0 * box * i / n_x;
        if (d == 1) {
            xs.push_back(vec1(xi));
        } else {
            for (int j = 0; j < n_x; ++j) xs.push_back(vec2(xi, -box + 2.0 * box * j / n_x));
        }
    }
    std::vector<Vec> ys;
    for (int k = 0; k < n_y; ++k) {
        const double r = std::pow(10.0, -3.0 + 5.0 * k / (n_y - 1));
        if (d == 1) {
            ys.push_back(vec1(r));
            ys.push_back(vec1(-r));
        } else {
            for (int a = 0; a < 8; ++a) {
                const double th = 2.0 * M_PI * (a + 0.5) / 8;
                ys.push_back(vec2(r * std::cos(th), r * std::sin(th)));
            }
        }
    }

    for (double t : times) {
        for (const auto& x : xs) {
            for (const auto& y : ys) {
                const double v = spec.eval(t, x, y);
                rep.max_m = std::max(rep.max_m, v);
                rep.min_m = std::min(rep.min_m, v);
                if (v < -slack || v > spec.K_upper + slack) rep.bounds_ok = false;
            }
        }
        if (spec.modulus_w) {
            for (std::size_t i = 0; i < xs.size(); ++i) {
                for (std::size_t stride : {std::size_t(1), std::size_t(3)}) {
                    if (i + stride >= xs.size()) continue;
                    const Vec& x1 = xs[i];
                    const Vec& x2 = xs[i + stride];
                    const double bound = spec.modulus_w(norm(x1 - x2)) + slack;
                    for (const auto& y : ys) {
                        const double gap = std::abs(spec.eval(t, x1, y) - spec.eval(t, x2, y));
                        if (gap > bound) {
                            rep.modulus_ok = false;
                            rep.worst_modulus_excess = std::max(rep.worst_modulus_excess, gap - bound);
                        }
                    }
                }
            }
        }
    }

    if (spec.modulus_w) {
        double first = -1.0, last = 0.0, prev_w = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 24; ++k) {
            const double delta = std::pow(2.0, -k);
            const double wv = spec.modulus_w(delta);
            if (wv > prev_w + slack) rep.modulus_decay_ok = false;  // w must be nondecreasing
            prev_w = wv;
            const double ratio = wv * std::pow(delta, -spec.beta);
            if (first < 0.0) first = ratio;
            last = ratio;
        }
        if (!(last <= 0.1 * first || last < 1e-10)) rep.modulus_decay_ok = false;
    }

    if (!rep.ok()) rep.message = "kernel failed sampled assumption checks";
    return rep;
}

LowerOrderValidation validate_lower_order(const LowerOrderSpec& low, const StableIndex& alpha, int d,
                                          double K_upper, double box, int n_x, const std::vector<double>& times) {
    LowerOrderValidation rep;
    const SymbolQuadrature quad;
    std::vector<Vec> xs;
    for (int i = 0; i < n_x; ++i) {
        const double xi = -box + 2.0 * box * i / n_x;
        if (d == 1)
            xs.push_back(vec1(xi));
        else
            xs.push_back(vec2(xi, box * (i % 2 ? 0.5 : -0.5)));
    }

    auto alpha_moment = [&](double t, const Vec& x, double r_lo, double r_hi, bool capped) {
        double total = 0.0;
        if (low.has_density()) {
            for (const auto& [w, weight] : sphere_nodes(d, quad.sphere_nodes)) {
                auto f = [&](double r) {
                    const double g = capped ? std::min(std::pow(r, alpha.alpha), 1.0) : std::pow(r, alpha.alpha);
                    return g * low.pi_density(t, x, r * w) * std::pow(r, -1.0 - alpha.alpha);
                };
                total += weight * integrate_panels(log_panels(std::max(r_lo, 1e-8), r_hi, 16, {1.0}), f);
            }
        }
        for (const auto& atom : low.atoms) {
            const double r = norm(atom.y);
            if (r > r_lo && r <= r_hi)
                total += atom.weight * (capped ? std::min(std::pow(r, alpha.alpha), 1.0) : std::pow(r, alpha.alpha));
        }
        return total;
    };

    double worst = 0.0;
    std::vector<double> seq;
    for (double t : times) {
        for (const auto& x : xs) {
            const double bmag = low.has_drift() ? norm(low.drift(t, x)) : 0.0;
            const double mom = bmag + alpha_moment(t, x, 0.0, 1e6, true);
            worst = std::max(worst, mom);
            if (!std::isfinite(mom)) rep.big_jump_finite = false;
        }
    }
    rep.worst_moment = worst;
    if (worst > K_upper * (1.0 + 1e-6)) rep.moment_ok = false;

    for (int k = 1; k <= 5; ++k) {
        const double eps = std::pow(10.0, -k);
        double sup = 0.0;
        for (double t : times)
            for (const auto& x : xs) sup = std::max(sup, alpha_moment(t, x, 0.0, eps, false));
        seq.push_back(sup);
    }
    rep.small_moment_sequence = seq;
    if (!(seq.back() <= 0.2 * (seq.front() + 1e-300) || seq.back() < 1e-10)) rep.vanishing_ok = false;
    return rep;
}

// ---- Presets -------------------------------------------------------------

KernelPreset constant_kernel(double value) {
    KernelPreset p;
    p.kernel.m = [value](double, const Vec&, const Vec&) { return value; };
    p.kernel.K_upper = value;
    p.kernel.eta = 2.0 * value;  // d = 1 sphere integral
    p.kernel.beta = 0.5;
    p.kernel.modulus_w = [](double) { return 0.0; };
    p.kernel.x_dependent = false;
    p.kernel.time_dependent = false;
    p.kernel.separable = {{[](double, const Vec&) { return 1.0; }, [value](const Vec&) { return value; }}};
    p.kernel.analytic_symbol = nullptr;  // filled by callers that know (alpha, d)
    p.aux.m0 = [value](double, const Vec&) { return value; };
    p.aux.smoothness_order = 1;
    return p;
}

KernelPreset half_sphere_kernel() {
    KernelPreset p;
    auto ind = [](const Vec& y) { return y[0] > 0.0 ? 1.0 : 0.0; };
    p.kernel.m = [ind](double, const Vec&, const Vec& y) { return ind(y); };
    p.kernel.K_upper = 1.0;
    p.kernel.eta = 1.0;
    p.kernel.beta = 0.5;
    p.kernel.modulus_w = [](double) { return 0.0; };
    p.kernel.x_dependent = false;
    p.kernel.separable = {{[](double, const Vec&) { return 1.0; }, ind}};
    p.aux.m0 = [ind](double, const Vec& y) { return ind(y); };
    return p;
}

KernelPreset hoelder_mix_kernel() {
    KernelPreset p;
    auto ind = [](const Vec& y) { return y[0] > 0.0 ? 1.0 : 0.0; };
    p.kernel.m = [ind](double, const Vec& x, const Vec& y) { return 1.0 + 0.5 * std::sin(x[0]) * ind(y); };
    p.kernel.K_upper = 1.5;
    p.kernel.eta = 1.0;  // m >= 1/2, d = 1 sphere integral of the minorant
    p.kernel.beta = 0.5;
    p.kernel.modulus_w = [](double delta) { return 0.5 * std::min(delta, 2.0); };
    p.kernel.x_dependent = true;
    p.kernel.separable = {{[](double, const Vec&) { return 1.0; }, [](const Vec&) { return 1.0; }},
                          {[](double, const Vec& x) { return 0.5 * std::sin(x[0]); }, ind}};
    p.aux.m0 = [](double, const Vec&) { return 0.5; };
    return p;
}

KernelPreset kernel_preset_by_name(const std::string& name) {
    if (name == "constant") return constant_kernel();
    if (name == "half-sphere") return half_sphere_kernel();
    if (name == "hoelder-mix") return hoelder_mix_kernel();
    throw std::invalid_argument("unknown kernel preset: " + name);
}

}  // namespace levy
