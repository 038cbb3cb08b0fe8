#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levy/grid.hpp"

namespace levy {

using cplx = std::complex<double>;

/// Order of the nonlocal operator; endpoints 0 and 2 are excluded.
struct StableIndex {
    double alpha;

    explicit StableIndex(double a) : alpha(a) {
        if (!(a > 0.0 && a < 2.0)) throw std::invalid_argument("StableIndex: alpha must lie in (0,2)");
    }

    /// Gradient compensator chi_alpha(y): 1 for alpha > 1, 1_{|y|<=1} for
    /// alpha = 1, 0 for alpha < 1.
    double chi(double r) const {
        if (alpha > 1.0) return 1.0;
        if (alpha == 1.0) return r <= 1.0 ? 1.0 : 0.0;
        return 0.0;
    }
};

/// Raised when a kernel or measure fails one of the structural assumptions
/// (bounds, modulus, ring cancellation, moment conditions).
struct AssumptionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Jump density m(t,x,y) of the principal operator, with its bounds and the
/// x-modulus of continuity.
struct KernelSpec {
    std::function<double(double t, const Vec& x, const Vec& y)> m;
    double K_upper = 1.0;
    double eta = 0.0;   // claimed nondegeneracy constant
    double beta = 0.5;  // Hoelder exponent paired with modulus_w
    std::function<double(double)> modulus_w;
    bool x_dependent = true;
    bool time_dependent = false;

    /// Optional separable structure m(t,x,y) = sum_j a_j(t,x) b_j(y); when
    /// present, operator application may run spectrally term by term.
    struct SeparableTerm {
        std::function<double(double t, const Vec& x)> coeff;
        std::function<double(const Vec& y)> profile;
    };
    std::vector<SeparableTerm> separable;

    /// Closed-form symbol when one is known (constant kernels). Quadrature
    /// remains the reference route; this feeds the high-precision solver path.
    std::function<cplx(double t, const Vec& x, const Vec& xi)> analytic_symbol;

    /// Radial support window (operator-level truncation, exact in the
    /// symbol quadrature). `windowed` sets these; default is no truncation.
    double window_lo = 0.0;
    double window_hi = std::numeric_limits<double>::infinity();

    double eval(double t, const Vec& x, const Vec& y) const { return m(t, x, y); }
};

/// Restricts a kernel to the radial window r_lo < |y| <= r_hi.
KernelSpec windowed(const KernelSpec& spec, double r_lo, double r_hi);

/// Pointwise difference of two kernels (used by the frozen-coefficient
/// splitting); bound metadata is combined conservatively.
KernelSpec kernel_difference(const KernelSpec& a, const KernelSpec& b);

/// Kernel with t replaced by T - t (time reversal of coefficients).
KernelSpec time_reflected(const KernelSpec& spec, double T);

/// Auxiliary minorant m_0(t,y), homogeneous of degree zero in y.
struct AuxKernelSpec {
    std::function<double(double t, const Vec& y)> m0;
    int smoothness_order = 1;  // floor(d/2) + 1
};

/// Discrete jump atom of the perturbing measure pi.
struct JumpAtom {
    Vec y;
    double weight;
};

/// Drift b(t,x) and jump measure pi(t,x,dy) of the lower-order operator,
/// given as a density h(t,x,y) with respect to dy/|y|^{d+alpha} plus atoms.
struct LowerOrderSpec {
    std::function<Vec(double t, const Vec& x)> drift;  // may be empty
    std::function<double(double t, const Vec& x, const Vec& y)> pi_density;  // may be empty
    double pi_density_upper = 0.0;  // sup of the density, dominates thinning
    std::vector<JumpAtom> atoms;
    double eps0 = 1.0;
    double delta0 = 0.0;

    bool has_drift() const { return static_cast<bool>(drift); }
    bool has_density() const { return static_cast<bool>(pi_density); }
};

/// Radial quadrature configuration for symbol evaluation. Below r_min the
/// integrand is summed as a Taylor series with the kernel frozen along each
/// ray; panels carry the integral up to phase osc_cap, and an asymptotic
/// expansion (kernel frozen again) covers the rest of the kernel's radial
/// window.
struct SymbolQuadrature {
    double r_min = 1e-6;
    int panels_per_decade = 16;
    double osc_panel = M_PI / 4.0;  // panel phase width in the oscillatory region
    double osc_cap = 200.0;         // switch to asymptotic tail beyond this phase
    int sphere_nodes = 64;          // d = 2 angular resolution (antipodally paired)
};

/// Symbol psi(t,x,xi) = int [e^{i(xi,y)} - 1 - chi_alpha(y) i(xi,y)] m(t,x,y) dy/|y|^{d+alpha}
/// by compensated radial-angular quadrature. Re psi <= 0 for m >= 0. For
/// alpha = 1 the kernel must satisfy the ring cancellation condition; this is
/// checked once per call unless `skip_alpha1_check`.
cplx eval_symbol(const KernelSpec& spec, const StableIndex& alpha, int d, double t, const Vec& x, const Vec& xi,
                 const SymbolQuadrature& quad = {}, bool skip_alpha1_check = false);

/// min over n_xi unit directions xi of the sphere quadrature of
/// |(w,xi)|^alpha m0(t,w). Throws AssumptionError when the quadrature sees
/// m0 identically zero on the sphere.
double check_nondegeneracy(const AuxKernelSpec& aux, const StableIndex& alpha, int d, double t, int n_xi,
                           int n_sphere);

/// True iff every ring integral int_{r<|y|<=1/r} y m(t,x,y) dy/|y|^{d+1}
/// vanishes within tolerance (assumption required when alpha = 1).
bool check_alpha1_cancellation(const KernelSpec& spec, int d, double t, const Vec& x,
                               const std::vector<double>& r_list, double tol = 1e-8,
                               const SymbolQuadrature& quad = {});

/// Validation report for the sampled-lattice assumption checks.
struct KernelValidation {
    bool bounds_ok = true;
    bool modulus_ok = true;
    bool modulus_decay_ok = true;
    double max_m = 0.0;
    double min_m = 0.0;
    double worst_modulus_excess = 0.0;
    std::string message;
    bool ok() const { return bounds_ok && modulus_ok && modulus_decay_ok; }
};

/// Samples 0 <= m <= K and the x-modulus bound on lattices of the given
/// resolution; modulus decay w(delta) delta^{-beta} -> 0 is checked on a
/// decreasing delta sequence.
KernelValidation validate_kernel(const KernelSpec& spec, int d, double box = M_PI, int n_x = 8, int n_y = 16,
                                 const std::vector<double>& times = {0.0, 0.5, 1.0});

struct LowerOrderValidation {
    bool moment_ok = true;        // |b| + int (|y|^alpha ^ 1) pi <= K
    bool vanishing_ok = true;     // small-jump alpha-moments -> 0
    bool big_jump_finite = true;  // int pi(|y|>eps) finite on samples
    double worst_moment = 0.0;
    std::vector<double> small_moment_sequence;
    bool ok() const { return moment_ok && vanishing_ok && big_jump_finite; }
};

LowerOrderValidation validate_lower_order(const LowerOrderSpec& low, const StableIndex& alpha, int d,
                                          double K_upper, double box = M_PI, int n_x = 8,
                                          const std::vector<double>& times = {0.0, 0.5, 1.0});

/// int_{r_lo<|y|<=r_hi} y m(t,x,y) dy/|y|^{d+alpha} (first jump moment on a
/// radial window; used by compensator corrections and the ring check).
Vec kernel_first_moment(const KernelSpec& spec, const StableIndex& alpha, int d, double t, const Vec& x,
                        double r_lo, double r_hi, const SymbolQuadrature& quad = {});

/// Same first moment for the lower-order density part.
Vec pi_first_moment(const LowerOrderSpec& low, const StableIndex& alpha, int d, double t, const Vec& x,
                    double r_lo, double r_hi, const SymbolQuadrature& quad = {});

/// int_{|y|<=r_hi} y_i y_j m(t,x,y) dy/|y|^{d+alpha} (second moment of the
/// small-jump part; feeds the optional Gaussian correction).
std::array<double, 3> kernel_second_moment(const KernelSpec& spec, const StableIndex& alpha, int d, double t,
                                           const Vec& x, double r_hi, const SymbolQuadrature& quad = {});

// ---- Built-in kernel presets -------------------------------------------

struct KernelPreset {
    KernelSpec kernel;
    AuxKernelSpec aux;
};

/// m identically equal to `value`.
KernelPreset constant_kernel(double value = 1.0);

/// m(y) = 1 on the half space y_1 > 0, zero elsewhere; degenerate on half
/// the sphere yet nondegenerate in the sense of the sphere integral.
KernelPreset half_sphere_kernel();

/// m(t,x,y) = 1 + (1/2) sin(x_1) 1_{y_1 > 0}.
KernelPreset hoelder_mix_kernel();

KernelPreset kernel_preset_by_name(const std::string& name);

}  // namespace levy
