#pragma once

#include <optional>

#include "levy/grid.hpp"
#include "levy/jump_kernel.hpp"
#include "levy/spectral.hpp"

namespace levy {

/// Generator-form fractional Laplacian: spectral multiplier
/// -c_{d,kappa} |xi|^kappa on Fourier coefficients (nonpositive definite).
Field frac_laplacian(const Field& v, double kappa);

/// Per-mode symbol table psi(xi_k) for an x-independent kernel, for use as a
/// spectral multiplier. The kernel is evaluated at x = 0.
Spectrum symbol_multiplier(const Grid& g, const KernelSpec& spec, const StableIndex& alpha, double t,
                           const SymbolQuadrature& quad = {});

struct ApplyDiagnostics {
    double tail_mass = 0.0;  // int_{|y| > L - dx/2} dy/|y|^{d+alpha}, dropped by truncation
};

/// Lattice-quadrature options for the jump operators.
struct LatticeQuadrature {
    double near_cell_factor = 2.0;  // cells with |y| < factor*dx use the Hessian form
};

/// Principal operator A u(t,.) = int grad_y^alpha u(x) m(t,x,y) dy/|y|^{d+alpha}
/// by compensated lattice quadrature: jumps wrap around the torus, the
/// kernel is truncated at |y| <= L - dx/2 and the neglected tail mass is
/// reported through `diag`.
Field apply_A(const KernelSpec& spec, const StableIndex& alpha, double t, const Field& u,
              const LatticeQuadrature& lat = {}, ApplyDiagnostics* diag = nullptr);

/// Spectral application of A for kernels with separable structure
/// m = sum_j a_j(t,x) b_j(y): per-term symbol multipliers times coefficient
/// fields. Built once, applied per time step.
class SeparableOperator {
  public:
    SeparableOperator() = default;
    SeparableOperator(const Grid& g, const KernelSpec& spec, const StableIndex& alpha, double t,
                      const SymbolQuadrature& quad = {});
    bool valid() const { return !terms_.empty(); }
    Field apply(const Field& u) const;
    /// Upper bound on the operator norm, used by step-size stability checks.
    double norm_bound() const;

  private:
    struct Term {
        Field coeff;
        Spectrum mult;
    };
    std::vector<Term> terms_;
};

/// Lower-order operator
///   B u = (b, grad u) 1_{alpha>1} + int [u(x+y)-u(x)-(grad u,y) 1_{|y|<=1} 1_{alpha>1}] pi(t,x,dy).
Field apply_B(const LowerOrderSpec& low, const StableIndex& alpha, double t, const Field& u,
              const LatticeQuadrature& lat = {});

/// Small-jump part B^{eps0}: effective drift plus the compensated jump
/// integral over |y| <= eps0. Defined so that B = B^{eps0} + R holds exactly
/// on the lattice.
Field apply_B_small(const LowerOrderSpec& low, const StableIndex& alpha, double t, const Field& u,
                    const LatticeQuadrature& lat = {});

/// Big-jump remainder R u = int_{|y|>eps0} [u(x+y)-u(x)] pi(t,x,dy).
Field apply_B_big(const LowerOrderSpec& low, const StableIndex& alpha, double t, const Field& u,
                  const LatticeQuadrature& lat = {});

// ---- Komatsu representation ----------------------------------------------

/// k^{(delta)}(z, y) = |z+y|^{-d+delta} - |z|^{-d+delta}.
double komatsu_kernel(const Vec& z, const Vec& y, int d, double delta);

/// Right side of the shift identity u(x+y)-u(x) = C int k^{(delta)}(z,y)
/// d^delta u(x-z) dz, with the kernel tabulated cell-averaged on the grid
/// and the convolution taken over the torus. Validation oracle only.
Field komatsu_reconstruct(const Field& v, double delta, const Vec& y);

/// int |k^{(delta)}(z,y)| dz over z in [-R, R] (d = 1) by panel quadrature
/// with the |z|->infinity tail added analytically.
double komatsu_l1_norm(double delta, double y, double R = 1e4, int panels_per_decade = 16);

/// Constant C(delta, d) of the shift identity.
double komatsu_constant(int d, double delta);

// ---- L_p boundedness certification ----------------------------------------

struct LpCertifyRow {
    double epsilon;  // radial truncation (0 = untruncated)
    double p;
    double ratio_max;   // max over the ensemble of |L_alpha u|_p / |d^alpha u|_p
    double tail_mass;   // dominating-kernel mass outside the truncation window
};

/// Empirical constant of |L_alpha u|_p <= C K |d^alpha u|_p for an
/// x-independent kernel: both sides applied spectrally (the truncated
/// operator through its quadrature symbol), max ratio over the ensemble.
/// Fields with |d^alpha u|_p below 1e-14 of their own L_p norm are skipped.
LpCertifyRow certify_lp_bound(const KernelSpec& spec, const StableIndex& alpha, double p,
                              const std::vector<Field>& ensemble, double epsilon = 0.0,
                              const SymbolQuadrature& quad = {});

/// Slow d = 1 diagnostic for the Hoermander condition
/// int_{|x|>4|s|} |k_eps(x-s) - k_eps(x)| dx, reported for each s.
std::vector<double> hormander_diagnostic(const KernelSpec& spec, const StableIndex& alpha, double eps,
                                         const std::vector<double>& s_list);

}  // namespace levy
