#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace levy {

/// Point / jump vector in d <= 2 dimensions. For d = 1 the second
/// component is kept at zero.
using Vec = std::array<double, 2>;

inline Vec vec1(double x) { return {x, 0.0}; }
inline Vec vec2(double x, double y) { return {x, y}; }

inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec operator*(double c, const Vec& a) { return {c * a[0], c * a[1]}; }

/// Uniform periodic grid on [-L, L)^d with n points per axis (power of two).
/// Points x_j = -L + j*dx, spacing dx = 2L/n. The frequency lattice is
/// xi_k = pi*k/L with integer k in [-n/2, n/2).
struct Grid {
    int d = 1;
    double L = M_PI;
    int n = 64;

    Grid() = default;
    Grid(int d_, double L_, int n_) : d(d_), L(L_), n(n_) {
        if (d != 1 && d != 2) throw std::invalid_argument("Grid: d must be 1 or 2");
        if (L <= 0.0) throw std::invalid_argument("Grid: L must be positive");
        if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("Grid: n must be a power of two >= 2");
    }

    double dx() const { return 2.0 * L / n; }
    std::size_t size() const { return d == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n; }

    /// Coordinate of node index along one axis.
    double coord(int j) const { return -L + j * dx(); }

    Vec point(std::size_t flat) const {
        if (d == 1) return vec1(coord(static_cast<int>(flat)));
        return vec2(coord(static_cast<int>(flat / n)), coord(static_cast<int>(flat % n)));
    }

    /// Signed integer frequency for FFT bin j (j in [0, n)).
    int freq_index(int j) const { return j < n / 2 ? j : j - n; }

    /// Continuum frequency xi for FFT bin j.
    double freq(int j) const { return M_PI * freq_index(j) / L; }

    Vec freq_vec(std::size_t flat) const {
        if (d == 1) return vec1(freq(static_cast<int>(flat)));
        return vec2(freq(static_cast<int>(flat / n)), freq(static_cast<int>(flat % n)));
    }

    bool operator==(const Grid& o) const { return d == o.d && L == o.L && n == o.n; }
};

/// Real scalar field sampled on a periodic grid (one time slice).
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }

    Field& operator+=(const Field& o) {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
        return *this;
    }
    Field& operator-=(const Field& o) {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
        return *this;
    }
    Field& operator*=(double c) {
        for (double& v : values) v *= c;
        return *this;
    }
};

inline Field operator+(Field a, const Field& b) { a += b; return a; }
inline Field operator-(Field a, const Field& b) { a -= b; return a; }
inline Field operator*(double c, Field a) { a *= c; return a; }

/// Trajectory of fields on a uniform partition of [0, T]; slice k holds u(t_k).
struct SpaceTimeField {
    Grid grid;
    double T = 1.0;
    std::vector<Field> slices;  // n_t + 1 slices, t_k = k*T/n_t

    SpaceTimeField() = default;
    SpaceTimeField(const Grid& g, double T_, int n_t) : grid(g), T(T_), slices(n_t + 1, Field(g)) {
        if (n_t < 1) throw std::invalid_argument("SpaceTimeField: n_t must be >= 1");
    }

    int n_steps() const { return static_cast<int>(slices.size()) - 1; }
    double dt() const { return T / n_steps(); }
    double time(int k) const { return k * dt(); }
    Field& operator[](int k) { return slices[k]; }
    const Field& operator[](int k) const { return slices[k]; }
};

/// Sample a smooth function onto a grid.
template <typename F>
Field sample(const Grid& g, F&& f) {
    Field out(g);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(g.point(i));
    return out;
}

double max_abs(const Field& f);
double rel_l2_error(const Field& approx, const Field& ref);

}  // namespace levy
