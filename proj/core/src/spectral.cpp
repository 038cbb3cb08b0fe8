#include "levy/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace levy {

namespace {

// FFTW planning is not thread safe; execution on distinct buffers is.
// Plans are cached per (d, n, sign) and created with FFTW_UNALIGNED so they
// can run on any caller buffer.
struct PlanCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int>, fftw_plan> plans;

    fftw_plan get(int d, int n, int sign) {
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(d, n, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        std::size_t total = d == 1 ? n : static_cast<std::size_t>(n) * n;
        std::vector<cplx> scratch_in(total), scratch_out(total);
        auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
        auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
        fftw_plan p = d == 1 ? fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
                             : fftw_plan_dft_2d(n, n, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans[key] = p;
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void run_fft(const Grid& g, Spectrum& buf, int sign) {
    fftw_plan p = cache().get(g.d, g.n, sign);
    Spectrum out(buf.size());
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    buf = std::move(out);
}

}  // namespace

Spectrum forward_complex(const Grid& g, Spectrum in) {
    run_fft(g, in, FFTW_FORWARD);
    return in;
}

Spectrum inverse_complex(const Grid& g, Spectrum in) {
    run_fft(g, in, FFTW_BACKWARD);
    return in;
}

Spectrum spectrum(const Field& f) {
    Spectrum buf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) buf[i] = f[i];
    run_fft(f.grid, buf, FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(f.size());
    for (cplx& c : buf) c *= scale;
    return buf;
}

Field inverse_spectrum(const Grid& g, const Spectrum& c) {
    Spectrum buf = c;
    run_fft(g, buf, FFTW_BACKWARD);
    Field out(g);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i].real();
    return out;
}

Spectrum multiplier_table(const Grid& g, const std::function<cplx(const Vec&)>& mult) {
    Spectrum m(g.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = mult(g.freq_vec(i));
    return m;
}

Field apply_multiplier(const Field& f, const Spectrum& mult_values) {
    Spectrum c = spectrum(f);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= mult_values[i];
    return inverse_spectrum(f.grid, c);
}

Field apply_multiplier(const Field& f, const std::function<cplx(const Vec&)>& mult) {
    return apply_multiplier(f, multiplier_table(f.grid, mult));
}

namespace {

bool is_nyquist(const Grid& g, std::size_t flat, int axis) {
    int j = g.d == 1 ? static_cast<int>(flat) : (axis == 0 ? static_cast<int>(flat) / g.n : static_cast<int>(flat) % g.n);
    return j == g.n / 2;
}

}  // namespace

Field derivative(const Field& f, int axis) {
    Spectrum c = spectrum(f);
    const Grid& g = f.grid;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (is_nyquist(g, i, axis)) {
            c[i] = 0.0;
            continue;
        }
        c[i] *= cplx(0.0, g.freq_vec(i)[axis]);
    }
    return inverse_spectrum(g, c);
}

Field second_derivative(const Field& f, int axis1, int axis2) {
    Spectrum c = spectrum(f);
    const Grid& g = f.grid;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (is_nyquist(g, i, axis1) || is_nyquist(g, i, axis2)) {
            c[i] = 0.0;
            continue;
        }
        const Vec xi = g.freq_vec(i);
        c[i] *= -xi[axis1] * xi[axis2];
    }
    return inverse_spectrum(g, c);
}

Field shift(const Field& f, const Vec& y) {
    Spectrum c = spectrum(f);
    const Grid& g = f.grid;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Vec xi = g.freq_vec(i);
        c[i] *= std::polar(1.0, dot(xi, y));
    }
    return inverse_spectrum(g, c);
}

Field band_limit(const Field& f, int k_max) { return band_pass(f, 0, k_max); }

Field band_pass(const Field& f, int k_min, int k_max) {
    Spectrum c = spectrum(f);
    const Grid& g = f.grid;
    for (std::size_t i = 0; i < c.size(); ++i) {
        int k0, k1 = 0;
        if (g.d == 1) {
            k0 = g.freq_index(static_cast<int>(i));
        } else {
            k0 = g.freq_index(static_cast<int>(i / g.n));
            k1 = g.freq_index(static_cast<int>(i % g.n));
        }
        const int kk = std::max(std::abs(k0), std::abs(k1));
        if (kk > k_max || kk < k_min) c[i] = 0.0;
    }
    return inverse_spectrum(g, c);
}

double eval_offgrid(const Field& f, const Vec& x) {
    const Grid& g = f.grid;
    Spectrum c = spectrum(f);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Vec xi = g.freq_vec(i);
        // The n/2 bin carries both +-Nyquist; for real fields treating it as
        // a cosine halves nothing on-grid but keeps off-grid values real.
        acc += c[i] * std::polar(1.0, xi[0] * (x[0] + g.L) + (g.d == 2 ? xi[1] * (x[1] + g.L) : 0.0));
    }
    return acc.real();
}

SpectralInterpolant::SpectralInterpolant(const Field& f, int upsample) {
    const Grid& g = f.grid;
    fine_ = Grid(g.d, g.L, g.n * upsample);
    Spectrum coarse = spectrum(f);
    Spectrum fine(fine_.size(), cplx(0.0));
    if (g.d == 1) {
        for (int j = 0; j < g.n; ++j) {
            int k = g.freq_index(j);
            if (k == g.n / 2 || k == -g.n / 2) continue;  // drop ambiguous Nyquist
            int jj = k >= 0 ? k : fine_.n + k;
            fine[jj] = coarse[j];
        }
    } else {
        for (int j0 = 0; j0 < g.n; ++j0) {
            int k0 = g.freq_index(j0);
            if (std::abs(k0) == g.n / 2) continue;
            for (int j1 = 0; j1 < g.n; ++j1) {
                int k1 = g.freq_index(j1);
                if (std::abs(k1) == g.n / 2) continue;
                int jj0 = k0 >= 0 ? k0 : fine_.n + k0;
                int jj1 = k1 >= 0 ? k1 : fine_.n + k1;
                fine[static_cast<std::size_t>(jj0) * fine_.n + jj1] =
                    coarse[static_cast<std::size_t>(j0) * g.n + j1];
            }
        }
    }
    Field up = inverse_spectrum(fine_, fine);
    fine_values_ = std::move(up.values);
}

namespace {

inline double catmull_rom(double pm1, double p0, double p1, double p2, double s) {
    return p0 + 0.5 * s * (p1 - pm1 + s * (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2 + s * (3.0 * (p0 - p1) + p2 - pm1)));
}

inline int wrap(int j, int n) {
    j %= n;
    return j < 0 ? j + n : j;
}

}  // namespace

double SpectralInterpolant::operator()(const Vec& x) const {
    const int n = fine_.n;
    const double dx = fine_.dx();
    const double u0 = (x[0] + fine_.L) / dx;
    const int j0 = static_cast<int>(std::floor(u0));
    const double s0 = u0 - j0;
    if (fine_.d == 1) {
        double p[4];
        for (int t = -1; t <= 2; ++t) p[t + 1] = fine_values_[wrap(j0 + t, n)];
        return catmull_rom(p[0], p[1], p[2], p[3], s0);
    }
    const double u1 = (x[1] + fine_.L) / dx;
    const int j1 = static_cast<int>(std::floor(u1));
    const double s1 = u1 - j1;
    double rows[4];
    for (int t0 = -1; t0 <= 2; ++t0) {
        const std::size_t base = static_cast<std::size_t>(wrap(j0 + t0, n)) * n;
        double p[4];
        for (int t1 = -1; t1 <= 2; ++t1) p[t1 + 1] = fine_values_[base + wrap(j1 + t1, n)];
        rows[t0 + 1] = catmull_rom(p[0], p[1], p[2], p[3], s1);
    }
    return catmull_rom(rows[0], rows[1], rows[2], rows[3], s0);
}

Field convolve(const Field& f, const Field& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("convolve: grid mismatch");
    Spectrum a(f.size()), b(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        a[i] = f[i];
        b[i] = g[i];
    }
    a = forward_complex(f.grid, std::move(a));
    b = forward_complex(f.grid, std::move(b));
    const double vol = std::pow(f.grid.dx(), f.grid.d) / static_cast<double>(f.size());
    const Grid& g0 = f.grid;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // e^{i xi_k L} per axis: the coordinate origin sits half a period
        // into the index range, which the raw DFT product does not see.
        int ks = g0.d == 1 ? g0.freq_index(static_cast<int>(i))
                           : g0.freq_index(static_cast<int>(i / g0.n)) + g0.freq_index(static_cast<int>(i % g0.n));
        const double phase = (ks % 2 == 0) ? 1.0 : -1.0;
        a[i] *= b[i] * vol * phase;
    }
    a = inverse_complex(f.grid, std::move(a));
    Field out(f.grid);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i].real();
    return out;
}

}  // namespace levy
