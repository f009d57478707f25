#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "nlss/errors.hpp"

namespace nlss {

using Complex = std::complex<double>;
using cvector = std::vector<Complex>;
using rvector = std::vector<double>;

/// Uniform periodic grid on [-L, L) with signed spectral wavenumbers
/// k_j = pi*j'/L and cached FFTW plans for its transform size.
///
/// Immutable after construction; fields hold a shared_ptr to their grid.
class Grid {
public:
    double half_length; // L, domain is [-L, L)
    int n;              // point count, power of two
    double dx;          // 2L/n
    rvector nodes;      // x_m = -L + m dx
    rvector wavenumbers; // FFT layout: 0, 1, ..., n/2, -(n/2-1), ..., -1 times pi/L

    friend std::shared_ptr<const Grid> make_grid(double L, int n);

    ~Grid() {
        fftw_destroy_plan(plan_fwd_);
        fftw_destroy_plan(plan_bwd_);
    }
    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    // Unnormalized forward DFT; ifft divides by n. in and out may alias.
    void fft(const cvector& in, cvector& out) const {
        exec(plan_fwd_, in, out);
    }
    void ifft(const cvector& in, cvector& out) const {
        exec(plan_bwd_, in, out);
        const double s = 1.0 / n;
        for (auto& v : out) v *= s;
    }

    int mirror_index(int j) const { return j == 0 ? 0 : n - j; }

private:
    fftw_plan plan_fwd_ = nullptr;
    fftw_plan plan_bwd_ = nullptr;

    Grid() = default;

    void exec(const fftw_plan& p, const cvector& in, cvector& out) const {
        if (static_cast<int>(in.size()) != n) throw usage_error("fft: field size does not match grid");
        // plans are out-of-place and FFTW_UNALIGNED, so any distinct
        // complex<double> buffers work; aliased calls go through a copy
        if (&in == &out) {
            cvector tmp(in);
            out.resize(n);
            fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()),
                             reinterpret_cast<fftw_complex*>(out.data()));
            return;
        }
        out.resize(n);
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                         reinterpret_cast<fftw_complex*>(out.data()));
    }
};

inline std::shared_ptr<const Grid> make_grid(double L, int n) {
    if (!(L > 0.0)) throw config_error("make_grid: half length must be positive");
    if (n < 8 || (n & (n - 1)) != 0) throw config_error("make_grid: n must be a power of two and at least 8");
    auto g = std::shared_ptr<Grid>(new Grid());
    g->half_length = L;
    g->n = n;
    g->dx = 2.0 * L / n;
    g->nodes.resize(n);
    g->wavenumbers.resize(n);
    const double dk = M_PI / L;
    for (int m = 0; m < n; ++m) {
        g->nodes[m] = -L + m * g->dx;
        const int sj = (m <= n / 2) ? m : m - n; // signed index, Nyquist kept positive
        g->wavenumbers[m] = dk * sj;
    }
    cvector buf_in(n), buf_out(n);
    auto* raw_in = reinterpret_cast<fftw_complex*>(buf_in.data());
    auto* raw_out = reinterpret_cast<fftw_complex*>(buf_out.data());
    g->plan_fwd_ = fftw_plan_dft_1d(n, raw_in, raw_out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    g->plan_bwd_ = fftw_plan_dft_1d(n, raw_in, raw_out, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!g->plan_fwd_ || !g->plan_bwd_) throw numerical_error("make_grid: FFTW planning failed");
    return g;
}

struct ComplexField {
    std::shared_ptr<const Grid> grid;
    cvector values;

    ComplexField() = default;
    explicit ComplexField(std::shared_ptr<const Grid> g)
        : grid(std::move(g)), values(grid->n, Complex(0.0, 0.0)) {}
    ComplexField(std::shared_ptr<const Grid> g, cvector v) : grid(std::move(g)), values(std::move(v)) {
        if (static_cast<int>(values.size()) != grid->n) throw usage_error("ComplexField: size/grid mismatch");
    }
};

struct RealField {
    std::shared_ptr<const Grid> grid;
    rvector values;

    RealField() = default;
    explicit RealField(std::shared_ptr<const Grid> g) : grid(std::move(g)), values(grid->n, 0.0) {}
    RealField(std::shared_ptr<const Grid> g, rvector v) : grid(std::move(g)), values(std::move(v)) {
        if (static_cast<int>(values.size()) != grid->n) throw usage_error("RealField: size/grid mismatch");
    }
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* who) {
    if (&a != &b && (a.n != b.n || a.half_length != b.half_length))
        throw usage_error(std::string(who) + ": fields live on different grids");
}

/// Spectral Laplacian: transform, multiply by -k^2, transform back.
inline ComplexField laplacian(const ComplexField& f) {
    const Grid& g = *f.grid;
    ComplexField out(f.grid);
    cvector spec(g.n);
    g.fft(f.values, spec);
    for (int j = 0; j < g.n; ++j) {
        const double k = g.wavenumbers[j];
        spec[j] *= -k * k;
    }
    g.ifft(spec, out.values);
    return out;
}

/// Spectral first derivative (multiply by ik; Nyquist mode zeroed for symmetry).
inline ComplexField gradient(const ComplexField& f) {
    const Grid& g = *f.grid;
    ComplexField out(f.grid);
    cvector spec(g.n);
    g.fft(f.values, spec);
    for (int j = 0; j < g.n; ++j) {
        spec[j] *= Complex(0.0, g.wavenumbers[j]);
    }
    spec[g.n / 2] = Complex(0.0, 0.0);
    g.ifft(spec, out.values);
    return out;
}

// compensated accumulation keeps quadrature roundoff flat in n
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

/// Rectangle-rule quadrature dx * sum(values); spectrally accurate for
/// smooth periodic integrands.
inline double integrate(const RealField& f) {
    KahanSum k;
    for (double v : f.values) k.add(v);
    return k.value() * f.grid->dx;
}

inline double integrate(const Grid& g, const rvector& v) {
    if (static_cast<int>(v.size()) != g.n) throw usage_error("integrate: size mismatch");
    KahanSum k;
    for (double x : v) k.add(x);
    return k.value() * g.dx;
}

inline RealField abs2(const ComplexField& f) {
    RealField out(f.grid);
    for (int j = 0; j < f.grid->n; ++j) out.values[j] = std::norm(f.values[j]);
    return out;
}

// dx * sum f conj(g)
inline Complex l2_inner(const ComplexField& f, const ComplexField& g) {
    require_same_grid(*f.grid, *g.grid, "l2_inner");
    KahanSum re, im;
    for (int j = 0; j < f.grid->n; ++j) {
        const Complex p = f.values[j] * std::conj(g.values[j]);
        re.add(p.real());
        im.add(p.imag());
    }
    return Complex(re.value(), im.value()) * f.grid->dx;
}

inline double l2_norm_sq(const ComplexField& f) {
    KahanSum k;
    for (const auto& v : f.values) k.add(std::norm(v));
    return k.value() * f.grid->dx;
}

inline double l2_norm_sq(const RealField& f) {
    KahanSum k;
    for (double v : f.values) k.add(v * v);
    return k.value() * f.grid->dx;
}

inline ComplexField to_complex(const RealField& f) {
    ComplexField out(f.grid);
    for (int j = 0; j < f.grid->n; ++j) out.values[j] = Complex(f.values[j], 0.0);
    return out;
}

inline bool all_finite(const cvector& v) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

inline bool all_finite(const rvector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace nlss
