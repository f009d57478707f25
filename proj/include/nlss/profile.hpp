#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "nlss/grid.hpp"

namespace nlss {

/// Band-limited resampling of a stored radial profile.
///
/// The Fourier spectrum of the grid samples is zero-padded to a dense table
/// (up to 2^20 points), after which off-grid values come from local 4-point
/// Lagrange interpolation on the table. For the smooth, spectrally resolved
/// profiles this reproduces the trigonometric interpolant to roundoff.
/// Outside [-L, L) the profile is treated as zero (tails sit below 1e-12
/// by grid-policy construction).
class ProfileTable {
public:
    ProfileTable() = default;

    ProfileTable(const RealField& profile, bool derivative = false) {
        const Grid& g = *profile.grid;
        L_ = g.half_length;
        const int n = g.n;
        int nt = n;
        while (nt < (1 << 20) && nt < n * 1024) nt *= 2;
        nt_ = nt;
        h_ = 2.0 * L_ / nt;

        cvector spec(n);
        g.fft(to_complex(profile).values, spec);
        if (derivative) {
            for (int j = 0; j < n; ++j) spec[j] *= Complex(0.0, g.wavenumbers[j]);
            spec[n / 2] = Complex(0.0, 0.0);
        }
        // zero-padded spectrum; Nyquist split keeps the result real and even
        cvector big(nt, Complex(0.0, 0.0));
        for (int j = 0; j <= n / 2; ++j) big[j] = spec[j];
        for (int j = n / 2 + 1; j < n; ++j) big[nt - n + j] = spec[j];
        big[n / 2] *= 0.5;
        big[nt - n / 2] += big[n / 2];

        auto gt = make_grid(L_, nt);
        cvector dense;
        gt->ifft(big, dense);
        const double scale = static_cast<double>(nt) / n;
        table_.resize(nt);
        for (int j = 0; j < nt; ++j) table_[j] = dense[j].real() * scale;
    }

    double operator()(double y) const {
        if (std::abs(y) > L_) return 0.0;
        const double u = (y + L_) / h_;
        const int i1 = static_cast<int>(std::floor(u));
        const double t = u - i1;
        const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
        return w0 * at(i1 - 1) + w1 * at(i1) + w2 * at(i1 + 1) + w3 * at(i1 + 2);
    }

    double half_length() const { return L_; }

private:
    double at(int i) const {
        i &= (nt_ - 1); // nt_ is a power of two
        return table_[i];
    }

    double L_ = 0.0;
    int nt_ = 0;
    double h_ = 0.0;
    rvector table_;
};

/// Both components of a ground state plus spectral derivatives, ready for
/// evaluation at scaled arguments (x - c)/eps.
struct ProfilePair {
    ProfileTable r1, r2, dr1, dr2;
    double m1 = 0.0, m2 = 0.0;
    double support_radius = 0.0; // |y| beyond which both components are negligible

    static ProfilePair from_fields(const RealField& f1, const RealField& f2, double m1, double m2,
                                   double tail_tol = 1e-11) {
        ProfilePair p;
        p.r1 = ProfileTable(f1);
        p.r2 = ProfileTable(f2);
        p.dr1 = ProfileTable(f1, true);
        p.dr2 = ProfileTable(f2, true);
        p.m1 = m1;
        p.m2 = m2;
        const Grid& g = *f1.grid;
        double peak = 0.0;
        for (int j = 0; j < g.n; ++j)
            peak = std::max({peak, std::abs(f1.values[j]), std::abs(f2.values[j])});
        double rad = 0.0;
        for (int j = 0; j < g.n; ++j) {
            if (std::abs(f1.values[j]) > tail_tol * peak || std::abs(f2.values[j]) > tail_tol * peak)
                rad = std::max(rad, std::abs(g.nodes[j]));
        }
        p.support_radius = std::min(rad + 2.0, g.half_length);
        return p;
    }
};

} // namespace nlss
