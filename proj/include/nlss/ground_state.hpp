#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlss/errors.hpp"
#include "nlss/functionals.hpp"
#include "nlss/grid.hpp"
#include "nlss/profile.hpp"

namespace nlss {

/// Real radial solution pair of the autonomous elliptic system
///   -1/2 r1'' + r1 = r1 (|r1|^2p + beta |r2|^(p+1) |r1|^(p-1))
///   -1/2 r2'' + r2 = r2 (|r2|^2p + beta |r1|^(p+1) |r2|^(p-1))
struct GroundStatePair {
    RealField r1, r2;
    double p = 1.0;
    double beta = 0.0;
    double m1 = 0.0, m2 = 0.0; // ||r_i||_2^2
    double energy_value = 0.0; // E(R)
    double residual_norm = 0.0;
    bool min_check_passed = true; // constrained-minimum probe outcome
    double min_check_worst = 0.0; // most negative energy increment seen

    const Grid& grid() const { return *r1.grid; }
};

enum class GroundStateAnsatz { symmetric, semitrivial };

namespace detail {

constexpr double kDegenerateFloor = 1e-14;

// |u|^e regularized as (|u|^2 + delta^2)^(e/2) only where |u| < delta, so the
// degenerate factor |u|^(p-1) at p < 1 cannot raise 0^0-type exceptions
inline double pow_guarded(double base, double e) {
    if (base < kDegenerateFloor)
        return std::pow(base * base + kDegenerateFloor * kDegenerateFloor, 0.5 * e);
    return std::pow(base, e);
}

// g_i multiplying r_i on the right-hand side of the elliptic system
inline void coupling_terms(double r1, double r2, double p, double beta, double& g1, double& g2) {
    const double a1 = std::abs(r1), a2 = std::abs(r2);
    if (p == 1.0) {
        g1 = a1 * a1 + beta * a2 * a2;
        g2 = a2 * a2 + beta * a1 * a1;
        return;
    }
    g1 = std::pow(a1, 2.0 * p) + beta * std::pow(a2, p + 1.0) * pow_guarded(a1, p - 1.0);
    g2 = std::pow(a2, 2.0 * p) + beta * std::pow(a1, p + 1.0) * pow_guarded(a2, p - 1.0);
}

// pointwise symmetric Jacobian of (r1 g1, r2 g2) with respect to (r1, r2),
// valid for nonnegative iterates
inline void coupling_jacobian(double r1, double r2, double p, double beta, double& d11, double& d12,
                              double& d22) {
    if (p == 1.0) {
        d11 = 3.0 * r1 * r1 + beta * r2 * r2;
        d12 = 2.0 * beta * r1 * r2;
        d22 = 3.0 * r2 * r2 + beta * r1 * r1;
        return;
    }
    d11 = (2.0 * p + 1.0) * std::pow(r1, 2.0 * p) + p * beta * std::pow(r2, p + 1.0) * pow_guarded(r1, p - 1.0);
    d22 = (2.0 * p + 1.0) * std::pow(r2, 2.0 * p) + p * beta * std::pow(r1, p + 1.0) * pow_guarded(r2, p - 1.0);
    d12 = (p + 1.0) * beta * std::pow(r1, p) * std::pow(r2, p);
}

inline void symmetrize_even(const Grid& g, rvector& v) {
    for (int j = 1; j <= g.n / 2; ++j) {
        const int m = g.n - j;
        const double avg = 0.5 * (v[j] + v[m]);
        v[j] = avg;
        if (m != j) v[m] = avg;
    }
}

// -1/2 Laplacian via spectrum, two components at once
inline void half_laplacian(const Grid& g, const rvector& in, rvector& out) {
    cvector buf(g.n), spec(g.n);
    for (int j = 0; j < g.n; ++j) buf[j] = Complex(in[j], 0.0);
    g.fft(buf, spec);
    for (int j = 0; j < g.n; ++j) spec[j] *= -0.5 * g.wavenumbers[j] * g.wavenumbers[j];
    g.ifft(spec, buf);
    out.resize(g.n);
    for (int j = 0; j < g.n; ++j) out[j] = buf[j].real();
}

// (-1/2 Laplacian + 1)^{-1} via spectrum
inline void helmholtz_inverse(const Grid& g, const rvector& in, rvector& out) {
    cvector buf(g.n), spec(g.n);
    for (int j = 0; j < g.n; ++j) buf[j] = Complex(in[j], 0.0);
    g.fft(buf, spec);
    for (int j = 0; j < g.n; ++j) spec[j] /= 1.0 + 0.5 * g.wavenumbers[j] * g.wavenumbers[j];
    g.ifft(spec, buf);
    out.resize(g.n);
    for (int j = 0; j < g.n; ++j) out[j] = buf[j].real();
}

struct PairVec {
    rvector a, b;
    int size() const { return static_cast<int>(a.size()); }
};

inline double dot(const PairVec& x, const PairVec& y) {
    double s = 0.0;
    for (int j = 0; j < x.size(); ++j) s += x.a[j] * y.a[j] + x.b[j] * y.b[j];
    return s;
}

inline double norm(const PairVec& x) { return std::sqrt(dot(x, x)); }

inline void axpy(double alpha, const PairVec& x, PairVec& y) {
    for (int j = 0; j < x.size(); ++j) {
        y.a[j] += alpha * x.a[j];
        y.b[j] += alpha * x.b[j];
    }
}

inline void scal(double alpha, PairVec& x) {
    for (auto& v : x.a) v *= alpha;
    for (auto& v : x.b) v *= alpha;
}

// GMRES (no restart) on the Fourier-preconditioned Newton system. The
// operator I - P^{-1} D is a compact perturbation of the identity on the
// even subspace, so plain full-memory GMRES converges in a few dozen steps.
template <typename Op>
inline PairVec gmres(const Op& apply, const PairVec& rhs, double rel_tol, int max_iter) {
    const int n = rhs.size();
    PairVec x{rvector(n, 0.0), rvector(n, 0.0)};
    const double beta0 = norm(rhs);
    if (beta0 == 0.0) return x;

    std::vector<PairVec> basis;
    basis.push_back(rhs);
    scal(1.0 / beta0, basis[0]);

    std::vector<rvector> hess; // hess[k] holds column k (k+2 entries)
    rvector cs, sn, g;
    g.push_back(beta0);

    int k = 0;
    for (; k < max_iter; ++k) {
        PairVec w = apply(basis[k]);
        rvector hcol(k + 2, 0.0);
        for (int j = 0; j <= k; ++j) {
            hcol[j] = dot(w, basis[j]);
            axpy(-hcol[j], basis[j], w);
        }
        const double wnorm = norm(w);
        hcol[k + 1] = wnorm;
        for (int j = 0; j < k; ++j) {
            const double t = cs[j] * hcol[j] + sn[j] * hcol[j + 1];
            hcol[j + 1] = -sn[j] * hcol[j] + cs[j] * hcol[j + 1];
            hcol[j] = t;
        }
        const double denom = std::hypot(hcol[k], hcol[k + 1]);
        const double c = denom == 0.0 ? 1.0 : hcol[k] / denom;
        const double s = denom == 0.0 ? 0.0 : hcol[k + 1] / denom;
        cs.push_back(c);
        sn.push_back(s);
        hcol[k] = denom;
        hcol[k + 1] = 0.0;
        g.push_back(-s * g[k]);
        g[k] = c * g[k];
        hess.push_back(hcol);

        const double resid = std::abs(g[k + 1]);
        if (resid <= rel_tol * beta0 || wnorm == 0.0) {
            ++k;
            break;
        }
        scal(1.0 / wnorm, w);
        basis.push_back(std::move(w));
    }

    // back substitution
    rvector y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
        double s = g[i];
        for (int j = i + 1; j < k; ++j) s -= hess[j][i] * y[j];
        y[i] = s / hess[i][i];
    }
    for (int i = 0; i < k; ++i) axpy(y[i], basis[i], x);
    return x;
}

} // namespace detail

/// Componentwise residual of the elliptic system for a candidate pair.
inline std::pair<RealField, RealField> elliptic_residual(const RealField& r1, const RealField& r2,
                                                         double p, double beta) {
    require_same_grid(*r1.grid, *r2.grid, "elliptic_residual");
    const Grid& g = *r1.grid;
    rvector lap1, lap2;
    detail::half_laplacian(g, r1.values, lap1);
    detail::half_laplacian(g, r2.values, lap2);
    RealField out1(r1.grid), out2(r2.grid);
    for (int j = 0; j < g.n; ++j) {
        double g1, g2;
        detail::coupling_terms(r1.values[j], r2.values[j], p, beta, g1, g2);
        out1.values[j] = -lap1[j] + r1.values[j] - r1.values[j] * g1;
        out2.values[j] = -lap2[j] + r2.values[j] - r2.values[j] * g2;
    }
    return {std::move(out1), std::move(out2)};
}

inline std::pair<RealField, RealField> elliptic_residual(const GroundStatePair& R) {
    return elliptic_residual(R.r1, R.r2, R.p, R.beta);
}

inline double sup_norm(const RealField& f) {
    double s = 0.0;
    for (double v : f.values) s = std::max(s, std::abs(v));
    return s;
}

inline double elliptic_residual_sup(const RealField& r1, const RealField& r2, double p, double beta) {
    auto [e1, e2] = elliptic_residual(r1, r2, p, beta);
    return std::max(sup_norm(e1), sup_norm(e2));
}

inline bool is_trivial_pair(const RealField& r1, const RealField& r2, double tol = 1e-12) {
    return sup_norm(r1) < tol && sup_norm(r2) < tol;
}

/// Scalar soliton of -1/2 r'' + r = r^(2p+1):
/// r(x) = (p+1)^(1/2p) sech^(1/p)(sqrt(2) p x).
inline double scalar_soliton(double x, double p) {
    const double s = 1.0 / std::cosh(std::numbers::sqrt2 * p * x);
    return std::pow(p + 1.0, 1.0 / (2.0 * p)) * std::pow(s, 1.0 / p);
}

struct GroundStateOptions {
    double tol = 1e-11;       // residual sup-norm target
    int max_newton = 60;
    int max_gmres = 400;
    double gmres_tol = 1e-13;
    int min_check_samples = 20;
    double min_check_scale = 1e-4;
    std::uint64_t seed = 20240901;
};

/// Newton iteration on the discretized strong-form system, started from a
/// sech ansatz. Iterates are clipped to be nonnegative and symmetrized to
/// even functions; the translation kernel is absent on the even subspace,
/// so the Fourier-preconditioned GMRES solve is well posed. The constrained
/// minimization characterization is probed a posteriori with random
/// mass-preserving tangent perturbations.
inline GroundStatePair solve_ground_state(double p, double beta, std::shared_ptr<const Grid> grid,
                                          GroundStateAnsatz ansatz = GroundStateAnsatz::symmetric,
                                          const GroundStateOptions& opts = {}) {
    if (!(p > 0.0 && p < 2.0)) throw config_error("solve_ground_state: need 0 < p < 2 in one dimension");
    if (beta < 0.0) throw config_error("solve_ground_state: beta must be nonnegative");
    if (!(opts.tol > 0.0)) throw config_error("solve_ground_state: tolerance must be positive");

    const Grid& g = *grid;
    rvector r1(g.n), r2(g.n);
    const double amp_scale =
        ansatz == GroundStateAnsatz::symmetric ? std::pow(1.0 + beta, -1.0 / (2.0 * p)) : 1.0;
    for (int j = 0; j < g.n; ++j) {
        const double base = scalar_soliton(g.nodes[j], p);
        r1[j] = amp_scale * base;
        r2[j] = ansatz == GroundStateAnsatz::symmetric ? amp_scale * base : 0.0;
    }

    auto residual_of = [&](const rvector& a, const rvector& b) {
        return elliptic_residual(RealField(grid, a), RealField(grid, b), p, beta);
    };
    auto sup_of = [&](const std::pair<RealField, RealField>& e) {
        return std::max(sup_norm(e.first), sup_norm(e.second));
    };

    std::vector<double> history;
    double res_sup = sup_of(residual_of(r1, r2));
    history.push_back(res_sup);

    const bool keep_second_zero = ansatz == GroundStateAnsatz::semitrivial;

    for (int iter = 0; iter < opts.max_newton && res_sup > opts.tol; ++iter) {
        auto res = residual_of(r1, r2);

        rvector d11(g.n), d12(g.n), d22(g.n);
        for (int j = 0; j < g.n; ++j)
            detail::coupling_jacobian(r1[j], r2[j], p, beta, d11[j], d12[j], d22[j]);

        auto apply = [&](const detail::PairVec& v) {
            rvector lap_a, lap_b;
            detail::half_laplacian(g, v.a, lap_a);
            detail::half_laplacian(g, v.b, lap_b);
            rvector ja(g.n), jb(g.n);
            for (int j = 0; j < g.n; ++j) {
                ja[j] = -lap_a[j] + v.a[j] - (d11[j] * v.a[j] + d12[j] * v.b[j]);
                jb[j] = -lap_b[j] + v.b[j] - (d12[j] * v.a[j] + d22[j] * v.b[j]);
            }
            detail::PairVec out;
            detail::helmholtz_inverse(g, ja, out.a);
            detail::helmholtz_inverse(g, jb, out.b);
            return out;
        };

        detail::PairVec rhs;
        {
            rvector na(g.n), nb(g.n);
            for (int j = 0; j < g.n; ++j) {
                na[j] = -res.first.values[j];
                nb[j] = -res.second.values[j];
            }
            detail::helmholtz_inverse(g, na, rhs.a);
            detail::helmholtz_inverse(g, nb, rhs.b);
        }

        detail::PairVec delta = detail::gmres(apply, rhs, opts.gmres_tol, opts.max_gmres);

        // damped update with clip-and-symmetrize projection
        double step = 1.0;
        rvector c1, c2;
        double new_sup = res_sup;
        double clip_change = 0.0;
        for (int halving = 0; halving < 12; ++halving) {
            c1 = r1;
            c2 = r2;
            for (int j = 0; j < g.n; ++j) {
                c1[j] += step * delta.a[j];
                if (!keep_second_zero) c2[j] += step * delta.b[j];
            }
            clip_change = 0.0;
            for (int j = 0; j < g.n; ++j) {
                if (c1[j] < 0.0) {
                    clip_change = std::max(clip_change, -c1[j]);
                    c1[j] = 0.0;
                }
                if (c2[j] < 0.0) {
                    clip_change = std::max(clip_change, -c2[j]);
                    c2[j] = 0.0;
                }
            }
            detail::symmetrize_even(g, c1);
            detail::symmetrize_even(g, c2);
            new_sup = sup_of(residual_of(c1, c2));
            if (new_sup < res_sup || new_sup < opts.tol) break;
            step *= 0.5;
        }
        if (clip_change > 1e-6)
            throw convergence_error("solve_ground_state: projection failure, clipping moved iterate by " +
                                    std::to_string(clip_change));
        if (new_sup >= res_sup && new_sup > opts.tol) {
            std::string hist;
            for (double h : history) hist += " " + std::to_string(h);
            throw convergence_error("solve_ground_state: Newton stalled, residual history:" + hist);
        }
        r1 = std::move(c1);
        r2 = std::move(c2);
        res_sup = new_sup;
        history.push_back(res_sup);
    }
    if (res_sup > opts.tol) {
        std::string hist;
        for (double h : history) hist += " " + std::to_string(h);
        throw convergence_error("solve_ground_state: no convergence, residual history:" + hist);
    }

    GroundStatePair R;
    R.r1 = RealField(grid, r1);
    R.r2 = RealField(grid, r2);
    R.p = p;
    R.beta = beta;
    R.m1 = l2_norm_sq(R.r1);
    R.m2 = l2_norm_sq(R.r2);
    R.energy_value = energy(R.r1, R.r2, p, beta);
    R.residual_norm = res_sup;

    // constrained-minimum probe: random tangent perturbations renormalized
    // back to the mass sphere must not lower the energy. Perturbations are
    // enveloped at the soliton's own width so that unstable directions of
    // saddle branches are not washed out.
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double mass_R = R.m1 + R.m2;
    double second_moment = 0.0;
    for (int j = 0; j < g.n; ++j)
        second_moment += g.nodes[j] * g.nodes[j] * (r1[j] * r1[j] + r2[j] * r2[j]);
    second_moment *= g.dx;
    const double env_w = std::max(0.75, 2.0 * std::sqrt(second_moment / mass_R));
    double worst = 0.0;
    for (int s = 0; s < opts.min_check_samples; ++s) {
        rvector w1(g.n, 0.0), w2(g.n, 0.0);
        for (int mode = 0; mode <= 12; ++mode) {
            const double k = mode * M_PI / g.half_length;
            const double a1 = gauss(rng), b1 = gauss(rng), a2 = gauss(rng), b2 = gauss(rng);
            for (int j = 0; j < g.n; ++j) {
                const double x = g.nodes[j];
                w1[j] += a1 * std::cos(k * x) + b1 * std::sin(k * x);
                w2[j] += a2 * std::cos(k * x) + b2 * std::sin(k * x);
            }
        }
        for (int j = 0; j < g.n; ++j) {
            const double e = std::exp(-0.5 * g.nodes[j] * g.nodes[j] / (env_w * env_w));
            w1[j] *= e;
            w2[j] *= e;
        }
        // project onto the tangent space of the total-mass sphere
        double rw = 0.0;
        for (int j = 0; j < g.n; ++j) rw += r1[j] * w1[j] + r2[j] * w2[j];
        rw *= g.dx;
        double ww = 0.0;
        for (int j = 0; j < g.n; ++j) {
            w1[j] -= rw / mass_R * r1[j];
            w2[j] -= rw / mass_R * r2[j];
            ww += w1[j] * w1[j] + w2[j] * w2[j];
        }
        ww = std::sqrt(ww * g.dx);
        if (ww == 0.0) continue;
        rvector u1(g.n), u2(g.n);
        double mass_u = 0.0;
        for (int j = 0; j < g.n; ++j) {
            u1[j] = r1[j] + opts.min_check_scale / ww * w1[j];
            u2[j] = r2[j] + opts.min_check_scale / ww * w2[j];
            mass_u += u1[j] * u1[j] + u2[j] * u2[j];
        }
        mass_u *= g.dx;
        const double rescale = std::sqrt(mass_R / mass_u);
        for (int j = 0; j < g.n; ++j) {
            u1[j] *= rescale;
            u2[j] *= rescale;
        }
        const double de = energy(RealField(grid, u1), RealField(grid, u2), p, beta) - R.energy_value;
        worst = std::min(worst, de);
    }
    R.min_check_worst = worst;
    R.min_check_passed = worst >= -1e-10;
    return R;
}

/// CSV columns x, r1, r2 plus a JSON sidecar with the solve metadata.
inline void save_ground_state(const GroundStatePair& R, const std::string& csv_path,
                              const std::string& json_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw config_error("save_ground_state: cannot open " + csv_path);
    csv << "x,r1,r2\n";
    char line[128];
    const Grid& g = R.grid();
    for (int j = 0; j < g.n; ++j) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", g.nodes[j], R.r1.values[j],
                      R.r2.values[j]);
        csv << line;
    }
    nlohmann::json meta{{"p", R.p},
                        {"beta", R.beta},
                        {"L", g.half_length},
                        {"n", g.n},
                        {"m1", R.m1},
                        {"m2", R.m2},
                        {"energy", R.energy_value},
                        {"residual_norm", R.residual_norm}};
    std::ofstream js(json_path);
    if (!js) throw config_error("save_ground_state: cannot open " + json_path);
    js << meta.dump(2) << "\n";
}

inline GroundStatePair load_ground_state(const std::string& csv_path, const std::string& json_path) {
    std::ifstream js(json_path);
    if (!js) throw config_error("load_ground_state: cannot open " + json_path);
    nlohmann::json meta = nlohmann::json::parse(js);
    const double L = meta.at("L").get<double>();
    const int n = meta.at("n").get<int>();
    auto grid = make_grid(L, n);

    std::ifstream csv(csv_path);
    if (!csv) throw config_error("load_ground_state: cannot open " + csv_path);
    std::string header;
    std::getline(csv, header);
    rvector r1(n), r2(n);
    std::string line;
    int j = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        double x, a, b;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &x, &a, &b) != 3 || j >= n)
            throw config_error("load_ground_state: malformed row: " + line);
        r1[j] = a;
        r2[j] = b;
        ++j;
    }
    if (j != n) throw config_error("load_ground_state: row count does not match sidecar n");
    GroundStatePair R;
    R.r1 = RealField(grid, std::move(r1));
    R.r2 = RealField(grid, std::move(r2));
    R.p = meta.at("p").get<double>();
    R.beta = meta.at("beta").get<double>();
    R.m1 = meta.at("m1").get<double>();
    R.m2 = meta.at("m2").get<double>();
    R.energy_value = meta.at("energy").get<double>();
    R.residual_norm = meta.at("residual_norm").get<double>();
    const double m1_check = l2_norm_sq(R.r1);
    if (std::abs(m1_check - R.m1) > 1e-9 * std::max(1.0, R.m1))
        throw config_error("load_ground_state: stored mass does not match the profile");
    return R;
}

struct GammaResult {
    double gamma = 0.0;
    double y = 0.0;
    double theta1 = 0.0, theta2 = 0.0;
};

namespace detail {

struct H1Correlator {
    const Grid* grid;
    cvector phi1, phi2;   // fields
    cvector dphi1, dphi2; // spectral derivatives
    double phi_h1 = 0.0;  // sum_i ||phi_i||_H1^2
    double prof_h1 = 0.0; // sum_i ||r_i||_H1^2
    const ProfilePair* prof;

    // H1 cross-correlations against both profiles for every grid shift
    void correlations(const RealField& r1, const RealField& r2, cvector& c1, cvector& c2) const {
        const Grid& g = *grid;
        cvector spec_phi(g.n), spec_prof(g.n), prod(g.n);
        auto corr = [&](const cvector& phi, const RealField& r, cvector& out) {
            g.fft(phi, spec_phi);
            g.fft(to_complex(r).values, spec_prof);
            for (int j = 0; j < g.n; ++j) {
                double k = g.wavenumbers[j];
                if (j == g.n / 2) k = 0.0;
                prod[j] = (1.0 + k * k) * spec_phi[j] * std::conj(spec_prof[j]);
            }
            g.ifft(prod, out);
            for (auto& v : out) v *= g.dx;
        };
        corr(phi1, r1, c1);
        corr(phi2, r2, c2);
    }

    // off-grid H1 inner products <phi_i, r_i(. - y)> via the dense tables
    void inner_at(double y, Complex& c1, Complex& c2) const {
        const Grid& g = *grid;
        c1 = Complex(0.0, 0.0);
        c2 = Complex(0.0, 0.0);
        const double rad = prof->support_radius;
        int j0 = static_cast<int>(std::floor((y - rad + g.half_length) / g.dx)) - 1;
        int j1 = static_cast<int>(std::ceil((y + rad + g.half_length) / g.dx)) + 1;
        j0 = std::max(j0, 0);
        j1 = std::min(j1, g.n - 1);
        for (int j = j0; j <= j1; ++j) {
            const double u = g.nodes[j] - y;
            c1 += phi1[j] * prof->r1(u) + dphi1[j] * prof->dr1(u);
            c2 += phi2[j] * prof->r2(u) + dphi2[j] * prof->dr2(u);
        }
        c1 *= g.dx;
        c2 *= g.dx;
    }

    double objective(double y) const {
        Complex c1, c2;
        inner_at(y, c1, c2);
        return phi_h1 + prof_h1 - 2.0 * (std::abs(c1) + std::abs(c2));
    }
};

inline double golden_minimize(const std::function<double(double)>& f, double lo, double hi, int iters) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

} // namespace detail

/// Modulation functional: squared H1 distance from Phi to the orbit of R
/// under translations and componentwise phase rotations,
///   Gamma = inf_{theta1,theta2,y} || Phi - (e^{i theta1} r1(.-y), e^{i theta2} r2(.-y)) ||_H1^2.
/// Phases are eliminated in closed form (theta_i* = arg <phi_i, r_i(.-y)>_H1);
/// the shift is located by a grid-stride correlation scan plus golden-section
/// refinement.
inline GammaResult gamma_phi(const ComplexField& phi1, const ComplexField& phi2,
                             const GroundStatePair& R, const ProfilePair& prof) {
    require_same_grid(*phi1.grid, R.grid(), "gamma_phi");
    require_same_grid(*phi2.grid, R.grid(), "gamma_phi");
    const Grid& g = R.grid();

    const double mass_phi = std::sqrt(l2_norm_sq(phi1) + l2_norm_sq(phi2));
    const double mass_R = std::sqrt(R.m1 + R.m2);
    if (std::abs(mass_phi - mass_R) > 1e-6)
        throw usage_error("gamma_phi: field is not on the mass sphere of R");

    detail::H1Correlator corr;
    corr.grid = &g;
    corr.phi1 = phi1.values;
    corr.phi2 = phi2.values;
    corr.dphi1 = gradient(phi1).values;
    corr.dphi2 = gradient(phi2).values;
    corr.phi_h1 = l2_norm_sq(phi1) + l2_norm_sq(phi2) + l2_norm_sq(ComplexField(phi1.grid, corr.dphi1)) +
                  l2_norm_sq(ComplexField(phi2.grid, corr.dphi2));
    const RealField dr1(R.r1.grid, [&] {
        auto d = gradient(to_complex(R.r1));
        rvector v(g.n);
        for (int j = 0; j < g.n; ++j) v[j] = d.values[j].real();
        return v;
    }());
    const RealField dr2(R.r2.grid, [&] {
        auto d = gradient(to_complex(R.r2));
        rvector v(g.n);
        for (int j = 0; j < g.n; ++j) v[j] = d.values[j].real();
        return v;
    }());
    corr.prof_h1 = R.m1 + R.m2 + l2_norm_sq(dr1) + l2_norm_sq(dr2);
    corr.prof = &prof;

    cvector c1, c2;
    corr.correlations(R.r1, R.r2, c1, c2);
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int m = 0; m < g.n; ++m) {
        const double val = corr.phi_h1 + corr.prof_h1 - 2.0 * (std::abs(c1[m]) + std::abs(c2[m]));
        if (val < best_val) {
            best_val = val;
            best = m;
        }
    }
    double y0 = best * g.dx;
    if (y0 >= g.half_length) y0 -= 2.0 * g.half_length;

    const double y_star = detail::golden_minimize([&](double y) { return corr.objective(y); },
                                                  y0 - g.dx, y0 + g.dx, 60);
    Complex i1, i2;
    corr.inner_at(y_star, i1, i2);
    GammaResult out;
    out.gamma = std::max(0.0, corr.phi_h1 + corr.prof_h1 - 2.0 * (std::abs(i1) + std::abs(i2)));
    out.y = y_star;
    out.theta1 = std::abs(i1) > 0.0 ? std::arg(i1) : 0.0;
    out.theta2 = std::abs(i2) > 0.0 ? std::arg(i2) : 0.0;
    if (out.theta1 < 0.0) out.theta1 += 2.0 * M_PI;
    if (out.theta2 < 0.0) out.theta2 += 2.0 * M_PI;
    return out;
}

inline GammaResult gamma_phi(const ComplexField& phi1, const ComplexField& phi2, const GroundStatePair& R) {
    const ProfilePair prof = ProfilePair::from_fields(R.r1, R.r2, R.m1, R.m2);
    return gamma_phi(phi1, phi2, R, prof);
}

struct StabilitySample {
    double gamma = 0.0;
    double denergy = 0.0;
};

struct StabilityScaleReport {
    double scale = 0.0;
    std::vector<StabilitySample> samples;
    double max_ratio = 0.0;
    double min_denergy = 0.0;
};

struct StabilityProbeReport {
    std::vector<StabilityScaleReport> scales;
    bool all_energy_nonneg = true; // every dE >= -1e-10
    bool ratio_stable = true;      // max ratios within factor 3 across scales
};

/// Empirical probe of the modulational stability inequality
/// Gamma_Phi <= C (E(Phi) - E(R)) on the mass sphere: draws K random smooth
/// perturbations at the given scale and at scale/2, scale/4, and reports the
/// observed max ratio per scale.
inline StabilityProbeReport modulational_stability_probe(const GroundStatePair& R, int K, double scale,
                                                         std::uint64_t seed = 7,
                                                         double gamma_bound = 0.25) {
    StabilityProbeReport report;
    if (K <= 0) return report;
    const Grid& g = R.grid();
    const ProfilePair prof = ProfilePair::from_fields(R.r1, R.r2, R.m1, R.m2);
    const double mass_R = R.m1 + R.m2;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double second_moment = 0.0;
    for (int j = 0; j < g.n; ++j)
        second_moment += g.nodes[j] * g.nodes[j] *
                         (R.r1.values[j] * R.r1.values[j] + R.r2.values[j] * R.r2.values[j]);
    second_moment *= g.dx;
    const double env_w = std::max(0.75, 2.0 * std::sqrt(second_moment / mass_R));

    for (int level = 0; level < 3; ++level) {
        const double s = scale / (1 << level);
        StabilityScaleReport sr;
        sr.scale = s;
        sr.min_denergy = std::numeric_limits<double>::infinity();
        for (int sample = 0; sample < K; ++sample) {
            cvector w1(g.n, Complex(0.0, 0.0)), w2(g.n, Complex(0.0, 0.0));
            for (int mode = 0; mode <= 10; ++mode) {
                const double k = mode * M_PI / g.half_length;
                const Complex a1(gauss(rng), gauss(rng)), b1(gauss(rng), gauss(rng));
                const Complex a2(gauss(rng), gauss(rng)), b2(gauss(rng), gauss(rng));
                for (int j = 0; j < g.n; ++j) {
                    const double x = g.nodes[j];
                    w1[j] += a1 * std::cos(k * x) + b1 * std::sin(k * x);
                    w2[j] += a2 * std::cos(k * x) + b2 * std::sin(k * x);
                }
            }
            double wnorm = 0.0;
            for (int j = 0; j < g.n; ++j) {
                const double e = std::exp(-0.5 * g.nodes[j] * g.nodes[j] / (env_w * env_w));
                w1[j] *= e;
                w2[j] *= e;
                wnorm += std::norm(w1[j]) + std::norm(w2[j]);
            }
            wnorm = std::sqrt(wnorm * g.dx);
            if (wnorm == 0.0) continue;

            ComplexField u1(R.r1.grid), u2(R.r2.grid);
            double mass_u = 0.0;
            for (int j = 0; j < g.n; ++j) {
                u1.values[j] = Complex(R.r1.values[j], 0.0) + s / wnorm * w1[j];
                u2.values[j] = Complex(R.r2.values[j], 0.0) + s / wnorm * w2[j];
                mass_u += std::norm(u1.values[j]) + std::norm(u2.values[j]);
            }
            mass_u *= g.dx;
            const double rescale = std::sqrt(mass_R / mass_u);
            for (int j = 0; j < g.n; ++j) {
                u1.values[j] *= rescale;
                u2.values[j] *= rescale;
            }

            StabilitySample smp;
            smp.denergy = energy(u1, u2, R.p, R.beta) - R.energy_value;
            smp.gamma = gamma_phi(u1, u2, R, prof).gamma;
            if (smp.gamma > gamma_bound)
                throw usage_error("modulational_stability_probe: perturbation left the Gamma < A regime");
            sr.samples.push_back(smp);
            sr.min_denergy = std::min(sr.min_denergy, smp.denergy);
            if (smp.denergy < -1e-10) report.all_energy_nonneg = false;
            if (smp.denergy > 1e-13) sr.max_ratio = std::max(sr.max_ratio, smp.gamma / smp.denergy);
        }
        report.scales.push_back(std::move(sr));
    }

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& sr : report.scales) {
        if (sr.max_ratio > 0.0) {
            lo = std::min(lo, sr.max_ratio);
            hi = std::max(hi, sr.max_ratio);
        }
    }
    report.ratio_stable = hi > 0.0 && hi <= 3.0 * lo;
    return report;
}

} // namespace nlss
