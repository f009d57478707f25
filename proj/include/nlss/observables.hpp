#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "nlss/errors.hpp"
#include "nlss/functionals.hpp"
#include "nlss/grid.hpp"
#include "nlss/ground_state.hpp"
#include "nlss/hamiltonian.hpp"
#include "nlss/potential.hpp"
#include "nlss/profile.hpp"
#include "nlss/wave.hpp"

namespace nlss {

/// One time sample of every tracked observable. Column order of the CSV
/// schema matches the field order here.
struct DiagnosticsRecord {
    double t = 0.0;
    double N1 = 0.0, N2 = 0.0;      // rescaled masses
    double E = 0.0, E1 = 0.0, E2 = 0.0;
    double center1 = 0.0, center2 = 0.0;
    double Ptot = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0;
    double eta1 = 0.0, eta2 = 0.0;
    double gamma1 = 0.0, gamma2 = 0.0;
    double Gamma = 0.0;             // modulation distance of the derotated field
    double Heps = 0.0;              // distance to the pinned modulated family
    double dualM1 = 0.0, dualM2 = 0.0, dualP = 0.0;
    double theta1 = 0.0, theta2 = 0.0;
};

inline const char* diagnostics_csv_header() {
    return "t,N1,N2,E,E1,E2,center1,center2,Ptot,alpha1,alpha2,eta1,eta2,gamma1,gamma2,Gamma,Heps,"
           "dualM1,dualM2,dualP,theta1,theta2";
}

inline void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& recs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("write_diagnostics_csv: cannot open " + path);
    out << diagnostics_csv_header() << "\n";
    char line[1024];
    for (const auto& r : recs) {
        std::snprintf(line, sizeof(line),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.t, r.N1, r.N2, r.E, r.E1, r.E2, r.center1, r.center2, r.Ptot, r.alpha1, r.alpha2,
                      r.eta1, r.eta2, r.gamma1, r.gamma2, r.Gamma, r.Heps, r.dualM1, r.dualM2, r.dualP,
                      r.theta1, r.theta2);
        out << line;
    }
}

/// Momentum density p^eps = eps^{1-N} Im(conj(phi) grad phi); in one
/// dimension the prefactor is 1.
inline RealField momentum_density(const ComplexField& phi, double eps) {
    (void)eps; // eps^{1-N} = 1 for N = 1
    const ComplexField g = gradient(phi);
    RealField out(phi.grid);
    for (int j = 0; j < phi.grid->n; ++j)
        out.values[j] = std::imag(std::conj(phi.values[j]) * g.values[j]);
    return out;
}

/// Plateau cutoff: 1 on |x| < A, 0 beyond 2A, quintic-smoothstep ramp in
/// between (C^2 at the junctions).
struct Cutoff {
    double A = 1.0;

    double operator()(double x) const {
        const double ax = std::abs(x);
        if (ax <= A) return 1.0;
        if (ax >= 2.0 * A) return 0.0;
        const double u = (ax - A) / A;
        const double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
        return 1.0 - s;
    }
};

/// Cutoff radius from the planned trajectory plus five soliton widths,
/// clamped so that the ramp dies inside the domain.
inline Cutoff make_cutoff(double trajectory_sup, double soliton_width, double half_length) {
    double A = trajectory_sup + 5.0 * soliton_width;
    A = std::max(A, trajectory_sup + 1.0);
    A = std::min(A, 0.475 * half_length);
    return Cutoff{A};
}

namespace detail {

inline void check_synchronized(const WavePair& w, const PhasePoint& s) {
    if (std::abs(w.t - s.t) > 1e-9 * std::max(1.0, std::abs(w.t)))
        throw usage_error("observables: field and phase point are at different times");
}

} // namespace detail

/// Momentum defects alpha_i = int p_i dx - m_i xi_i.
inline std::pair<double, double> defect_alpha(const WavePair& w, const PhasePoint& s) {
    detail::check_synchronized(w, s);
    const ComplexField f1{w.grid, w.phi1}, f2{w.grid, w.phi2};
    const double P1 = integrate(momentum_density(f1, w.eps));
    const double P2 = integrate(momentum_density(f2, w.eps));
    return {P1 - w.mass1() * s.xi1, P2 - w.mass2() * s.xi2};
}

/// Potential-energy defects
/// eta_1 = m_1 V(x_1) - eps^-1 int chi V |phi_1|^2 (and the W copy).
inline std::pair<double, double> defect_eta(const WavePair& w, const PhasePoint& s, const Potential& V,
                                            const Potential& W, const Cutoff& chi) {
    detail::check_synchronized(w, s);
    const Grid& g = *w.grid;
    double i1 = 0.0, i2 = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double c = chi(g.nodes[j]);
        if (c == 0.0) continue;
        i1 += c * V.value(g.nodes[j]) * std::norm(w.phi1[j]);
        i2 += c * W.value(g.nodes[j]) * std::norm(w.phi2[j]);
    }
    i1 *= g.dx / w.eps;
    i2 *= g.dx / w.eps;
    return {w.mass1() * V.value(s.x1) - i1, w.mass2() * W.value(s.x2) - i2};
}

/// Center defects gamma_i = m_i x_i - eps^-1 int x chi |phi_i|^2.
inline std::pair<double, double> defect_gamma(const WavePair& w, const PhasePoint& s, const Cutoff& chi) {
    detail::check_synchronized(w, s);
    const Grid& g = *w.grid;
    double i1 = 0.0, i2 = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double xc = g.nodes[j] * chi(g.nodes[j]);
        if (xc == 0.0) continue;
        i1 += xc * std::norm(w.phi1[j]);
        i2 += xc * std::norm(w.phi2[j]);
    }
    i1 *= g.dx / w.eps;
    i2 *= g.dx / w.eps;
    return {w.mass1() * s.x1 - i1, w.mass2() * s.x2 - i2};
}

/// Component and total energies of the eps-scaled system:
/// E_i = (2 eps^{N-2})^{-1} ||grad phi_i||^2 + eps^{-N} int V_i |phi_i|^2
///       - (2 eps^N)^{-1} int F_beta(Phi).
inline std::tuple<double, double, double> energy_components(const WavePair& w, const Potential& V,
                                                            const Potential& W) {
    const Grid& g = *w.grid;
    const ComplexField f1{w.grid, w.phi1}, f2{w.grid, w.phi2};
    const double kin1 = 0.5 * w.eps * l2_norm_sq(gradient(f1));
    const double kin2 = 0.5 * w.eps * l2_norm_sq(gradient(f2));
    double pot1 = 0.0, pot2 = 0.0, fb = 0.0;
    for (int j = 0; j < g.n; ++j) {
        pot1 += V.value(g.nodes[j]) * std::norm(w.phi1[j]);
        pot2 += W.value(g.nodes[j]) * std::norm(w.phi2[j]);
        fb += f_beta_abs(std::abs(w.phi1[j]), std::abs(w.phi2[j]), w.p, w.beta);
    }
    pot1 *= g.dx / w.eps;
    pot2 *= g.dx / w.eps;
    fb *= 0.5 * g.dx / w.eps;
    const double e1 = kin1 + pot1 - fb;
    const double e2 = kin2 + pot2 - fb;
    return {e1, e2, e1 + e2};
}

/// Rescaled-norm distance
/// || Phi - Q ||_{H_eps} = sqrt( eps^-1 ||Phi-Q||_2^2 + eps ||grad(Phi-Q)||_2^2 ).
inline double h_eps_distance(const WavePair& a, const WavePair& b) {
    require_same_grid(*a.grid, *b.grid, "h_eps_distance");
    if (a.eps != b.eps) throw usage_error("h_eps_distance: eps mismatch");
    const Grid& g = *a.grid;
    ComplexField d1(a.grid), d2(a.grid);
    for (int j = 0; j < g.n; ++j) {
        d1.values[j] = a.phi1[j] - b.phi1[j];
        d2.values[j] = a.phi2[j] - b.phi2[j];
    }
    const double l2 = l2_norm_sq(d1) + l2_norm_sq(d2);
    const double h1 = l2_norm_sq(gradient(d1)) + l2_norm_sq(gradient(d2));
    return std::sqrt(l2 / a.eps + a.eps * h1);
}

inline std::pair<double, double> mass_centers(const WavePair& w) {
    const Grid& g = *w.grid;
    double c1 = 0.0, c2 = 0.0;
    for (int j = 0; j < g.n; ++j) {
        c1 += g.nodes[j] * std::norm(w.phi1[j]);
        c2 += g.nodes[j] * std::norm(w.phi2[j]);
    }
    c1 *= g.dx / w.eps;
    c2 *= g.dx / w.eps;
    return {c1 / w.mass1(), c2 / w.mass2()};
}

struct ModulationFit {
    double theta1 = 0.0, theta2 = 0.0; // optimal phase angles
    double heps = 0.0;                 // H_eps distance to the pinned family member
    double gamma = 0.0;                // modulation functional of the derotated field
    double gamma_center = 0.0;         // minimizing center of the derotated-field scan
    bool in_tube = true;
};

namespace detail {

struct WindowQuad {
    int j0 = 0, j1 = -1;
};

inline WindowQuad support_window(const Grid& g, double center, double radius) {
    WindowQuad w;
    w.j0 = std::max(0, static_cast<int>(std::floor((center - radius + g.half_length) / g.dx)) - 1);
    w.j1 = std::min(g.n - 1, static_cast<int>(std::ceil((center + radius + g.half_length) / g.dx)) + 1);
    return w;
}

} // namespace detail

/// Phase extraction against the family member pinned at the Hamiltonian
/// state: the shift is x_1(t) and the velocities are xi_i(t); only the
/// componentwise phases are optimized (in closed form). Also evaluates the
/// modulation functional of the derotated field
///   u_i(x) = e^{-i xi_i x / eps} phi_i(x)
/// against the eps-scaled profile orbit, scanning the center near x_1(t).
inline ModulationFit best_fit_modulation(const WavePair& w, const ProfilePair& prof, const PhasePoint& s,
                                         double gamma_bound = 0.5) {
    detail::check_synchronized(w, s);
    const Grid& g = *w.grid;
    const double eps = w.eps;
    const double c = s.x1;

    const ComplexField f1{w.grid, w.phi1}, f2{w.grid, w.phi2};
    const ComplexField g1 = gradient(f1), g2 = gradient(f2);

    const double w1 = l2_norm_sq(f1) / eps + eps * l2_norm_sq(g1);
    const double w2 = l2_norm_sq(f2) / eps + eps * l2_norm_sq(g2);

    // H_eps inner products against q_i^0 = r_i((x-c)/eps) e^{i x xi_i/eps}
    const double rad = eps * prof.support_radius;
    const auto win = detail::support_window(g, c, rad);
    Complex a1(0.0, 0.0), a2(0.0, 0.0);
    double v1 = 0.0, v2 = 0.0;
    for (int j = win.j0; j <= win.j1; ++j) {
        const double x = g.nodes[j];
        const double u = (x - c) / eps;
        const double r1 = prof.r1(u), r2 = prof.r2(u);
        const double d1 = prof.dr1(u) / eps, d2 = prof.dr2(u) / eps;
        const Complex e1 = std::polar(1.0, x * s.xi1 / eps);
        const Complex e2 = std::polar(1.0, x * s.xi2 / eps);
        const Complex q1 = r1 * e1, q2 = r2 * e2;
        const Complex dq1 = (Complex(d1, 0.0) + Complex(0.0, s.xi1 / eps) * r1) * e1;
        const Complex dq2 = (Complex(d2, 0.0) + Complex(0.0, s.xi2 / eps) * r2) * e2;
        a1 += w.phi1[j] * std::conj(q1) / eps + eps * g1.values[j] * std::conj(dq1);
        a2 += w.phi2[j] * std::conj(q2) / eps + eps * g2.values[j] * std::conj(dq2);
        v1 += std::norm(q1) / eps + eps * std::norm(dq1);
        v2 += std::norm(q2) / eps + eps * std::norm(dq2);
    }
    a1 *= g.dx;
    a2 *= g.dx;
    v1 *= g.dx;
    v2 *= g.dx;

    ModulationFit fit;
    fit.theta1 = std::abs(a1) > 0.0 ? std::arg(a1) : 0.0;
    fit.theta2 = std::abs(a2) > 0.0 ? std::arg(a2) : 0.0;
    if (fit.theta1 < 0.0) fit.theta1 += 2.0 * M_PI;
    if (fit.theta2 < 0.0) fit.theta2 += 2.0 * M_PI;
    fit.heps = std::sqrt(std::max(0.0, w1 + v1 - 2.0 * std::abs(a1) + w2 + v2 - 2.0 * std::abs(a2)));

    // derotated field u_i = e^{-i xi_i x/eps} phi_i; its H_eps distance to the
    // unrotated scaled orbit equals the H1 distance of the paper's rescaled
    // field to the R orbit
    ComplexField u1(w.grid), u2(w.grid);
    for (int j = 0; j < g.n; ++j) {
        const double x = g.nodes[j];
        u1.values[j] = w.phi1[j] * std::polar(1.0, -x * s.xi1 / eps);
        u2.values[j] = w.phi2[j] * std::polar(1.0, -x * s.xi2 / eps);
    }
    const ComplexField du1 = gradient(u1), du2 = gradient(u2);
    const double uw = l2_norm_sq(u1) / eps + eps * l2_norm_sq(du1) + l2_norm_sq(u2) / eps +
                      eps * l2_norm_sq(du2);

    // profile H_eps norm is shift independent
    double vr = 0.0;
    {
        const auto win0 = detail::support_window(g, c, rad);
        for (int j = win0.j0; j <= win0.j1; ++j) {
            const double u = (g.nodes[j] - c) / eps;
            vr += (prof.r1(u) * prof.r1(u) + prof.r2(u) * prof.r2(u)) / eps;
            const double d1 = prof.dr1(u) / eps, d2 = prof.dr2(u) / eps;
            vr += eps * (d1 * d1 + d2 * d2);
        }
        vr *= g.dx;
    }

    auto cross = [&](double ctil) {
        const auto wc = detail::support_window(g, ctil, rad);
        Complex b1(0.0, 0.0), b2(0.0, 0.0);
        for (int j = wc.j0; j <= wc.j1; ++j) {
            const double u = (g.nodes[j] - ctil) / eps;
            b1 += u1.values[j] * prof.r1(u) / eps + du1.values[j] * prof.dr1(u);
            b2 += u2.values[j] * prof.r2(u) / eps + du2.values[j] * prof.dr2(u);
        }
        return std::abs(b1 * g.dx) + std::abs(b2 * g.dx);
    };
    auto gamma_at = [&](double ctil) { return uw + vr - 2.0 * cross(ctil); };

    const double win_half = std::max(10.0 * eps, 20.0 * g.dx);
    const double stride = std::max(eps / 20.0, g.dx);
    double best_c = c, best_val = gamma_at(c);
    for (double ct = c - win_half; ct <= c + win_half; ct += stride) {
        const double val = gamma_at(ct);
        if (val < best_val) {
            best_val = val;
            best_c = ct;
        }
    }
    const double refined = detail::golden_minimize(gamma_at, best_c - stride, best_c + stride, 50);
    const double refined_val = gamma_at(refined);
    fit.gamma_center = refined_val < best_val ? refined : best_c;
    fit.gamma = std::max(0.0, std::min(refined_val, best_val));
    fit.in_tube = fit.gamma <= gamma_bound;
    return fit;
}

inline ModulationFit best_fit_modulation(const WavePair& w, const GroundStatePair& R, const PhasePoint& s,
                                         double gamma_bound = 0.5) {
    const ProfilePair prof = ProfilePair::from_fields(R.r1, R.r2, R.m1, R.m2);
    return best_fit_modulation(w, prof, s, gamma_bound);
}

// ---------------------------------------------------------------------------
// dual-norm surrogate over a fixed C^2-normalized dictionary ("dict-v1")
// ---------------------------------------------------------------------------

/// One C^2 test function with |psi|, |psi'|, |psi''| all <= 1.
struct TestFunction {
    enum class Kind { cosine, bump } kind;
    double a = 0.0; // frequency (cosine) or center (bump)
    double b = 0.0; // phase (cosine) or width (bump)
    double norm = 1.0;

    double eval(double x) const {
        if (kind == Kind::cosine) return std::cos(a * x + b) / norm;
        const double u = (x - a) / b;
        if (std::abs(u) >= 1.0) return 0.0;
        const double q = 1.0 - u * u;
        return q * q * q / norm;
    }
    double deriv(double x) const {
        if (kind == Kind::cosine) return -a * std::sin(a * x + b) / norm;
        const double u = (x - a) / b;
        if (std::abs(u) >= 1.0) return 0.0;
        const double q = 1.0 - u * u;
        return -6.0 * u * q * q / (b * norm);
    }
    double deriv2(double x) const {
        if (kind == Kind::cosine) return -a * a * std::cos(a * x + b) / norm;
        const double u = (x - a) / b;
        if (std::abs(u) >= 1.0) return 0.0;
        const double q = 1.0 - u * u;
        return 6.0 * q * (5.0 * u * u - 1.0) / (b * b * norm);
    }
};

/// Fixed 48-element dictionary: 24 cosines on a dyadic frequency ladder up
/// to k = 8 and 24 compact bumps on translation ladders at two widths. Used
/// only for convergence-order slopes, never for absolute constants.
struct TestDictionary {
    std::vector<TestFunction> items;

    static TestDictionary standard() {
        TestDictionary d;
        const double freqs[8] = {0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
        const double phases[3] = {0.0, M_PI / 4.0, M_PI / 2.0};
        for (double k : freqs)
            for (double ph : phases)
                d.items.push_back({TestFunction::Kind::cosine, k, ph, 1.0 + k + k * k});
        auto bump_norm = [](double w) {
            return std::max({1.0, 6.0 * std::sqrt(5.0) * 16.0 / (125.0 * w), 6.0 / (w * w)});
        };
        for (int i = 0; i < 12; ++i) {
            const double c = -5.5 + 11.0 * i / 11.0;
            d.items.push_back({TestFunction::Kind::bump, c, 1.0, bump_norm(1.0)});
        }
        for (int i = 0; i < 12; ++i) {
            const double c = -2.75 + 5.5 * i / 11.0;
            d.items.push_back({TestFunction::Kind::bump, c, 0.5, bump_norm(0.5)});
        }
        return d;
    }

    // largest violation of the C^2 <= 1 bound over dense samples
    double max_c2_violation(double lo, double hi, int samples = 20000) const {
        double worst = 0.0;
        for (const auto& f : items) {
            for (int i = 0; i <= samples; ++i) {
                const double x = lo + (hi - lo) * i / samples;
                worst = std::max({worst, std::abs(f.eval(x)) - 1.0, std::abs(f.deriv(x)) - 1.0,
                                  std::abs(f.deriv2(x)) - 1.0});
            }
        }
        return worst;
    }
};

/// Lower bound of the (C^2)* distance between the sampled density and the
/// point mass m delta_z: max over the dictionary of |int psi dmu - m psi(z)|.
inline double dual_norm_surrogate(const RealField& density, double mass, double z,
                                  const TestDictionary& dict) {
    if (dict.items.empty()) throw usage_error("dual_norm_surrogate: empty dictionary");
    const Grid& g = *density.grid;
    double best = 0.0;
    for (const auto& f : dict.items) {
        double acc = 0.0;
        for (int j = 0; j < g.n; ++j) acc += f.eval(g.nodes[j]) * density.values[j];
        acc *= g.dx;
        best = std::max(best, std::abs(acc - mass * f.eval(z)));
    }
    return best;
}

struct PoteCheck {
    std::vector<std::pair<double, double>> ladder; // (eps, integral)
    double slope = 0.0;
    bool at_floor = false;
};

/// Quadrature check of the second-order potential averaging bound
/// | int [A(eps x + y) - A(y)] r_i^2 dx | <= C eps^2 for radial profiles.
inline PoteCheck lemma_pote_check(const Potential& A, const GroundStatePair& R, double y,
                                  const std::vector<double>& eps_ladder) {
    if (eps_ladder.size() < 3) throw usage_error("lemma_pote_check: need at least 3 ladder points");
    const Grid& g = R.grid();
    PoteCheck out;
    for (double eps : eps_ladder) {
        double i1 = 0.0, i2 = 0.0;
        const double Ay = A.value(y);
        for (int j = 0; j < g.n; ++j) {
            const double dA = A.value(eps * g.nodes[j] + y) - Ay;
            i1 += dA * R.r1.values[j] * R.r1.values[j];
            i2 += dA * R.r2.values[j] * R.r2.values[j];
        }
        out.ladder.emplace_back(eps, std::abs(i1 * g.dx) + std::abs(i2 * g.dx));
    }
    double floor = 0.0;
    for (auto& [e, v] : out.ladder) floor = std::max(floor, v);
    if (floor < 1e-13) {
        out.at_floor = true;
        out.slope = std::numeric_limits<double>::infinity();
        return out;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const int n = static_cast<int>(out.ladder.size());
    for (auto& [e, v] : out.ladder) {
        const double lx = std::log(e), ly = std::log(std::max(v, 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (out.slope < 1.8)
        throw numerical_error("lemma_pote_check: measured slope " + std::to_string(out.slope) +
                              " is below the second-order target");
    return out;
}

// ---------------------------------------------------------------------------
// per-sample assembly
// ---------------------------------------------------------------------------

/// Bundles everything needed to turn a (field, phase point) pair into one
/// DiagnosticsRecord. Pure reader of the state; safe to call at any sample.
class ObservablePipeline {
public:
    ObservablePipeline(std::shared_ptr<const Grid> grid, ProfilePair prof, Potential V, Potential W,
                       Cutoff chi, TestDictionary dict, double gamma_bound = 0.5)
        : grid_(std::move(grid)), prof_(std::move(prof)), V_(std::move(V)), W_(std::move(W)), chi_(chi),
          dict_(std::move(dict)), gamma_bound_(gamma_bound) {}

    const Cutoff& cutoff() const { return chi_; }
    const ProfilePair& profiles() const { return prof_; }
    const TestDictionary& dictionary() const { return dict_; }

    DiagnosticsRecord record(const WavePair& w, const PhasePoint& s) const {
        DiagnosticsRecord rec;
        rec.t = w.t;
        rec.N1 = w.mass1();
        rec.N2 = w.mass2();
        auto [e1, e2, et] = energy_components(w, V_, W_);
        rec.E1 = e1;
        rec.E2 = e2;
        rec.E = et;
        auto [c1, c2] = mass_centers(w);
        rec.center1 = c1;
        rec.center2 = c2;

        const ComplexField f1{w.grid, w.phi1}, f2{w.grid, w.phi2};
        const RealField p1 = momentum_density(f1, w.eps);
        const RealField p2 = momentum_density(f2, w.eps);
        const double P1 = integrate(p1), P2 = integrate(p2);
        rec.Ptot = P1 + P2;
        rec.alpha1 = P1 - rec.N1 * s.xi1;
        rec.alpha2 = P2 - rec.N2 * s.xi2;

        auto [eta1, eta2] = defect_eta(w, s, V_, W_, chi_);
        rec.eta1 = eta1;
        rec.eta2 = eta2;
        auto [gamma1, gamma2] = defect_gamma(w, s, chi_);
        rec.gamma1 = gamma1;
        rec.gamma2 = gamma2;

        const ModulationFit fit = best_fit_modulation(w, prof_, s, gamma_bound_);
        rec.Gamma = fit.gamma;
        rec.Heps = fit.heps;
        rec.theta1 = fit.theta1;
        rec.theta2 = fit.theta2;

        RealField rho1(w.grid), rho2(w.grid), ptot(w.grid);
        for (int j = 0; j < w.grid->n; ++j) {
            rho1.values[j] = std::norm(w.phi1[j]) / w.eps;
            rho2.values[j] = std::norm(w.phi2[j]) / w.eps;
            ptot.values[j] = p1.values[j] + p2.values[j];
        }
        rec.dualM1 = dual_norm_surrogate(rho1, rec.N1, s.x1, dict_);
        rec.dualM2 = dual_norm_surrogate(rho2, rec.N2, s.x1, dict_);
        rec.dualP = dual_norm_surrogate(ptot, rec.N1 * s.xi1 + rec.N2 * s.xi2, s.x1, dict_);
        return rec;
    }

private:
    std::shared_ptr<const Grid> grid_;
    ProfilePair prof_;
    Potential V_, W_;
    Cutoff chi_;
    TestDictionary dict_;
    double gamma_bound_;
};

} // namespace nlss
