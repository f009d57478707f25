#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <string>

#include <nlohmann/json.hpp>

#include "nlss/errors.hpp"
#include "nlss/grid.hpp"
#include "nlss/ground_state.hpp"
#include "nlss/potential.hpp"
#include "nlss/profile.hpp"

namespace nlss {

/// Two complex fields at semiclassical scale eps, the state of the coupled
/// Cauchy problem. Rescaled masses eps^-1 ||phi_i||_2^2 are conserved along
/// the evolution to roundoff.
struct WavePair {
    std::shared_ptr<const Grid> grid;
    cvector phi1, phi2;
    double eps = 1.0;
    double p = 1.0;
    double beta = 0.0;
    double t = 0.0;

    WavePair() = default;
    WavePair(std::shared_ptr<const Grid> g, double eps_, double p_, double beta_)
        : grid(std::move(g)), phi1(grid->n, Complex(0.0, 0.0)), phi2(grid->n, Complex(0.0, 0.0)),
          eps(eps_), p(p_), beta(beta_) {}

    double mass1() const { return mass_of(phi1); }
    double mass2() const { return mass_of(phi2); }

private:
    double mass_of(const cvector& v) const {
        KahanSum k;
        for (const auto& z : v) k.add(std::norm(z));
        return k.value() * grid->dx / eps;
    }
};

struct EvolutionConfig {
    double eps = 0.1;
    double dt = 1e-3;
    double T = 1.0;
    int sample_stride = 1;
    double boundary_mass_guard = 1e-8;

    void validate() const {
        if (!(eps > 0.0) || !(dt > 0.0) || T < 0.0)
            throw config_error("EvolutionConfig: eps and dt must be positive, T nonnegative");
        if (dt > eps + 1e-15)
            throw config_error("EvolutionConfig: dt must not exceed eps (phase resolution)");
        if (sample_stride < 1) throw config_error("EvolutionConfig: sample_stride must be >= 1");
    }
};

/// Member of the modulated soliton family
///   q_i(x) = r_i((x - center)/eps) exp(i (x xi_i / eps + theta_i)),
/// with theta_i the componentwise phase angle (2pi-periodic).
WavePair modulated_family_member(const ProfilePair& prof, double center, double xi1, double xi2,
                                 double theta1, double theta2, double eps, double p, double beta,
                                 std::shared_ptr<const Grid> grid, double t = 0.0);

/// Fraction of the total mass sitting in the outer 10% of the domain.
inline double boundary_mass_fraction(const WavePair& w) {
    const Grid& g = *w.grid;
    KahanSum outer, total;
    for (int j = 0; j < g.n; ++j) {
        const double m = std::norm(w.phi1[j]) + std::norm(w.phi2[j]);
        total.add(m);
        if (std::abs(g.nodes[j]) > 0.9 * g.half_length) outer.add(m);
    }
    return total.value() > 0.0 ? outer.value() / total.value() : 0.0;
}

inline WavePair modulated_family_member(const ProfilePair& prof, double center, double xi1, double xi2,
                                        double theta1, double theta2, double eps, double p, double beta,
                                        std::shared_ptr<const Grid> grid, double t) {
    const Grid& g = *grid;
    const double rad = eps * prof.support_radius;
    WavePair out(grid, eps, p, beta);
    out.t = t;
    const int j0 = std::max(0, static_cast<int>(std::floor((center - rad + g.half_length) / g.dx)) - 1);
    const int j1 = std::min(g.n - 1, static_cast<int>(std::ceil((center + rad + g.half_length) / g.dx)) + 1);
    for (int j = j0; j <= j1; ++j) {
        const double x = g.nodes[j];
        const double u = (x - center) / eps;
        const Complex ph1 = std::polar(1.0, x * xi1 / eps + theta1);
        const Complex ph2 = std::polar(1.0, x * xi2 / eps + theta2);
        out.phi1[j] = prof.r1(u) * ph1;
        out.phi2[j] = prof.r2(u) * ph2;
    }
    if (boundary_mass_fraction(out) > 1e-8)
        throw config_error("modulated_family_member: soliton support touches the outer 10% of the domain");
    return out;
}

/// Initial data phi_i(x) = r_i((x - x0)/eps) e^{i x xi_i / eps}.
inline WavePair initial_data(const GroundStatePair& R, const ProfilePair& prof, double x0, double xi1,
                             double xi2, double eps, std::shared_ptr<const Grid> grid) {
    return modulated_family_member(prof, x0, xi1, xi2, 0.0, 0.0, eps, R.p, R.beta, std::move(grid));
}

inline WavePair initial_data(const GroundStatePair& R, double x0, double xi1, double xi2, double eps,
                             std::shared_ptr<const Grid> grid) {
    const ProfilePair prof = ProfilePair::from_fields(R.r1, R.r2, R.m1, R.m2);
    return initial_data(R, prof, x0, xi1, xi2, eps, std::move(grid));
}

/// Precomputed per-run data for the split stepping: sampled potentials and
/// the kinetic multiplier exp(-i dt eps k^2 / 2).
struct StrangWorkspace {
    rvector V, W;
    cvector kinetic_phase;
    double dt = 0.0;
    double eps = 0.0;
    mutable cvector spec; // scratch spectrum
};

inline StrangWorkspace make_strang_workspace(const Grid& g, const Potential& V, const Potential& W,
                                             double dt, double eps) {
    StrangWorkspace ws;
    ws.V = V.sample_values(g);
    ws.W = W.sample_values(g);
    ws.kinetic_phase.resize(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double k = g.wavenumbers[j];
        ws.kinetic_phase[j] = std::polar(1.0, -0.5 * dt * eps * k * k);
    }
    ws.dt = dt;
    ws.eps = eps;
    ws.spec.resize(g.n);
    return ws;
}

namespace detail {

// exact flow of i eps d_t phi_i = (V_i - g_i(|phi1|,|phi2|)) phi_i over time s:
// the moduli are invariant, so this is a pointwise phase rotation
inline void pointwise_phase_substep(WavePair& w, const rvector& V, const rvector& W, double s) {
    const int n = w.grid->n;
    const double r = -s / w.eps;
    for (int j = 0; j < n; ++j) {
        const double a1 = std::abs(w.phi1[j]);
        const double a2 = std::abs(w.phi2[j]);
        double g1, g2;
        coupling_terms(a1, a2, w.p, w.beta, g1, g2);
        w.phi1[j] *= std::polar(1.0, r * (V[j] - g1));
        w.phi2[j] *= std::polar(1.0, r * (W[j] - g2));
    }
}

inline void kinetic_substep(WavePair& w, const StrangWorkspace& ws) {
    const Grid& g = *w.grid;
    g.fft(w.phi1, ws.spec);
    for (int j = 0; j < g.n; ++j) ws.spec[j] *= ws.kinetic_phase[j];
    g.ifft(ws.spec, w.phi1);
    g.fft(w.phi2, ws.spec);
    for (int j = 0; j < g.n; ++j) ws.spec[j] *= ws.kinetic_phase[j];
    g.ifft(ws.spec, w.phi2);
}

} // namespace detail

/// Strang step: half pointwise phase rotation, exact spectral kinetic step,
/// half pointwise phase rotation. Both substeps are L^2 isometries, so the
/// rescaled masses are conserved unconditionally.
inline void strang_step_inplace(WavePair& w, const StrangWorkspace& ws) {
    detail::pointwise_phase_substep(w, ws.V, ws.W, 0.5 * ws.dt);
    detail::kinetic_substep(w, ws);
    detail::pointwise_phase_substep(w, ws.V, ws.W, 0.5 * ws.dt);
    w.t += ws.dt;
}

inline WavePair strang_step(const WavePair& w, const Potential& V, const Potential& W, double dt) {
    if (!(dt > 0.0)) throw usage_error("strang_step: dt must be positive");
    WavePair out = w;
    const StrangWorkspace ws = make_strang_workspace(*w.grid, V, W, dt, w.eps);
    strang_step_inplace(out, ws);
    return out;
}

/// Snapshot dump: CSV x, Re(phi1), Im(phi1), Re(phi2), Im(phi2) plus a JSON
/// sidecar {t, eps, p, beta}. %.17g round-trips doubles exactly.
inline void write_snapshot(const WavePair& w, const std::string& csv_path, const std::string& json_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw config_error("write_snapshot: cannot open " + csv_path);
    csv << "x,re_phi1,im_phi1,re_phi2,im_phi2\n";
    char line[256];
    for (int j = 0; j < w.grid->n; ++j) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", w.grid->nodes[j],
                      w.phi1[j].real(), w.phi1[j].imag(), w.phi2[j].real(), w.phi2[j].imag());
        csv << line;
    }
    nlohmann::json meta{{"t", w.t}, {"eps", w.eps}, {"p", w.p}, {"beta", w.beta}};
    std::ofstream js(json_path);
    if (!js) throw config_error("write_snapshot: cannot open " + json_path);
    js << meta.dump(2) << "\n";
}

inline WavePair read_snapshot(const std::string& csv_path, const std::string& json_path) {
    std::ifstream js(json_path);
    if (!js) throw config_error("read_snapshot: cannot open " + json_path);
    nlohmann::json meta = nlohmann::json::parse(js);

    std::ifstream csv(csv_path);
    if (!csv) throw config_error("read_snapshot: cannot open " + csv_path);
    std::string header;
    std::getline(csv, header);
    std::vector<double> xs;
    cvector p1, p2;
    std::string line;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        double x, a, b, c, d;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg,%lg", &x, &a, &b, &c, &d) != 5)
            throw config_error("read_snapshot: malformed row: " + line);
        xs.push_back(x);
        p1.emplace_back(a, b);
        p2.emplace_back(c, d);
    }
    const int n = static_cast<int>(xs.size());
    if (n < 8) throw config_error("read_snapshot: too few rows");
    auto grid = make_grid(-xs[0], n);
    WavePair w(grid, meta.at("eps").get<double>(), meta.at("p").get<double>(),
               meta.at("beta").get<double>());
    w.t = meta.at("t").get<double>();
    w.phi1 = std::move(p1);
    w.phi2 = std::move(p2);
    return w;
}

} // namespace nlss
