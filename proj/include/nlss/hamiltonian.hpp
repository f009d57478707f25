#pragma once

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "nlss/errors.hpp"
#include "nlss/potential.hpp"

namespace nlss {

/// State of the driving Newtonian flow: two position/velocity pairs, the
/// first driven by V, the second by W. Both start from the same position.
struct PhasePoint {
    double x1 = 0.0, xi1 = 0.0;
    double x2 = 0.0, xi2 = 0.0;
    double t = 0.0;
};

/// One velocity-Verlet step applied independently to each component pair.
inline PhasePoint verlet_step(const PhasePoint& s, const Potential& V, const Potential& W, double dt) {
    PhasePoint out = s;
    const double a1 = -V.grad(s.x1);
    const double a2 = -W.grad(s.x2);
    out.x1 = s.x1 + dt * s.xi1 + 0.5 * dt * dt * a1;
    out.x2 = s.x2 + dt * s.xi2 + 0.5 * dt * dt * a2;
    out.xi1 = s.xi1 + 0.5 * dt * (a1 - V.grad(out.x1));
    out.xi2 = s.xi2 + 0.5 * dt * (a2 - W.grad(out.x2));
    out.t = s.t + dt;
    return out;
}

/// Conserved Hamiltonians H_i = |xi_i|^2/2 + potential(x_i).
inline std::pair<double, double> hamiltonian_energy(const PhasePoint& s, const Potential& V,
                                                    const Potential& W) {
    return {0.5 * s.xi1 * s.xi1 + V.value(s.x1), 0.5 * s.xi2 * s.xi2 + W.value(s.x2)};
}

inline std::vector<PhasePoint> integrate_flow(PhasePoint s, const Potential& V, const Potential& W,
                                              double dt, int steps) {
    if (!(dt > 0.0) || steps < 0) throw usage_error("integrate_flow: need dt > 0 and steps >= 0");
    std::vector<PhasePoint> out;
    out.reserve(steps + 1);
    out.push_back(s);
    for (int k = 0; k < steps; ++k) {
        s = verlet_step(s, V, W, dt);
        out.push_back(s);
    }
    return out;
}

struct PortraitSample {
    double t, x, y, xdot, ydot;
};

struct PortraitResult {
    std::vector<PortraitSample> samples;
    bool closes = false;         // some state after the transient returns within close_tol
    double closure_time = 0.0;   // first such return time
    double min_return_distance = 0.0; // over t >= one slow period
};

/// Decoupled 2D harmonic oscillators x'' = -w1^2 x, y'' = -w2^2 y: the
/// phase-plane curve is a Lissajous figure, periodic exactly when w1/w2 is
/// rational. Return distances are measured in the energy-normalized state
/// (x, xdot/w1, y, ydot/w2) and only after one period of the slower axis,
/// before which the trajectory cannot have come back.
inline PortraitResult lissajous_portrait(double w1, double w2, std::array<double, 2> x0,
                                         std::array<double, 2> v0, double T, double dt,
                                         double close_tol = 1e-6) {
    if (!(T > 0.0) || !(dt > 0.0)) throw config_error("lissajous_portrait: need T, dt > 0");
    if (!(w1 > 0.0) || !(w2 > 0.0)) throw config_error("lissajous_portrait: need positive frequencies");
    const Potential Vx = Potential::harmonic(w1);
    const Potential Vy = Potential::harmonic(w2);
    const int steps = static_cast<int>(std::llround(T / dt));

    PortraitResult out;
    out.samples.reserve(steps + 1);
    PhasePoint s;
    s.x1 = x0[0];
    s.x2 = x0[1];
    s.xi1 = v0[0];
    s.xi2 = v0[1];
    out.samples.push_back({0.0, s.x1, s.x2, s.xi1, s.xi2});

    const double t_min = 2.0 * M_PI / std::min(w1, w2);
    auto dist_sq = [&](const PhasePoint& q) {
        const double dx1 = q.x1 - x0[0], dv1 = (q.xi1 - v0[0]) / w1;
        const double dx2 = q.x2 - x0[1], dv2 = (q.xi2 - v0[1]) / w2;
        return dx1 * dx1 + dv1 * dv1 + dx2 * dx2 + dv2 * dv2;
    };
    // returns are sharper than the step grid resolves; local minima of the
    // squared distance are refined by a parabola through three samples
    double dprev2 = dist_sq(s), dcur2 = dprev2;
    double min_ret2 = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= steps; ++k) {
        s = verlet_step(s, Vx, Vy, dt);
        out.samples.push_back({s.t, s.x1, s.x2, s.xi1, s.xi2});
        const double dnext2 = dist_sq(s);
        const double tcur = s.t - dt;
        if (tcur >= t_min && dcur2 <= dprev2 && dcur2 <= dnext2) {
            double refined = dcur2;
            const double denom = dnext2 - 2.0 * dcur2 + dprev2;
            if (denom > 0.0) {
                const double slope = dnext2 - dprev2;
                refined = dcur2 - slope * slope / (8.0 * denom);
            }
            refined = std::max(refined, 0.0);
            if (refined < min_ret2) min_ret2 = refined;
            if (!out.closes && refined < close_tol * close_tol) {
                out.closes = true;
                out.closure_time = tcur;
            }
        }
        dprev2 = dcur2;
        dcur2 = dnext2;
    }
    out.min_return_distance = std::sqrt(min_ret2);
    return out;
}

/// Coverage proxy for the quasi-periodic case: number of occupied cells of
/// a bins x bins grid over the position box, restricted to t <= t_limit.
inline int occupied_cell_count(const PortraitResult& portrait, double t_limit, int bins = 100) {
    double ax = 0.0, ay = 0.0;
    for (const auto& s : portrait.samples) {
        ax = std::max(ax, std::abs(s.x));
        ay = std::max(ay, std::abs(s.y));
    }
    ax *= 1.0 + 1e-9;
    ay *= 1.0 + 1e-9;
    std::set<int> cells;
    for (const auto& s : portrait.samples) {
        if (s.t > t_limit) break;
        const int ix = static_cast<int>((s.x / ax + 1.0) * 0.5 * bins);
        const int iy = static_cast<int>((s.y / ay + 1.0) * 0.5 * bins);
        cells.insert(ix * (bins + 1) + iy);
    }
    return static_cast<int>(cells.size());
}

} // namespace nlss
