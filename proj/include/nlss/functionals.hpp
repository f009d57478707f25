#pragma once

#include <cmath>

#include "nlss/grid.hpp"

namespace nlss {

/// Coupled focusing nonlinearity density
/// F_beta(u1,u2) = ( |u1|^(2p+2) + |u2|^(2p+2) + 2 beta |u1|^(p+1) |u2|^(p+1) ) / (p+1).
inline double f_beta(double u1, double u2, double p, double beta) {
    const double a1 = std::abs(u1), a2 = std::abs(u2);
    if (p == 1.0) {
        const double q1 = a1 * a1, q2 = a2 * a2;
        return 0.5 * (q1 * q1 + q2 * q2 + 2.0 * beta * q1 * q2);
    }
    const double s1 = std::pow(a1, p + 1.0), s2 = std::pow(a2, p + 1.0);
    return (s1 * s1 + s2 * s2 + 2.0 * beta * s1 * s2) / (p + 1.0);
}

inline double f_beta_abs(double a1, double a2, double p, double beta) {
    if (p == 1.0) {
        const double q1 = a1 * a1, q2 = a2 * a2;
        return 0.5 * (q1 * q1 + q2 * q2 + 2.0 * beta * q1 * q2);
    }
    const double s1 = std::pow(a1, p + 1.0), s2 = std::pow(a2, p + 1.0);
    return (s1 * s1 + s2 * s2 + 2.0 * beta * s1 * s2) / (p + 1.0);
}

inline double integral_f_beta(const ComplexField& u1, const ComplexField& u2, double p, double beta) {
    require_same_grid(*u1.grid, *u2.grid, "integral_f_beta");
    double s = 0.0;
    for (int j = 0; j < u1.grid->n; ++j)
        s += f_beta_abs(std::abs(u1.values[j]), std::abs(u2.values[j]), p, beta);
    return s * u1.grid->dx;
}

/// Autonomous energy  E(U) = 1/2 ||grad U||_2^2 - int F_beta(U).
inline double energy(const ComplexField& u1, const ComplexField& u2, double p, double beta) {
    require_same_grid(*u1.grid, *u2.grid, "energy");
    const ComplexField g1 = gradient(u1), g2 = gradient(u2);
    return 0.5 * (l2_norm_sq(g1) + l2_norm_sq(g2)) - integral_f_beta(u1, u2, p, beta);
}

inline double energy(const RealField& u1, const RealField& u2, double p, double beta) {
    return energy(to_complex(u1), to_complex(u2), p, beta);
}

} // namespace nlss
