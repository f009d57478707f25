#pragma once

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "nlss/errors.hpp"
#include "nlss/grid.hpp"

namespace nlss {

enum class PotentialKind { constant, harmonic, gaussian_bump, cosine };

/// External potential with analytic value/gradient/hessian. A nonnegativity
/// offset mu = max(0, -inf V) is baked into value(); solutions for V and
/// V + mu differ by a pure phase, so moduli diagnostics are unchanged.
class Potential {
public:
    static Potential constant(double level) {
        Potential p(PotentialKind::constant);
        p.a_ = level;
        p.offset_ = std::max(0.0, -level);
        return p;
    }

    // V(x) = omega^2 x^2 / 2, minimum 0 at the origin. Unbounded, but with
    // bounded second and third derivatives; trajectories must stay in the
    // domain interior (checked by the runner).
    static Potential harmonic(double omega) {
        Potential p(PotentialKind::harmonic);
        p.a_ = omega;
        p.offset_ = 0.0;
        return p;
    }

    static Potential gaussian_bump(double amplitude, double center, double width) {
        if (!(width > 0.0)) throw config_error("gaussian_bump: width must be positive");
        Potential p(PotentialKind::gaussian_bump);
        p.a_ = amplitude;
        p.b_ = center;
        p.c_ = width;
        p.offset_ = std::max(0.0, -amplitude);
        return p;
    }

    static Potential cosine(double amplitude, double wavevector) {
        Potential p(PotentialKind::cosine);
        p.a_ = amplitude;
        p.b_ = wavevector;
        p.offset_ = std::abs(amplitude);
        return p;
    }

    PotentialKind kind() const { return kind_; }
    double offset() const { return offset_; }
    bool is_constant() const { return kind_ == PotentialKind::constant; }

    double value(double x) const {
        switch (kind_) {
            case PotentialKind::constant: return a_ + offset_;
            case PotentialKind::harmonic: return 0.5 * a_ * a_ * x * x;
            case PotentialKind::gaussian_bump: return a_ * bump(x) + offset_;
            case PotentialKind::cosine: return a_ * std::cos(b_ * x) + offset_;
        }
        return 0.0;
    }

    double grad(double x) const {
        switch (kind_) {
            case PotentialKind::constant: return 0.0;
            case PotentialKind::harmonic: return a_ * a_ * x;
            case PotentialKind::gaussian_bump: return -a_ * (x - b_) / (c_ * c_) * bump(x);
            case PotentialKind::cosine: return -a_ * b_ * std::sin(b_ * x);
        }
        return 0.0;
    }

    double hessian(double x) const {
        switch (kind_) {
            case PotentialKind::constant: return 0.0;
            case PotentialKind::harmonic: return a_ * a_;
            case PotentialKind::gaussian_bump: {
                const double u = (x - b_) / c_;
                return a_ * (u * u - 1.0) / (c_ * c_) * bump(x);
            }
            case PotentialKind::cosine: return -a_ * b_ * b_ * std::cos(b_ * x);
        }
        return 0.0;
    }

    rvector sample_values(const Grid& g) const {
        rvector out(g.n);
        for (int j = 0; j < g.n; ++j) out[j] = value(g.nodes[j]);
        return out;
    }

    rvector sample_grads(const Grid& g) const {
        rvector out(g.n);
        for (int j = 0; j < g.n; ++j) out[j] = grad(g.nodes[j]);
        return out;
    }

    static Potential from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    std::string describe() const {
        switch (kind_) {
            case PotentialKind::constant: return "constant(level=" + std::to_string(a_) + ")";
            case PotentialKind::harmonic: return "harmonic(omega=" + std::to_string(a_) + ")";
            case PotentialKind::gaussian_bump:
                return "gaussian_bump(a=" + std::to_string(a_) + ", b=" + std::to_string(b_) +
                       ", s=" + std::to_string(c_) + ")";
            case PotentialKind::cosine:
                return "cosine(a=" + std::to_string(a_) + ", kappa=" + std::to_string(b_) + ")";
        }
        return "?";
    }

    bool operator==(const Potential& o) const {
        return kind_ == o.kind_ && a_ == o.a_ && b_ == o.b_ && c_ == o.c_;
    }

private:
    explicit Potential(PotentialKind k) : kind_(k) {}

    double bump(double x) const {
        const double u = (x - b_) / c_;
        return std::exp(-0.5 * u * u);
    }

    PotentialKind kind_;
    double a_ = 0.0, b_ = 0.0, c_ = 1.0;
    double offset_ = 0.0;
};

inline Potential Potential::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw config_error("potential: expected object with a \"kind\" key");
    const std::string kind = j.at("kind").get<std::string>();
    auto expect_keys = [&](std::initializer_list<const char*> keys) {
        for (const auto& item : j.items()) {
            if (item.key() == "kind") continue;
            bool known = false;
            for (const char* k : keys)
                if (item.key() == k) known = true;
            if (!known) throw config_error("potential: unknown key \"" + item.key() + "\" for kind " + kind);
        }
        for (const char* k : keys)
            if (!j.contains(k)) throw config_error("potential: kind " + kind + " requires key \"" + std::string(k) + "\"");
    };
    if (kind == "constant") {
        expect_keys({"level"});
        return Potential::constant(j.at("level").get<double>());
    }
    if (kind == "harmonic") {
        expect_keys({"omega"});
        return Potential::harmonic(j.at("omega").get<double>());
    }
    if (kind == "gaussian_bump") {
        expect_keys({"amplitude", "center", "width"});
        return Potential::gaussian_bump(j.at("amplitude").get<double>(), j.at("center").get<double>(),
                                        j.at("width").get<double>());
    }
    if (kind == "cosine") {
        expect_keys({"amplitude", "wavevector"});
        return Potential::cosine(j.at("amplitude").get<double>(), j.at("wavevector").get<double>());
    }
    throw config_error("potential: unknown kind \"" + kind + "\"");
}

inline nlohmann::json Potential::to_json() const {
    switch (kind_) {
        case PotentialKind::constant: return {{"kind", "constant"}, {"level", a_}};
        case PotentialKind::harmonic: return {{"kind", "harmonic"}, {"omega", a_}};
        case PotentialKind::gaussian_bump:
            return {{"kind", "gaussian_bump"}, {"amplitude", a_}, {"center", b_}, {"width", c_}};
        case PotentialKind::cosine: return {{"kind", "cosine"}, {"amplitude", a_}, {"wavevector", b_}};
    }
    return {};
}

} // namespace nlss
