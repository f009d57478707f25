#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlss/observables.hpp"
#include "nlss/wave.hpp"

namespace nlss {

enum class EvolveStatus { ok, nan_abort, guard_abort };

struct EvolutionResult {
    std::vector<DiagnosticsRecord> records;
    WavePair state;
    PhasePoint point;
    EvolveStatus status = EvolveStatus::ok;
    std::string message;
    double spectral_tail_max = 0.0; // monitored, not enforced
};

/// Energy fraction carried by the top decade of wavenumbers; a growing value
/// signals loss of spectral resolution.
inline double spectral_tail_fraction(const WavePair& w) {
    const Grid& g = *w.grid;
    cvector spec(g.n);
    const double k_cut = 0.9 * M_PI / g.dx;
    double tail = 0.0, total = 0.0;
    for (const cvector* f : {&w.phi1, &w.phi2}) {
        g.fft(*f, spec);
        for (int j = 0; j < g.n; ++j) {
            const double e = std::norm(spec[j]);
            total += e;
            if (std::abs(g.wavenumbers[j]) >= k_cut) tail += e;
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

using SampleObserver = std::function<void(const WavePair&, const PhasePoint&)>;

/// Steps the split spectral scheme and the driving Verlet flow on the same
/// clock from t to t + T, sampling diagnostics every sample_stride steps
/// (plus the endpoints). Aborts with the last good samples on NaNs or when
/// the boundary-mass guard trips.
inline EvolutionResult evolve(WavePair w, const Potential& V, const Potential& W, PhasePoint s,
                              const EvolutionConfig& cfg, const ObservablePipeline* pipeline = nullptr,
                              const SampleObserver& observer = {}) {
    cfg.validate();
    const long steps = std::llround(cfg.T / cfg.dt);
    if (std::abs(steps * cfg.dt - cfg.T) > 1e-9 * std::max(1.0, cfg.T))
        throw config_error("evolve: T must be an integer number of steps (set dt = T/steps)");
    if (w.eps != cfg.eps) throw usage_error("evolve: field and config disagree on eps");

    EvolutionResult out;
    const StrangWorkspace ws = make_strang_workspace(*w.grid, V, W, cfg.dt, cfg.eps);

    auto guard_check = [&](const WavePair& state) -> std::string {
        if (!all_finite(state.phi1) || !all_finite(state.phi2))
            return "NaN detected at t = " + std::to_string(state.t);
        if (boundary_mass_fraction(state) > cfg.boundary_mass_guard)
            return "boundary-mass guard tripped at t = " + std::to_string(state.t);
        return {};
    };

    if (auto msg = guard_check(w); !msg.empty()) {
        out.state = std::move(w);
        out.point = s;
        out.status = msg.find("NaN") != std::string::npos ? EvolveStatus::nan_abort : EvolveStatus::guard_abort;
        out.message = msg;
        return out;
    }
    if (pipeline) out.records.push_back(pipeline->record(w, s));
    if (observer) observer(w, s);
    out.spectral_tail_max = spectral_tail_fraction(w);

    for (long k = 1; k <= steps; ++k) {
        strang_step_inplace(w, ws);
        s = verlet_step(s, V, W, cfg.dt);
        if (k % cfg.sample_stride == 0 || k == steps) {
            if (auto msg = guard_check(w); !msg.empty()) {
                out.state = std::move(w);
                out.point = s;
                out.status =
                    msg.find("NaN") != std::string::npos ? EvolveStatus::nan_abort : EvolveStatus::guard_abort;
                out.message = msg;
                return out;
            }
            if (pipeline) out.records.push_back(pipeline->record(w, s));
            if (observer) observer(w, s);
            out.spectral_tail_max = std::max(out.spectral_tail_max, spectral_tail_fraction(w));
        }
    }
    out.state = std::move(w);
    out.point = s;
    return out;
}

} // namespace nlss
