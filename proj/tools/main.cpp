// Command-line front end: ground-state solves, convergence scenarios,
// two-potential runs, Lissajous portraits, and order fits.
//
// Exit codes: 0 pass, 1 assertion failure (slope or invariant),
// 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlss/evolution.hpp"
#include "nlss/ground_state.hpp"
#include "nlss/hamiltonian.hpp"
#include "nlss/observables.hpp"
#include "nlss/scenario.hpp"

namespace {

std::array<double, 2> parse_pair(const std::string& text, const std::string& what) {
    std::array<double, 2> out{0.0, 0.0};
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) {
            out[0] = std::stod(text);
            out[1] = 0.0;
        } else {
            out[0] = std::stod(text.substr(0, comma));
            out[1] = std::stod(text.substr(comma + 1));
        }
    } catch (const std::exception&) {
        throw nlss::config_error(what + ": expected one or two comma-separated numbers, got " + text);
    }
    return out;
}

int cmd_groundstate(double p, double beta, double L, int n, double tol, const std::string& out,
                    const std::string& ansatz_name) {
    using namespace nlss;
    auto grid = make_grid(L, n);
    GroundStateOptions opts;
    opts.tol = tol;
    const auto ansatz =
        ansatz_name == "semitrivial" ? GroundStateAnsatz::semitrivial : GroundStateAnsatz::symmetric;
    if (ansatz_name != "semitrivial" && ansatz_name != "symmetric")
        throw config_error("groundstate: ansatz must be symmetric or semitrivial");

    auto R = solve_ground_state(p, beta, grid, ansatz, opts);
    std::printf("ground state p=%g beta=%g (%s ansatz)\n", p, beta, ansatz_name.c_str());
    std::printf("  residual sup norm  %.3e\n", R.residual_norm);
    std::printf("  amplitudes         %.12f  %.12f\n", sup_norm(R.r1), sup_norm(R.r2));
    std::printf("  masses m1, m2      %.12f  %.12f\n", R.m1, R.m2);
    std::printf("  energy E(R)        %.12f\n", R.energy_value);
    std::printf("  constrained-minimum probe: %s (worst dE %.3e)\n",
                R.min_check_passed ? "passed" : "FAILED", R.min_check_worst);
    if (beta <= 1.0) {
        // in this regime the semitrivial branch competes; report both levels
        const auto other = ansatz == GroundStateAnsatz::symmetric ? GroundStateAnsatz::semitrivial
                                                                  : GroundStateAnsatz::symmetric;
        auto R2 = solve_ground_state(p, beta, grid, other, opts);
        std::printf("  branch energies: %s %.12f, %s %.12f\n",
                    ansatz == GroundStateAnsatz::symmetric ? "symmetric" : "semitrivial",
                    R.energy_value,
                    other == GroundStateAnsatz::symmetric ? "symmetric" : "semitrivial",
                    R2.energy_value);
    }
    save_ground_state(R, out + ".csv", out + ".json");
    std::printf("wrote %s.csv and %s.json\n", out.c_str(), out.c_str());
    return R.min_check_passed ? 0 : 1;
}

int cmd_run(const std::string& config, bool two_potential) {
    using namespace nlss;
    const Scenario sc = scenario_from_file(config);
    const ConvergenceReport rep =
        two_potential ? run_two_potential(sc, &std::cout) : run_scenario(sc, &std::cout);
    std::cout << report_summary(rep);
    for (const auto& st : rep.per_eps)
        if (st.status != EvolveStatus::ok) return 3;
    return rep.pass ? 0 : 1;
}

int cmd_portrait(double w1, double w2, const std::string& x0s, const std::string& v0s, double T,
                 double dt, const std::string& out) {
    using namespace nlss;
    const auto x0 = parse_pair(x0s, "portrait --x0");
    const auto v0 = parse_pair(v0s, "portrait --v0");
    const auto portrait = lissajous_portrait(w1, w2, x0, v0, T, dt);

    std::ofstream csv(out);
    if (!csv) throw config_error("portrait: cannot open " + out);
    csv << "t,x,y,xdot,ydot\n";
    char line[256];
    for (const auto& s : portrait.samples) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.x, s.y, s.xdot,
                      s.ydot);
        csv << line;
    }
    std::printf("portrait w1/w2 = %g/%g over T = %g\n", w1, w2, T);
    std::printf("  closes: %s", portrait.closes ? "yes" : "no");
    if (portrait.closes) std::printf(" (first return at t = %.6f)", portrait.closure_time);
    std::printf("\n  min return distance: %.3e\n", portrait.min_return_distance);
    std::printf("  occupied cells (100x100): %d at T, %d at 2T/3\n",
                occupied_cell_count(portrait, T), occupied_cell_count(portrait, 2.0 * T / 3.0));
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

int cmd_fit(const std::string& input) {
    using namespace nlss;
    std::ifstream in(input);
    if (!in) throw config_error("fit: cannot open " + input);
    std::vector<std::pair<double, double>> ladder;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double e, v;
        if (std::sscanf(line.c_str(), "%lg,%lg", &e, &v) == 2) ladder.emplace_back(e, v);
    }
    if (ladder.size() < 3) throw config_error("fit: need at least 3 eps,error rows");
    const auto fit = fit_order(ladder);
    std::printf("points used: %d", fit.used_points);
    for (int i : fit.excluded) std::printf("  (excluded non-positive row %d)", i);
    std::printf("\nslope: %.6f\nmax log residual: %.3e\n", fit.slope, fit.max_residual);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semiclassical soliton dynamics laboratory for the coupled focusing NLS system"};
    app.require_subcommand(1);

    double p = 1.0, beta = 2.0, L = 20.0, tol = 1e-11;
    int n = 2048;
    std::string out = "ground_state", ansatz = "symmetric";
    auto* gs = app.add_subcommand("groundstate", "solve the autonomous elliptic system");
    gs->add_option("--p", p, "nonlinearity exponent (0 < p < 2)");
    gs->add_option("--beta", beta, "coupling constant");
    gs->add_option("--L", L, "domain half length");
    gs->add_option("--n", n, "grid points (power of two)");
    gs->add_option("--tol", tol, "residual sup-norm target");
    gs->add_option("--out", out, "output path prefix");
    gs->add_option("--ansatz", ansatz, "symmetric | semitrivial");

    std::string run_config;
    auto* run = app.add_subcommand("run", "single-potential convergence scenario from JSON config");
    run->add_option("--config", run_config, "scenario JSON file")->required();

    std::string two_config;
    auto* two = app.add_subcommand("two-potential", "general two-potential run from JSON config");
    two->add_option("--config", two_config, "scenario JSON file")->required();

    double w1 = 3.0, w2 = 5.0, T = 2.0 * M_PI, dt = 5e-5;
    std::string x0 = "1,0", v0 = "0,1", pout = "portrait.csv";
    auto* por = app.add_subcommand("portrait", "2D harmonic oscillator Lissajous portrait");
    por->add_option("--w1", w1, "first frequency");
    por->add_option("--w2", w2, "second frequency");
    por->add_option("--x0", x0, "initial position pair, e.g. 1,0");
    por->add_option("--v0", v0, "initial velocity pair, e.g. 0,5");
    por->add_option("--T", T, "integration horizon");
    por->add_option("--dt", dt, "time step");
    por->add_option("--out", pout, "output CSV path");

    std::string fit_input;
    auto* fit = app.add_subcommand("fit", "least-squares order fit of eps,error rows");
    fit->add_option("--input", fit_input, "CSV with eps,error per line")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gs->parsed()) return cmd_groundstate(p, beta, L, n, tol, out, ansatz);
        if (run->parsed()) return cmd_run(run_config, false);
        if (two->parsed()) return cmd_run(two_config, true);
        if (por->parsed()) return cmd_portrait(w1, w2, x0, v0, T, dt, pout);
        if (fit->parsed()) return cmd_fit(fit_input);
    } catch (const nlss::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const nlss::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const nlss::convergence_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const nlss::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
