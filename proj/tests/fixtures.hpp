#pragma once

// shared slow-to-build objects for the unit suites

#include <memory>

#include "nlss/ground_state.hpp"
#include "nlss/profile.hpp"

namespace fixtures {

struct Setup {
    std::shared_ptr<const nlss::Grid> ref_grid;
    nlss::GroundStatePair R;
    nlss::ProfilePair prof;
};

inline const Setup& coupled() {
    static Setup s = [] {
        Setup out;
        out.ref_grid = nlss::make_grid(16.0, 512);
        out.R = nlss::solve_ground_state(1.0, 2.0, out.ref_grid);
        out.prof = nlss::ProfilePair::from_fields(out.R.r1, out.R.r2, out.R.m1, out.R.m2);
        return out;
    }();
    return s;
}

inline std::shared_ptr<const nlss::Grid> fine_grid_for(double eps, double L = 16.0, int n_ref = 512) {
    int n = n_ref;
    while (n < n_ref / eps) n *= 2;
    return nlss::make_grid(L, n);
}

} // namespace fixtures
