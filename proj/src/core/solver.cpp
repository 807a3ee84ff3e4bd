#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace csmahs {

double fixed_point_residual(const ModelParams& params, double p_of) {
    SupportProbs sp = support_probabilities(params, p_of);
    TimeAggregates agg = time_occupancy(params, sp);
    return agg.pi_idle - space_pi_free(params, p_of);
}

namespace {

std::vector<double> scan_grid() {
    std::vector<double> grid;
    // log-spaced candidates below the uniform range, four per decade
    for (int e = -16; e < -6; ++e) {
        for (double m : {1.0, 1.778279410038923, 3.1622776601683795,
                         5.623413251903491}) {
            grid.push_back(m * std::pow(10.0, e));
        }
    }
    const double lo = 1e-6, hi = 1.0 - 1e-6;
    for (int i = 0; i < 512; ++i) {
        grid.push_back(lo + (hi - lo) * i / 511.0);
    }
    return grid;
}

} // namespace

SolveResult solve_p_of(const ModelParams& params, double tol) {
    validate(params);
    if (!(tol >= 1e-14)) {
        fail(ErrorKind::invalid_argument, "tol must be >= 1e-14");
    }
    const std::vector<double> grid = scan_grid();
    int evals = 0;
    auto res = [&](double p) {
        ++evals;
        return fixed_point_residual(params, p);
    };

    std::vector<double> vals(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) vals[i] = res(grid[i]);

    struct Root {
        double p, r, lo, hi;
    };
    std::vector<Root> roots;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        if (vals[i] == 0.0) {
            roots.push_back({grid[i], 0.0, grid[i], grid[i]});
            continue;
        }
        if (!(vals[i] < 0.0) == !(vals[i + 1] < 0.0)) continue;
        double lo = grid[i], hi = grid[i + 1];
        double flo = vals[i];
        double best_p = lo, best_r = std::abs(flo);
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break; // bracket at ulp resolution
            double fm = res(mid);
            if (std::abs(fm) < best_r) {
                best_r = std::abs(fm);
                best_p = mid;
            }
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
            if (hi - lo <= tol && best_r <= 1e-10) break;
        }
        roots.push_back({best_p, best_r, lo, hi});
    }

    if (roots.empty()) {
        std::ostringstream msg;
        msg << "no sign change of pi_I - pi_F on the scan grid (p_tx = "
            << params.p_tx << ", L = " << params.frame_slots
            << ", R = " << params.neighbors << ")";
        fail(ErrorKind::no_root, msg.str());
    }

    const Root& best = *std::min_element(
        roots.begin(), roots.end(),
        [](const Root& a, const Root& b) { return a.r < b.r; });

    SolveResult out;
    out.p_of = best.p;
    out.diagnostics.residual = fixed_point_residual(params, best.p);
    out.diagnostics.bracket_lo = best.lo;
    out.diagnostics.bracket_hi = best.hi;
    out.diagnostics.iterations = evals;
    out.diagnostics.sign_changes = static_cast<int>(roots.size());
    out.diagnostics.multiple_roots = roots.size() > 1;
    if (std::abs(out.diagnostics.residual) > 1e-10) {
        std::ostringstream msg;
        msg << "fixed-point residual " << out.diagnostics.residual
            << " above 1e-10 after refinement";
        fail(ErrorKind::solver, msg.str());
    }
    return out;
}

SolvedModel solve_model(const ModelParams& params) {
    SolveResult r = solve_p_of(params);
    SolvedModel m;
    m.params = params;
    m.p_of = r.p_of;
    m.diagnostics = r.diagnostics;
    m.support = support_probabilities(params, m.p_of);
    m.time_stationary = stationary_time(build_time_chain(params, m.support));
    m.space_stationary = stationary_space(build_space_chain(params, m.p_of));
    return m;
}

} // namespace csmahs
