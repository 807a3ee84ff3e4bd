#ifndef CSMAHS_CORE_VALIDATION_HPP
#define CSMAHS_CORE_VALIDATION_HPP

#include <string>
#include <vector>

#include "params.hpp"
#include "simulator.hpp"

namespace csmahs {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0; // measured quantity (deviation, error, ...)
    double bound = 0.0; // what it was checked against
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool all_passed() const;
    double worst(const std::string& prefix) const; // max value among matches
};

std::string to_json_string(const SuiteReport& report);

// Grid for the closed-form identity checks: every combination of the given
// axes, at least 100 points with the defaults.
struct IdentityGrid {
    std::vector<double> p_tx = {0.05, 0.3, 0.6};
    std::vector<double> p_of = {0.02, 0.15, 0.5};
    std::vector<int> frame_slots = {2, 8, 16, 32};
    std::vector<int> neighbors = {2, 4, 8, 16};
};

// Sum-to-one identities, R-Zone exit identity, distance-PMF mass closure,
// stationary residuals of both chains, and the two-route non-idle-period
// consistency, all at their stated tolerances.
SuiteReport run_identity_suite(const IdentityGrid& grid = {});

// The numeric anchors quoted for the reference setting: the two fixed-point
// values, the saturated idle probability 1/(L+1), the busy period pinned at
// L, and the collapsed goodput.
SuiteReport run_paper_anchor_suite();

struct ToleranceProfile {
    double rel_tol = 0.05;
    double abs_floor = 0.005;
    double tv_bound = 0.02;
    double chi2_significance = 0.05;
    int seeds = 5;
    uint64_t seed_base = 0x00C5'0A00'0001ULL;
    // simulation window; acceptance settings by default
    int stations = 800;
    int64_t warmup_slots = 50'000;
    int64_t measure_slots = 500'000;
    std::vector<double> p_tx_points = {0.01, 0.05, 0.1, 0.2, 0.34};
    std::vector<int> neighbor_points = {8, 16};
    int frame_slots = 32;
};

// Analytic metrics against pooled multi-seed simulation at every grid point.
SuiteReport run_sim_vs_analytic_suite(const ToleranceProfile& profile);

// Pools several seeds of one configuration into a single report (occupancy
// and period means weighted, histograms summed).
SimReport pooled_simulation(const SimConfig& base, int seeds,
                            uint64_t seed_base);

} // namespace csmahs

#endif
