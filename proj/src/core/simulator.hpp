#ifndef CSMAHS_CORE_SIMULATOR_HPP
#define CSMAHS_CORE_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace csmahs {

struct SimConfig {
    int stations = 800;      // ring size N
    int frame_slots = 32;    // L
    int neighbors = 16;      // R
    double p_tx = 0.1;
    int64_t warmup_slots = 50'000;
    int64_t measure_slots = 500'000;
    uint64_t seed = 0;
    bool check_with_scan = false; // per-slot brute-force cross-checks (slow)
};

SimConfig validate_sim_config(const SimConfig& cfg);

struct PeriodStat {
    int64_t count = 0;
    double mean = 0.0;
    double se = 0.0; // standard error of the mean
};

// Everything measured over the measure window.  Periods truncated by the
// window boundaries are discarded.
struct SimReport {
    SimConfig config;
    std::string rng_name = "mt19937_64";

    double pi_idle = 0.0, pi_tx = 0.0, pi_rb = 0.0;
    double se_pi_idle = 0.0, se_pi_tx = 0.0, se_pi_rb = 0.0;

    PeriodStat t_idle, t_rb, t_rxb, t_rxp, t_txp;

    int64_t bursts_completed = 0;
    int64_t bursts_clean = 0;     // exactly one frame heard
    int64_t bursts_consecutive = 0;
    double p_if = 0.0, se_p_if = 0.0;
    double p_con_rx = 0.0;
    double goodput = 0.0, se_goodput = 0.0;

    // index k holds the count for value k (index 0 unused)
    std::vector<int64_t> dtx_hist, df_hist;
    // free-area sizes sampled every df_snapshot_stride slots only; spaced
    // samples are close to independent and feed the goodness-of-fit test
    std::vector<int64_t> df_hist_spaced;
    int64_t df_snapshot_stride = 997;
    int64_t dtx_samples = 0, df_samples = 0;
    int64_t ring_wide_idle_slots = 0; // whole ring idle; kept out of the fit
    double df_fit_p_of = 0.0;         // geometric MLE, 1 / mean run length

    std::vector<double> dtx_pmf_empirical(int k_max) const;
    std::vector<double> df_pmf_empirical(int k_max) const;
};

// Slotted two-phase simulation: all stations observe the previous slot, then
// all transmission starts commit together.  Deterministic for a given
// (config, seed).
SimReport run_simulation(const SimConfig& cfg);

} // namespace csmahs

#endif
