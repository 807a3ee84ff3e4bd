#ifndef CSMAHS_CORE_METRICS_HPP
#define CSMAHS_CORE_METRICS_HPP

#include <optional>
#include <vector>

#include "solver.hpp"

namespace csmahs {

// Renewal-process means of the channel periods, all in slots.
struct TimeMetrics {
    double t_idle = 0.0;     // mean channel idle period
    double t_non_idle = 0.0; // mean period between idle periods
    double t_tx = 0.0;       // frame duration L
    double t_ntx = 0.0;      // mean gap between own transmissions
    double t_txp = 0.0;      // mean transmission period
    double t_rb = 0.0;       // mean channel busy period
    double t_rxb = 0.0;      // mean reception burst
    double t_nrx = 0.0;      // mean non-reception period
    double t_rxp = 0.0;      // mean reception period
    double p_con_rx = 0.0;   // consecutive-reception probability
};

TimeMetrics time_metrics(const SolvedModel& model);

struct InterferenceReport {
    double p_rx = 0.0; // per-slot probability a reception burst starts
    double p_if = 0.0; // interference-free probability of a burst
    std::vector<double> f_drx_given_if; // distance law given clean reception
};

InterferenceReport interference_free(const SolvedModel& model);

struct GoodputReport {
    double goodput = 0.0;
    bool degenerate = false; // reception degenerated; goodput forced to 0
};

GoodputReport goodput(const SolvedModel& model);

// Smallest grid p_tx where goodput drops below 0.001 at (L, R), refined by
// bisection to a hundredth of the local grid step.  Degenerate points count
// as goodput 0.  Empty optional when goodput stays above the threshold.
std::optional<double> find_sync_point(int frame_slots, int neighbors,
                                      const std::vector<double>& p_tx_grid);

inline constexpr double kSyncGoodputThreshold = 1e-3;

} // namespace csmahs

#endif
