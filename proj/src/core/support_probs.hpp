#ifndef CSMAHS_CORE_SUPPORT_PROBS_HPP
#define CSMAHS_CORE_SUPPORT_PROBS_HPP

#include "params.hpp"

namespace csmahs {

// The nine supporting transition probabilities of the per-station time chain,
// all conditional one-slot probabilities given the current station state.
// The first six are the exits from idle sensing (they sum to 1), the last
// three the exits from a hidden-station-vulnerable slot (they sum to 1).
struct SupportProbs {
    double idle_to_idle = 0.0;   // stays idle
    double idle_to_tx = 0.0;     // starts a transmission (= p_tx)
    double idle_to_v = 0.0;      // becomes vulnerable to a hidden station
    double idle_to_b = 0.0;      // blocked by two simultaneous transmitters
    double idle_to_vbl = 0.0;    // virtually blocked, synced to the later one
    double idle_to_vbe = 0.0;    // virtually blocked, synced to the earlier one
    double v_to_b = 0.0;         // a hidden later transmitter appears
    double v_to_vbe = 0.0;       // falls behind the later transmitter's area
    double v_to_v = 0.0;         // no in-range change
};

// a = (1 - p_tx) * (1 - p_of); the common decay ratio of the model.
double aux_a(double p_tx, double p_of);

// Closed-form evaluation for a candidate p_of.  Throws Error(degenerate)
// when 1 - a falls below the geometric guard (both p_tx and p_of would have
// to be below ~1e-12, which the closed tails cannot support).
SupportProbs support_probabilities(const ModelParams& params, double p_of);

// Brute-force oracle: the same nine values summed per free-area size d_F
// (inner position sums evaluated term by term) against the geometric
// weights, truncated once the remaining tail weight is below tail_eps.
// Exposed in the library so the CLI can run an --oracle cross-check.
SupportProbs support_probabilities_by_series(const ModelParams& params,
                                             double p_of, double tail_eps);

// Transition probabilities out of a vulnerable slot for a receiver at
// topological distance d_rx from the transmitter it hears.  v_to_v_d carries
// no d_rx dependence; it is returned for the sum-to-one contract.
struct VTransitionsAtDistance {
    int d_rx = 0;
    double v_to_b_d = 0.0;
    double v_to_vbe_d = 0.0;
    double v_to_v_d = 0.0;
};

VTransitionsAtDistance v_transitions_at_distance(double p_tx, int neighbors,
                                                 double p_of, int d_rx);

} // namespace csmahs

#endif
