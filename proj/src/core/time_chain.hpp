#ifndef CSMAHS_CORE_TIME_CHAIN_HPP
#define CSMAHS_CORE_TIME_CHAIN_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "params.hpp"
#include "support_probs.hpp"

namespace csmahs {

// Station states of the per-slot chain.  TX/V/VBE always have total length L;
// B blocks exist for total lengths L..1 and VBL blocks for L-1..1.
enum class TimeStateKind : uint8_t { I, TX, V, VBE, B, VBL };

struct TimeStateId {
    TimeStateKind kind = TimeStateKind::I;
    int total_len = 0; // the l of sub-state (l, n); 0 for I
    int step = 0;      // the n; 0 for I

    bool operator==(const TimeStateId&) const = default;
};

std::string to_string(const TimeStateId& s);

// Deterministic state ordering: I, TX(L,1..L), V(L,1..L), VBE(L,1..L),
// B blocks by descending total length, VBL blocks likewise.  This ordering is
// part of the public contract; serialized vectors are comparable across runs.
std::vector<TimeStateId> enumerate_time_states(int frame_slots);

// Index of a state in the enumeration order, O(1).
int time_state_index(int frame_slots, const TimeStateId& s);

// Sparse row-stochastic transition matrix in enumeration order.
struct TimeChain {
    ModelParams params;
    SupportProbs support;
    int state_count = 0;
    // CSR-like storage: per-row ranges into cols/vals
    std::vector<int> row_begin; // state_count + 1 entries
    std::vector<int> cols;
    std::vector<double> vals;

    // writes "row col value" lines
    void dump_coo(std::ostream& os) const;
};

// Builds the chain and asserts every row sums to 1 within 1e-12.
TimeChain build_time_chain(const ModelParams& params,
                           const SupportProbs& support);

struct TimeStationary {
    std::vector<double> pi; // enumeration order
    double pi_idle = 0.0;
    double pi_tx = 0.0;
    double pi_rb = 0.0;
    double residual = 0.0; // max |pi^T P - pi^T|
};

// Structure-exploiting solve: with pi_I fixed, the deterministic sub-chains
// propagate mass unchanged, leaving only the L coupled vulnerable sub-states
// as a linear system; everything else follows explicitly, then the vector is
// normalized.  Residual is verified against the sparse matrix.
TimeStationary stationary_time(const TimeChain& chain);

// Generic cross-check: power iteration on the half-lazy matrix (I + P)/2 to
// an l-inf increment below tol.  Slow; intended for tests.
std::vector<double> stationary_power_iteration(const TimeChain& chain,
                                               double tol = 1e-13,
                                               int64_t max_iters = 20'000'000);

// Occupancy aggregates without materializing the full vector; used by the
// fixed-point residual where only pi_idle is needed.  Matches
// stationary_time's aggregates exactly.
struct TimeAggregates {
    double pi_idle = 0.0;
    double pi_tx = 0.0;
    double pi_rb = 0.0;
    std::vector<double> v_states; // pi of V(L,1..L)
    double pi_b_last = 0.0;       // pi of B(L,L)
    double pi_vbe_last = 0.0;     // pi of VBE(L,L)
};

TimeAggregates time_occupancy(const ModelParams& params,
                              const SupportProbs& support);

} // namespace csmahs

#endif
