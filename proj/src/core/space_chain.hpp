#ifndef CSMAHS_CORE_SPACE_CHAIN_HPP
#define CSMAHS_CORE_SPACE_CHAIN_HPP

#include <iosfwd>
#include <vector>

#include "params.hpp"

namespace csmahs {

// Geometric law of the interference-free area size d_F.
double df_pmf(double p_of, int k);

// Inter-transmitter distance PMF.  Three ranges: synchronized gaps up to R,
// the R-Zone-governed band R+1..2R+1, and the geometric tail beyond.
double dtx_pmf(const ModelParams& params, double p_of, int k);

// Pr{d_TX >= m}, closed form per range.
double dtx_survival(const ModelParams& params, double p_of, int m);

// Limiting distribution of the isolated R-Zone chain: no-transmission state
// plus (R+1) x L transmitting states whose probability depends only on the
// closest-transmitter position i.
struct RZoneSolution {
    double pi_nt = 0.0;
    std::vector<double> pi_t; // i = 0..R; constant over the frame-slot index
};

RZoneSolution rzone_closed_forms(double p_tx, int frame_slots, int neighbors,
                                 double p_of);

// Channel-occupancy chain over one spatial traversal at a frozen instant.
// States: F (free), then O(0)..O(2R) in order.  Row O(R+j-1) exits to the
// next transmitter with the hazard of gap j, i.e. f_dtx(j) / Pr{d_TX >= j};
// writing the plain PMF there (as one reading of the source material
// suggests) breaks both the d_TX reconstruction and the validated fixed
// points, so the hazard form is used throughout.
struct SpaceChain {
    ModelParams params;
    double p_of = 0.0;
    int state_count = 0;       // 2R + 2
    std::vector<double> matrix; // dense, row-major
    double o_r_self = 0.0;      // derived self-transition of row O(R)

    double at(int row, int col) const {
        return matrix[static_cast<size_t>(row) * state_count + col];
    }
    void dump_coo(std::ostream& os) const;
};

// Builds the chain; verifies rows sum to 1 within 1e-12 and that chaining
// the hazards reproduces dtx_pmf for every gap in 2..R within 1e-10.
SpaceChain build_space_chain(const ModelParams& params, double p_of);

struct SpaceStationary {
    std::vector<double> pi; // F first, then O(0)..O(2R)
    double pi_free = 0.0;
    double residual = 0.0;
};

SpaceStationary stationary_space(const SpaceChain& chain);

// Power-iteration cross-check on the half-lazy matrix; for tests.
std::vector<double> space_stationary_power_iteration(const SpaceChain& chain,
                                                     double tol = 1e-13,
                                                     long max_iters = 50'000'000);

// pi_F without materializing the chain; used by the fixed-point residual.
double space_pi_free(const ModelParams& params, double p_of);

} // namespace csmahs

#endif
