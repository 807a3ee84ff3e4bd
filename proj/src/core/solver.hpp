#ifndef CSMAHS_CORE_SOLVER_HPP
#define CSMAHS_CORE_SOLVER_HPP

#include "params.hpp"
#include "space_chain.hpp"
#include "support_probs.hpp"
#include "time_chain.hpp"

namespace csmahs {

// pi_I(p_of) - pi_F(p_of): idle probability of the time chain minus free
// probability of the space chain, both through the supporting probabilities.
// The ergodic solution is the root.
double fixed_point_residual(const ModelParams& params, double p_of);

struct SolveDiagnostics {
    double residual = 0.0;      // signed residual at the returned root
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int iterations = 0;         // residual evaluations, scan included
    int sign_changes = 0;
    bool multiple_roots = false;
};

struct SolveResult {
    double p_of = 0.0;
    SolveDiagnostics diagnostics;
};

// Scans 512 uniform candidates on (1e-6, 1-1e-6) plus log-spaced candidates
// down to 1e-16 (past the synchronization point the root collapses towards
// zero and a uniform grid alone misses it), brackets every sign change and
// refines each by bisection until the bracket is below tol and the residual
// magnitude is below 1e-10.  With several roots the one with the smallest
// refined residual is returned and multiple_roots is set.
SolveResult solve_p_of(const ModelParams& params, double tol = 1e-12);

struct SolvedModel {
    ModelParams params;
    double p_of = 0.0;
    SupportProbs support;
    TimeStationary time_stationary;
    SpaceStationary space_stationary;
    SolveDiagnostics diagnostics;
};

SolvedModel solve_model(const ModelParams& params);

} // namespace csmahs

#endif
