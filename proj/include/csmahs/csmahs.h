/* csmahs -- steady-state analysis and Monte-Carlo simulation of slotted CSMA
 * packet broadcast on a one-dimensional station chain with hidden stations.
 *
 * The analytic side solves a coupled pair of Markov chains (per-station state
 * over time, channel occupancy over space) for the single unknown p_OF, the
 * geometric parameter of the interference-free area size, and derives the
 * steady-state performance metrics from the solution.  The simulator runs the
 * same protocol on a finite ring and measures every metric empirically.
 *
 * All functions return CSMAHS_OK or a nonzero status; csmahs_last_error()
 * gives a human-readable message for the current thread.
 */
#ifndef CSMAHS_H
#define CSMAHS_H

#include <stdint.h>

#if defined(_WIN32)
#define CSMAHS_API __declspec(dllexport)
#else
#define CSMAHS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
    CSMAHS_OK = 0,
    CSMAHS_E_INVALID_ARGUMENT = 1, /* null pointer or value outside domain */
    CSMAHS_E_VALIDATION = 2,       /* model parameter invariant violated */
    CSMAHS_E_NO_ROOT = 3,          /* fixed point: no sign change on scan grid */
    CSMAHS_E_SOLVER = 4,           /* stationary solve failed or residual too large */
    CSMAHS_E_DEGENERATE = 5,       /* degenerate regime, see message */
    CSMAHS_E_IO = 6,
    CSMAHS_E_INTERNAL = 7
};

typedef struct csmahs_model csmahs_model;
typedef struct csmahs_sim_report csmahs_sim_report;

CSMAHS_API const char* csmahs_version(void);
/* Message of the most recent failure on this thread. */
CSMAHS_API const char* csmahs_last_error(void);

/* Physical-to-topological conversion: frame duration in whole slots
 * (ceiling), one-side neighbor count (floor of range * density; it is an
 * error when the product floors to zero). */
CSMAHS_API int csmahs_frame_slots(double frame_seconds, double slot_seconds,
                                  int32_t* slots_out);
CSMAHS_API int csmahs_neighbor_count(double sensing_range_m,
                                     double stations_per_m,
                                     int32_t* count_out);

/* Solve the model for (p_tx, L, R).  0 < p_tx < 1, L >= 1, R >= 1. */
CSMAHS_API int csmahs_solve(double p_tx, int32_t frame_slots,
                            int32_t neighbors, csmahs_model** model_out);
CSMAHS_API void csmahs_model_free(csmahs_model* m);

typedef struct csmahs_metrics {
    double p_tx;
    int32_t frame_slots;
    int32_t neighbors;
    double p_of;       /* geometric parameter of the free-area size */
    double pi_idle;    /* stationary probability of idle sensing */
    double pi_tx;      /* ... of transmitting */
    double pi_rb;      /* ... of receiving-busy */
    double t_idle;     /* mean channel idle period [slots] */
    double t_non_idle; /* mean non-idle period [slots] */
    double t_rb;       /* mean channel busy period [slots] */
    double t_rxb;      /* mean reception burst [slots] */
    double t_nrx;      /* mean non-reception period [slots] */
    double t_rxp;      /* mean reception period [slots] */
    double t_ntx;      /* mean gap between own transmissions [slots] */
    double t_txp;      /* mean transmission period [slots] */
    double p_con_rx;   /* consecutive-reception probability */
    double p_rx;       /* per-slot reception start probability */
    double p_if;       /* interference-free probability of a burst */
    double goodput;    /* fraction of time receiving interference-free */
    double residual;   /* |pi_I - pi_F| at the solved p_of */
    int32_t iterations;
    uint8_t multiple_roots; /* more than one sign change on the scan grid */
    uint8_t degenerate;     /* reception degenerated; goodput forced to 0 */
} csmahs_metrics;

CSMAHS_API int csmahs_model_metrics(const csmahs_model* m, csmahs_metrics* out);
/* JSON with the same fields; free with csmahs_string_free. */
CSMAHS_API int csmahs_model_metrics_json(const csmahs_model* m,
                                         char** json_out);
/* Analytic PMFs evaluated at k = 1..k_max (out has k_max entries). */
CSMAHS_API int csmahs_model_dtx_pmf(const csmahs_model* m, int32_t k_max,
                                    double* out);
CSMAHS_API int csmahs_model_df_pmf(const csmahs_model* m, int32_t k_max,
                                   double* out);
/* Conditional reception-distance law given an interference-free burst;
 * out has R entries for d_rx = 1..R. */
CSMAHS_API int csmahs_model_drx_given_if(const csmahs_model* m, double* out);
/* Text dumps of the transition matrices, one "row col value" line per entry.
 * Either path may be NULL to skip that dump. */
CSMAHS_API int csmahs_model_dump_chains(const csmahs_model* m,
                                        const char* time_path,
                                        const char* space_path);
/* Re-evaluates the nine supporting probabilities with the brute-force series
 * (truncated at tail_eps) and reports the largest absolute deviation from
 * the closed forms used by the model. */
CSMAHS_API int csmahs_model_oracle_check(const csmahs_model* m,
                                         double tail_eps,
                                         double* max_deviation_out);

/* Smallest p_tx on the ascending grid where goodput drops below 0.001,
 * refined by bisection to grid-step/100.  found_out is 0 when goodput stays
 * above the threshold everywhere on the grid. */
CSMAHS_API int csmahs_sync_point(int32_t frame_slots, int32_t neighbors,
                                 const double* p_tx_grid, int32_t grid_len,
                                 double* sp_out, int32_t* found_out);

typedef struct csmahs_sim_config {
    int32_t stations; /* ring size N, must be >= 4R + 4 */
    int32_t frame_slots;
    int32_t neighbors;
    double p_tx;
    int64_t warmup_slots;
    int64_t measure_slots;
    uint64_t seed;
    uint8_t check_with_scan; /* cross-check busy counters per slot (slow) */
} csmahs_sim_config;

typedef struct csmahs_sim_summary {
    double pi_idle, pi_tx, pi_rb;
    double t_idle, t_rb, t_rxb, t_rxp, t_txp;
    double p_if, p_con_rx, goodput;
    double df_fit_p_of; /* geometric MLE of the free-area parameter */
    double se_pi_idle, se_pi_tx, se_pi_rb; /* batch-means standard errors */
    double se_t_rb, se_t_rxp, se_p_if, se_goodput;
    int64_t bursts;
    int64_t ring_wide_idle_slots;
    int64_t dtx_samples;
    int64_t df_samples;
    uint64_t seed;
} csmahs_sim_summary;

CSMAHS_API int csmahs_simulate(const csmahs_sim_config* cfg,
                               csmahs_sim_report** report_out);
CSMAHS_API void csmahs_sim_report_free(csmahs_sim_report* r);
CSMAHS_API int csmahs_sim_report_summary(const csmahs_sim_report* r,
                                         csmahs_sim_summary* out);
CSMAHS_API int csmahs_sim_report_json(const csmahs_sim_report* r,
                                      char** json_out);
/* Empirical PMF over k = 1..k_max; which: 0 = inter-transmitter distance,
 * 1 = free-area size. */
CSMAHS_API int csmahs_sim_report_pmf(const csmahs_sim_report* r, int32_t which,
                                     int32_t k_max, double* out);
/* Pearson goodness of fit of the spaced free-area samples against the
 * geometric law with parameter p_of.  pass_out is 1 when the statistic stays
 * under the critical value at the given significance level. */
CSMAHS_API int csmahs_sim_df_chi_square(const csmahs_sim_report* r,
                                        double p_of, double significance,
                                        double* statistic_out,
                                        int32_t* dof_out, int32_t* pass_out);

CSMAHS_API void csmahs_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CSMAHS_H */
