#include "csmahs/csmahs.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "core/error.hpp"
#include "core/metrics.hpp"
#include "core/params.hpp"
#include "core/serialize.hpp"
#include "core/simulator.hpp"
#include "core/solver.hpp"
#include "core/space_chain.hpp"
#include "core/stats.hpp"
#include "core/time_chain.hpp"

struct csmahs_model {
    csmahs::SolvedModel solved;
    csmahs::MetricsReport metrics;
};

struct csmahs_sim_report {
    csmahs::SimReport report;
};

namespace {

thread_local std::string g_last_error;

int map_kind(csmahs::ErrorKind kind) {
    using csmahs::ErrorKind;
    switch (kind) {
    case ErrorKind::invalid_argument: return CSMAHS_E_INVALID_ARGUMENT;
    case ErrorKind::validation: return CSMAHS_E_VALIDATION;
    case ErrorKind::no_root: return CSMAHS_E_NO_ROOT;
    case ErrorKind::solver: return CSMAHS_E_SOLVER;
    case ErrorKind::degenerate: return CSMAHS_E_DEGENERATE;
    case ErrorKind::io: return CSMAHS_E_IO;
    case ErrorKind::internal: return CSMAHS_E_INTERNAL;
    }
    return CSMAHS_E_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const csmahs::Error& e) {
        g_last_error = e.what();
        return map_kind(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return CSMAHS_E_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CSMAHS_E_INTERNAL;
    }
}

int require(bool ok, const char* msg) {
    if (!ok) {
        g_last_error = msg;
        return CSMAHS_E_INVALID_ARGUMENT;
    }
    return CSMAHS_OK;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* csmahs_version(void) { return "0.1.0"; }

const char* csmahs_last_error(void) { return g_last_error.c_str(); }

int csmahs_frame_slots(double frame_seconds, double slot_seconds,
                       int32_t* slots_out) {
    if (int rc = require(slots_out != nullptr, "slots_out is null")) return rc;
    return guarded([&] {
        csmahs::PhysicalConfig cfg;
        cfg.frame_seconds = frame_seconds;
        cfg.slot_seconds = slot_seconds;
        cfg.sensing_range_m = 1.0;
        cfg.stations_per_m = 1.0;
        *slots_out = csmahs::derive_frame_slots(cfg);
        return CSMAHS_OK;
    });
}

int csmahs_neighbor_count(double sensing_range_m, double stations_per_m,
                          int32_t* count_out) {
    if (int rc = require(count_out != nullptr, "count_out is null")) return rc;
    return guarded([&] {
        csmahs::PhysicalConfig cfg;
        cfg.frame_seconds = 1.0;
        cfg.slot_seconds = 1.0;
        cfg.sensing_range_m = sensing_range_m;
        cfg.stations_per_m = stations_per_m;
        *count_out = csmahs::derive_neighbor_count(cfg);
        return CSMAHS_OK;
    });
}

int csmahs_solve(double p_tx, int32_t frame_slots, int32_t neighbors,
                 csmahs_model** model_out) {
    if (int rc = require(model_out != nullptr, "model_out is null")) return rc;
    *model_out = nullptr;
    return guarded([&] {
        csmahs::ModelParams params;
        params.p_tx = p_tx;
        params.frame_slots = frame_slots;
        params.neighbors = neighbors;
        auto m = std::make_unique<csmahs_model>();
        m->solved = csmahs::solve_model(params);
        m->metrics = csmahs::compute_metrics_report(m->solved);
        *model_out = m.release();
        return CSMAHS_OK;
    });
}

void csmahs_model_free(csmahs_model* m) { delete m; }

int csmahs_model_metrics(const csmahs_model* m, csmahs_metrics* out) {
    if (int rc = require(m && out, "null argument")) return rc;
    const csmahs::MetricsReport& r = m->metrics;
    csmahs_metrics x{};
    x.p_tx = r.params.p_tx;
    x.frame_slots = r.params.frame_slots;
    x.neighbors = r.params.neighbors;
    x.p_of = r.p_of;
    x.pi_idle = r.pi_idle;
    x.pi_tx = r.pi_tx;
    x.pi_rb = r.pi_rb;
    x.t_idle = r.time.t_idle;
    x.t_non_idle = r.time.t_non_idle;
    x.t_rb = r.time.t_rb;
    x.t_rxb = r.time.t_rxb;
    x.t_nrx = r.time.t_nrx;
    x.t_rxp = r.time.t_rxp;
    x.t_ntx = r.time.t_ntx;
    x.t_txp = r.time.t_txp;
    x.p_con_rx = r.time.p_con_rx;
    x.p_rx = r.interference.p_rx;
    x.p_if = r.interference.p_if;
    x.goodput = r.goodput;
    x.residual = r.diagnostics.residual;
    x.iterations = r.diagnostics.iterations;
    x.multiple_roots = r.diagnostics.multiple_roots ? 1 : 0;
    x.degenerate = r.degenerate ? 1 : 0;
    *out = x;
    return CSMAHS_OK;
}

int csmahs_model_metrics_json(const csmahs_model* m, char** json_out) {
    if (int rc = require(m && json_out, "null argument")) return rc;
    return guarded([&] {
        *json_out = dup_string(csmahs::to_json_string(m->metrics));
        return CSMAHS_OK;
    });
}

int csmahs_model_dtx_pmf(const csmahs_model* m, int32_t k_max, double* out) {
    if (int rc = require(m && out && k_max >= 1, "bad pmf request")) return rc;
    return guarded([&] {
        for (int32_t k = 1; k <= k_max; ++k)
            out[k - 1] = csmahs::dtx_pmf(m->solved.params, m->solved.p_of, k);
        return CSMAHS_OK;
    });
}

int csmahs_model_df_pmf(const csmahs_model* m, int32_t k_max, double* out) {
    if (int rc = require(m && out && k_max >= 1, "bad pmf request")) return rc;
    return guarded([&] {
        for (int32_t k = 1; k <= k_max; ++k)
            out[k - 1] = csmahs::df_pmf(m->solved.p_of, k);
        return CSMAHS_OK;
    });
}

int csmahs_model_drx_given_if(const csmahs_model* m, double* out) {
    if (int rc = require(m && out, "null argument")) return rc;
    return guarded([&] {
        if (m->metrics.degenerate) {
            csmahs::fail(csmahs::ErrorKind::degenerate,
                         "distance law unavailable in a degenerate regime");
        }
        const auto& f = m->metrics.interference.f_drx_given_if;
        for (size_t i = 0; i < f.size(); ++i) out[i] = f[i];
        return CSMAHS_OK;
    });
}

int csmahs_model_dump_chains(const csmahs_model* m, const char* time_path,
                             const char* space_path) {
    if (int rc = require(m != nullptr, "null model")) return rc;
    return guarded([&] {
        if (time_path) {
            std::ofstream os(time_path);
            if (!os) csmahs::fail(csmahs::ErrorKind::io,
                                  std::string("cannot open ") + time_path);
            csmahs::TimeChain chain =
                csmahs::build_time_chain(m->solved.params, m->solved.support);
            chain.dump_coo(os);
        }
        if (space_path) {
            std::ofstream os(space_path);
            if (!os) csmahs::fail(csmahs::ErrorKind::io,
                                  std::string("cannot open ") + space_path);
            csmahs::SpaceChain chain =
                csmahs::build_space_chain(m->solved.params, m->solved.p_of);
            chain.dump_coo(os);
        }
        return CSMAHS_OK;
    });
}

int csmahs_model_oracle_check(const csmahs_model* m, double tail_eps,
                              double* max_deviation_out) {
    if (int rc = require(m && max_deviation_out, "null argument")) return rc;
    return guarded([&] {
        csmahs::SupportProbs series = csmahs::support_probabilities_by_series(
            m->solved.params, m->solved.p_of, tail_eps);
        const csmahs::SupportProbs& c = m->solved.support;
        double w = 0.0;
        auto upd = [&w](double a, double b) {
            w = std::max(w, std::abs(a - b));
        };
        upd(c.idle_to_idle, series.idle_to_idle);
        upd(c.idle_to_tx, series.idle_to_tx);
        upd(c.idle_to_v, series.idle_to_v);
        upd(c.idle_to_b, series.idle_to_b);
        upd(c.idle_to_vbl, series.idle_to_vbl);
        upd(c.idle_to_vbe, series.idle_to_vbe);
        upd(c.v_to_b, series.v_to_b);
        upd(c.v_to_vbe, series.v_to_vbe);
        upd(c.v_to_v, series.v_to_v);
        *max_deviation_out = w;
        return CSMAHS_OK;
    });
}

int csmahs_sync_point(int32_t frame_slots, int32_t neighbors,
                      const double* p_tx_grid, int32_t grid_len,
                      double* sp_out, int32_t* found_out) {
    if (int rc = require(p_tx_grid && sp_out && found_out && grid_len > 0,
                         "bad sync-point request"))
        return rc;
    return guarded([&] {
        std::vector<double> grid(p_tx_grid, p_tx_grid + grid_len);
        auto sp = csmahs::find_sync_point(frame_slots, neighbors, grid);
        *found_out = sp.has_value() ? 1 : 0;
        *sp_out = sp.value_or(0.0);
        return CSMAHS_OK;
    });
}

int csmahs_simulate(const csmahs_sim_config* cfg,
                    csmahs_sim_report** report_out) {
    if (int rc = require(cfg && report_out, "null argument")) return rc;
    *report_out = nullptr;
    return guarded([&] {
        csmahs::SimConfig c;
        c.stations = cfg->stations;
        c.frame_slots = cfg->frame_slots;
        c.neighbors = cfg->neighbors;
        c.p_tx = cfg->p_tx;
        c.warmup_slots = cfg->warmup_slots;
        c.measure_slots = cfg->measure_slots;
        c.seed = cfg->seed;
        c.check_with_scan = cfg->check_with_scan != 0;
        auto r = std::make_unique<csmahs_sim_report>();
        r->report = csmahs::run_simulation(c);
        *report_out = r.release();
        return CSMAHS_OK;
    });
}

void csmahs_sim_report_free(csmahs_sim_report* r) { delete r; }

int csmahs_sim_report_summary(const csmahs_sim_report* r,
                              csmahs_sim_summary* out) {
    if (int rc = require(r && out, "null argument")) return rc;
    const csmahs::SimReport& s = r->report;
    csmahs_sim_summary x{};
    x.pi_idle = s.pi_idle;
    x.pi_tx = s.pi_tx;
    x.pi_rb = s.pi_rb;
    x.t_idle = s.t_idle.mean;
    x.t_rb = s.t_rb.mean;
    x.t_rxb = s.t_rxb.mean;
    x.t_rxp = s.t_rxp.mean;
    x.t_txp = s.t_txp.mean;
    x.p_if = s.p_if;
    x.p_con_rx = s.p_con_rx;
    x.goodput = s.goodput;
    x.df_fit_p_of = s.df_fit_p_of;
    x.se_pi_idle = s.se_pi_idle;
    x.se_pi_tx = s.se_pi_tx;
    x.se_pi_rb = s.se_pi_rb;
    x.se_t_rb = s.t_rb.se;
    x.se_t_rxp = s.t_rxp.se;
    x.se_p_if = s.se_p_if;
    x.se_goodput = s.se_goodput;
    x.bursts = s.bursts_completed;
    x.ring_wide_idle_slots = s.ring_wide_idle_slots;
    x.dtx_samples = s.dtx_samples;
    x.df_samples = s.df_samples;
    x.seed = s.config.seed;
    *out = x;
    return CSMAHS_OK;
}

int csmahs_sim_report_json(const csmahs_sim_report* r, char** json_out) {
    if (int rc = require(r && json_out, "null argument")) return rc;
    return guarded([&] {
        *json_out = dup_string(csmahs::to_json_string(r->report));
        return CSMAHS_OK;
    });
}

int csmahs_sim_report_pmf(const csmahs_sim_report* r, int32_t which,
                          int32_t k_max, double* out) {
    if (int rc = require(r && out && k_max >= 1 && (which == 0 || which == 1),
                         "bad pmf request"))
        return rc;
    return guarded([&] {
        auto pmf = which == 0 ? r->report.dtx_pmf_empirical(k_max)
                              : r->report.df_pmf_empirical(k_max);
        for (int32_t k = 0; k < k_max; ++k) out[k] = pmf[k];
        return CSMAHS_OK;
    });
}

int csmahs_sim_df_chi_square(const csmahs_sim_report* r, double p_of,
                             double significance, double* statistic_out,
                             int32_t* dof_out, int32_t* pass_out) {
    if (int rc = require(r && statistic_out && dof_out && pass_out,
                         "null argument"))
        return rc;
    return guarded([&] {
        csmahs::ChiSquareResult c = csmahs::chi_square_geometric(
            r->report.df_hist_spaced, p_of, significance);
        *statistic_out = c.statistic;
        *dof_out = c.dof;
        *pass_out = c.pass ? 1 : 0;
        return CSMAHS_OK;
    });
}

void csmahs_string_free(char* s) { delete[] s; }

} // extern "C"
