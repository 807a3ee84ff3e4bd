#include "serialize.hpp"

#include <charconv>

#include <json.hpp>

#include "error.hpp"

namespace csmahs {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) fail(ErrorKind::internal, "number formatting failed");
    return std::string(buf, ptr);
}

MetricsReport compute_metrics_report(const SolvedModel& m) {
    MetricsReport rep;
    rep.params = m.params;
    rep.p_of = m.p_of;
    rep.pi_idle = m.time_stationary.pi_idle;
    rep.pi_tx = m.time_stationary.pi_tx;
    rep.pi_rb = m.time_stationary.pi_rb;
    rep.diagnostics = m.diagnostics;
    try {
        rep.time = time_metrics(m);
        rep.interference = interference_free(m);
        rep.goodput = m.params.frame_slots * rep.interference.p_if /
                      rep.time.t_rxp;
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::degenerate) throw;
        rep.degenerate = true;
        rep.goodput = 0.0;
    }
    return rep;
}

std::string to_json_string(const MetricsReport& r) {
    nlohmann::json j;
    j["params"] = {{"p_tx", r.params.p_tx},
                   {"frame_slots", r.params.frame_slots},
                   {"neighbors", r.params.neighbors}};
    j["p_of"] = r.p_of;
    j["pi_idle"] = r.pi_idle;
    j["pi_tx"] = r.pi_tx;
    j["pi_rb"] = r.pi_rb;
    j["t_idle"] = r.time.t_idle;
    j["t_non_idle"] = r.time.t_non_idle;
    j["t_tx"] = r.time.t_tx;
    j["t_ntx"] = r.time.t_ntx;
    j["t_txp"] = r.time.t_txp;
    j["t_rb"] = r.time.t_rb;
    j["t_rxb"] = r.time.t_rxb;
    j["t_nrx"] = r.time.t_nrx;
    j["t_rxp"] = r.time.t_rxp;
    j["p_con_rx"] = r.time.p_con_rx;
    j["p_rx"] = r.interference.p_rx;
    j["p_if"] = r.interference.p_if;
    j["f_drx_given_if"] = r.interference.f_drx_given_if;
    j["goodput"] = r.goodput;
    j["degenerate"] = r.degenerate;
    j["solver"] = {{"residual", r.diagnostics.residual},
                   {"bracket_lo", r.diagnostics.bracket_lo},
                   {"bracket_hi", r.diagnostics.bracket_hi},
                   {"iterations", r.diagnostics.iterations},
                   {"sign_changes", r.diagnostics.sign_changes},
                   {"multiple_roots", r.diagnostics.multiple_roots}};
    return j.dump(2);
}

namespace {

nlohmann::json period_json(const PeriodStat& p) {
    return {{"count", p.count}, {"mean", p.mean}, {"se", p.se}};
}

nlohmann::json hist_json(const std::vector<int64_t>& h) {
    // trim trailing zeros; index k carries the count of value k
    size_t last = h.size();
    while (last > 1 && h[last - 1] == 0) --last;
    return std::vector<int64_t>(h.begin() + 1, h.begin() + last);
}

} // namespace

std::string to_json_string(const SimReport& r) {
    nlohmann::json j;
    j["config"] = {{"stations", r.config.stations},
                   {"frame_slots", r.config.frame_slots},
                   {"neighbors", r.config.neighbors},
                   {"p_tx", r.config.p_tx},
                   {"warmup_slots", r.config.warmup_slots},
                   {"measure_slots", r.config.measure_slots},
                   {"seed", r.config.seed}};
    j["rng"] = r.rng_name;
    j["pi_idle"] = r.pi_idle;
    j["pi_tx"] = r.pi_tx;
    j["pi_rb"] = r.pi_rb;
    j["se_pi_idle"] = r.se_pi_idle;
    j["se_pi_tx"] = r.se_pi_tx;
    j["se_pi_rb"] = r.se_pi_rb;
    j["t_idle"] = period_json(r.t_idle);
    j["t_rb"] = period_json(r.t_rb);
    j["t_rxb"] = period_json(r.t_rxb);
    j["t_rxp"] = period_json(r.t_rxp);
    j["t_txp"] = period_json(r.t_txp);
    j["bursts_completed"] = r.bursts_completed;
    j["bursts_clean"] = r.bursts_clean;
    j["bursts_consecutive"] = r.bursts_consecutive;
    j["p_if"] = r.p_if;
    j["se_p_if"] = r.se_p_if;
    j["p_con_rx"] = r.p_con_rx;
    j["goodput"] = r.goodput;
    j["se_goodput"] = r.se_goodput;
    j["dtx_samples"] = r.dtx_samples;
    j["df_samples"] = r.df_samples;
    j["ring_wide_idle_slots"] = r.ring_wide_idle_slots;
    j["df_fit_p_of"] = r.df_fit_p_of;
    j["df_snapshot_stride"] = r.df_snapshot_stride;
    j["dtx_hist"] = hist_json(r.dtx_hist);
    j["df_hist"] = hist_json(r.df_hist);
    j["df_hist_spaced"] = hist_json(r.df_hist_spaced);
    return j.dump(2);
}

} // namespace csmahs
