#include "validation.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "geoseries.hpp"
#include "metrics.hpp"
#include "serialize.hpp"
#include "solver.hpp"
#include "stats.hpp"

namespace csmahs {

bool SuiteReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

double SuiteReport::worst(const std::string& prefix) const {
    double w = 0.0;
    for (const auto& c : checks) {
        if (c.name.rfind(prefix, 0) == 0) w = std::max(w, c.value);
    }
    return w;
}

std::string to_json_string(const SuiteReport& r) {
    nlohmann::json j;
    j["suite"] = r.suite;
    j["passed"] = r.all_passed();
    auto& arr = j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) {
        arr.push_back({{"name", c.name},
                       {"passed", c.passed},
                       {"value", c.value},
                       {"bound", c.bound},
                       {"detail", c.detail}});
    }
    return j.dump(2);
}

namespace {

void add_bound_check(SuiteReport& rep, const std::string& name, double value,
                     double bound, const std::string& detail = "") {
    rep.checks.push_back({name, value <= bound, value, bound, detail});
}

std::string point_tag(const ModelParams& p, double p_of) {
    std::ostringstream os;
    os << "(p_tx=" << p.p_tx << ",L=" << p.frame_slots << ",R=" << p.neighbors
       << ",p_of=" << p_of << ")";
    return os.str();
}

} // namespace

SuiteReport run_identity_suite(const IdentityGrid& grid) {
    SuiteReport rep;
    rep.suite = "identities";
    double worst_sum_i = 0.0, worst_sum_v = 0.0, worst_rzone = 0.0;
    double worst_dtx_mass = 0.0, worst_df_mass = 0.0;
    double worst_res_time = 0.0, worst_res_space = 0.0, worst_tni = 0.0;
    std::string tag_sum_i, tag_tni;
    int points = 0;

    for (double p_tx : grid.p_tx)
        for (double p_of : grid.p_of)
            for (int L : grid.frame_slots)
                for (int R : grid.neighbors) {
                    ++points;
                    ModelParams params{p_tx, L, R};
                    SupportProbs sp = support_probabilities(params, p_of);
                    double si = std::abs(
                        sp.idle_to_idle + sp.idle_to_tx + sp.idle_to_v +
                        sp.idle_to_b + sp.idle_to_vbl + sp.idle_to_vbe - 1.0);
                    double sv =
                        std::abs(sp.v_to_b + sp.v_to_vbe + sp.v_to_v - 1.0);
                    if (si > worst_sum_i) {
                        worst_sum_i = si;
                        tag_sum_i = point_tag(params, p_of);
                    }
                    worst_sum_v = std::max(worst_sum_v, sv);

                    // R-Zone exits: staying silent plus every closest-
                    // transmitter position must exhaust the possibilities
                    double a = aux_a(p_tx, p_of);
                    double stay = 1.0 - p_tx * geo_sum(a, 1, R + 1);
                    double go = 0.0;
                    for (int i = 0; i <= R; ++i) go += p_tx * std::pow(a, i);
                    worst_rzone = std::max(worst_rzone, std::abs(stay + go - 1.0));

                    // distance-PMF mass closure via the closed tails
                    double mass = 0.0;
                    for (int k = 1; k <= 2 * R + 1; ++k)
                        mass += dtx_pmf(params, p_of, k);
                    mass += dtx_survival(params, p_of, 2 * R + 2);
                    worst_dtx_mass = std::max(worst_dtx_mass, std::abs(mass - 1.0));
                    double df_mass = 0.0;
                    for (int k = 1; k <= 64; ++k) df_mass += df_pmf(p_of, k);
                    df_mass += std::pow(1.0 - p_of, 64);
                    worst_df_mass = std::max(worst_df_mass, std::abs(df_mass - 1.0));

                    TimeChain chain = build_time_chain(params, sp);
                    TimeStationary st = stationary_time(chain);
                    worst_res_time = std::max(worst_res_time, st.residual);
                    SpaceChain sc = build_space_chain(params, p_of);
                    SpaceStationary ss = stationary_space(sc);
                    worst_res_space = std::max(worst_res_space, ss.residual);

                    // non-idle period two ways: from the idle occupancy and
                    // from the busy/transmission mixture with the busy period
                    // taken from the renewal-reward route
                    double t_i = 1.0 / (1.0 - sp.idle_to_idle);
                    double tni_occupancy =
                        t_i * (1.0 - st.pi_idle) / st.pi_idle;
                    double entry = 1.0 - sp.idle_to_idle - sp.idle_to_tx;
                    double t_rb_renewal =
                        st.pi_rb / (st.pi_idle * entry);
                    double tni_mixture =
                        (entry * t_rb_renewal + sp.idle_to_tx * L) /
                        (1.0 - sp.idle_to_idle);
                    double tni_dev = std::abs(tni_occupancy - tni_mixture) /
                                     std::max(1.0, tni_occupancy);
                    if (tni_dev > worst_tni) {
                        worst_tni = tni_dev;
                        tag_tni = point_tag(params, p_of);
                    }
                }

    std::string pts = std::to_string(points) + " grid points";
    add_bound_check(rep, "idle_exit_six_way_sum", worst_sum_i, 1e-12,
                    pts + "; worst at " + tag_sum_i);
    add_bound_check(rep, "v_exit_three_way_sum", worst_sum_v, 1e-12, pts);
    add_bound_check(rep, "rzone_exit_identity", worst_rzone, 1e-12, pts);
    add_bound_check(rep, "dtx_total_mass", worst_dtx_mass, 1e-9, pts);
    add_bound_check(rep, "df_total_mass", worst_df_mass, 1e-9, pts);
    add_bound_check(rep, "time_stationary_residual", worst_res_time, 1e-10, pts);
    add_bound_check(rep, "space_stationary_residual", worst_res_space, 1e-10, pts);
    add_bound_check(rep, "t_non_idle_two_routes", worst_tni, 1e-9,
                    pts + "; worst at " + tag_tni);
    return rep;
}

SuiteReport run_paper_anchor_suite() {
    SuiteReport rep;
    rep.suite = "anchors";

    {
        SolvedModel m = solve_model({0.1, 32, 16});
        add_bound_check(rep, "p_of(0.1,32,16) = 0.0996",
                        std::abs(m.p_of - 0.0996), 5e-4,
                        "solved " + format_double(m.p_of));
    }
    {
        SolvedModel m = solve_model({0.34, 32, 16});
        add_bound_check(rep, "p_of(0.34,32,16) = 0.0116",
                        std::abs(m.p_of - 0.0116), 5e-4,
                        "solved " + format_double(m.p_of));
    }
    for (int R : {8, 16}) {
        SolvedModel m = solve_model({0.8, 32, R});
        MetricsReport mr = compute_metrics_report(m);
        std::string suffix = "(0.8,32," + std::to_string(R) + ")";
        add_bound_check(rep, "pi_idle" + suffix + " = 1/33",
                        std::abs(mr.pi_idle - 1.0 / 33.0), 2e-3,
                        "pi_idle " + format_double(mr.pi_idle));
        add_bound_check(rep, "t_rb" + suffix + " = 32",
                        std::abs(mr.time.t_rb - 32.0), 0.5,
                        "t_rb " + format_double(mr.time.t_rb));
        add_bound_check(rep, "goodput" + suffix + " < 0.001", mr.goodput,
                        1e-3, "goodput " + format_double(mr.goodput));
    }
    return rep;
}

SimReport pooled_simulation(const SimConfig& base, int seeds,
                            uint64_t seed_base) {
    if (seeds < 1) fail(ErrorKind::invalid_argument, "seeds must be >= 1");
    SimReport pool;
    for (int i = 0; i < seeds; ++i) {
        SimConfig cfg = base;
        cfg.seed = seed_base + static_cast<uint64_t>(i);
        SimReport r = run_simulation(cfg);
        if (i == 0) {
            pool = r;
            continue;
        }
        // occupancies are equal-length time averages
        double w0 = static_cast<double>(i) / (i + 1), w1 = 1.0 - w0;
        pool.pi_idle = w0 * pool.pi_idle + w1 * r.pi_idle;
        pool.pi_tx = w0 * pool.pi_tx + w1 * r.pi_tx;
        pool.pi_rb = w0 * pool.pi_rb + w1 * r.pi_rb;
        auto pool_period = [](PeriodStat& a, const PeriodStat& b) {
            int64_t n = a.count + b.count;
            if (n == 0) return;
            a.mean = (a.mean * a.count + b.mean * b.count) / n;
            a.se = std::sqrt(a.se * a.se * a.count * a.count +
                             b.se * b.se * b.count * b.count) /
                   n;
            a.count = n;
        };
        pool_period(pool.t_idle, r.t_idle);
        pool_period(pool.t_rb, r.t_rb);
        pool_period(pool.t_rxb, r.t_rxb);
        pool_period(pool.t_rxp, r.t_rxp);
        pool_period(pool.t_txp, r.t_txp);
        pool.bursts_completed += r.bursts_completed;
        pool.bursts_clean += r.bursts_clean;
        pool.bursts_consecutive += r.bursts_consecutive;
        pool.dtx_samples += r.dtx_samples;
        pool.df_samples += r.df_samples;
        pool.ring_wide_idle_slots += r.ring_wide_idle_slots;
        for (size_t k = 0; k < pool.dtx_hist.size(); ++k) {
            pool.dtx_hist[k] += r.dtx_hist[k];
            pool.df_hist[k] += r.df_hist[k];
            pool.df_hist_spaced[k] += r.df_hist_spaced[k];
        }
        pool.goodput = w0 * pool.goodput + w1 * r.goodput;
        pool.se_goodput = std::hypot(w0 * pool.se_goodput, w1 * r.se_goodput);
        pool.se_pi_idle = std::hypot(w0 * pool.se_pi_idle, w1 * r.se_pi_idle);
        pool.se_pi_tx = std::hypot(w0 * pool.se_pi_tx, w1 * r.se_pi_tx);
        pool.se_pi_rb = std::hypot(w0 * pool.se_pi_rb, w1 * r.se_pi_rb);
        pool.se_p_if = std::hypot(w0 * pool.se_p_if, w1 * r.se_p_if);
    }
    if (pool.bursts_completed > 0) {
        pool.p_if =
            static_cast<double>(pool.bursts_clean) / pool.bursts_completed;
        pool.p_con_rx = static_cast<double>(pool.bursts_consecutive) /
                        pool.bursts_completed;
    }
    pool.df_fit_p_of = geometric_mle(pool.df_hist);
    return pool;
}

SuiteReport run_sim_vs_analytic_suite(const ToleranceProfile& profile) {
    SuiteReport rep;
    rep.suite = "sim_vs_analytic";
    const double floor_ = profile.abs_floor;

    for (int R : profile.neighbor_points) {
        for (double p_tx : profile.p_tx_points) {
            ModelParams params{p_tx, profile.frame_slots, R};
            SolvedModel m = solve_model(params);
            MetricsReport mr = compute_metrics_report(m);

            SimConfig cfg;
            cfg.stations = profile.stations;
            cfg.frame_slots = profile.frame_slots;
            cfg.neighbors = R;
            cfg.p_tx = p_tx;
            cfg.warmup_slots = profile.warmup_slots;
            cfg.measure_slots = profile.measure_slots;
            SimReport sim = pooled_simulation(cfg, profile.seeds,
                                              profile.seed_base);

            std::ostringstream tag;
            tag << "(p_tx=" << p_tx << ",R=" << R << ")";
            auto compare = [&](const std::string& metric, double analytic,
                               double simulated) {
                double err = std::abs(analytic - simulated);
                bool ok = err <= floor_ ||
                          err <= profile.rel_tol * std::abs(analytic);
                std::ostringstream d;
                d << "analytic " << format_double(analytic) << ", simulated "
                  << format_double(simulated);
                rep.checks.push_back({metric + tag.str(), ok,
                                      std::abs(analytic) > 0
                                          ? err / std::abs(analytic)
                                          : err,
                                      profile.rel_tol, d.str()});
            };
            compare("pi_idle", mr.pi_idle, sim.pi_idle);
            compare("pi_tx", mr.pi_tx, sim.pi_tx);
            compare("pi_rb", mr.pi_rb, sim.pi_rb);
            compare("t_rb", mr.time.t_rb, sim.t_rb.mean);
            compare("t_rxp", mr.time.t_rxp, sim.t_rxp.mean);
            compare("p_if", mr.interference.p_if, sim.p_if);
            compare("goodput", mr.goodput, sim.goodput);

            int k_max = 4 * (2 * R + 2);
            std::vector<double> ana_pmf(k_max);
            for (int k = 1; k <= k_max; ++k)
                ana_pmf[k - 1] = dtx_pmf(params, m.p_of, k);
            double tv =
                total_variation(ana_pmf, sim.dtx_pmf_empirical(k_max));
            rep.checks.push_back({"dtx_tv" + tag.str(),
                                  tv <= profile.tv_bound, tv,
                                  profile.tv_bound, ""});

            double fit = geometric_mle(sim.df_hist);
            double fit_err = std::abs(fit - m.p_of) / m.p_of;
            rep.checks.push_back(
                {"df_fit" + tag.str(), fit_err <= profile.rel_tol, fit_err,
                 profile.rel_tol,
                 "fit " + format_double(fit) + ", solved " +
                     format_double(m.p_of)});
            ChiSquareResult chi = chi_square_geometric(
                sim.df_hist_spaced, m.p_of, profile.chi2_significance);
            std::ostringstream cd;
            cd << "stat " << chi.statistic << ", dof " << chi.dof
               << ", critical " << chi.critical << ", samples "
               << chi.samples;
            rep.checks.push_back({"df_chi2" + tag.str(), chi.pass,
                                  chi.statistic, chi.critical, cd.str()});
        }
    }
    return rep;
}

} // namespace csmahs
