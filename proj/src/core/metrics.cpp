#include "metrics.hpp"

#include <cmath>
#include <sstream>

#include "error.hpp"
#include "geoseries.hpp"

namespace csmahs {

namespace {

double v_state(const SolvedModel& m, int n) {
    const int L = m.params.frame_slots;
    return m.time_stationary.pi[time_state_index(
        L, {TimeStateKind::V, L, n})];
}

} // namespace

TimeMetrics time_metrics(const SolvedModel& m) {
    const int L = m.params.frame_slots;
    const SupportProbs& sp = m.support;
    const double pi_i = m.time_stationary.pi_idle;
    const double pi_tx = m.time_stationary.pi_tx;

    TimeMetrics t;
    t.t_tx = L;
    t.t_idle = 1.0 / (1.0 - sp.idle_to_idle);
    t.t_non_idle = t.t_idle * (1.0 - pi_i) / pi_i;

    const double denom = 1.0 - sp.idle_to_idle - sp.idle_to_tx;
    if (denom < 1e-14) {
        fail(ErrorKind::degenerate,
             "degenerate regime: the channel is effectively never busy "
             "(1 - p_II - p_TXI below 1e-14)");
    }
    t.t_rb = ((1.0 - sp.idle_to_idle) * t.t_non_idle - sp.idle_to_tx * L) /
             denom;
    t.t_ntx = L * (1.0 / pi_tx - 1.0);
    t.t_txp = L + t.t_ntx;

    const double pi_v_last = v_state(m, L);
    const double pi_b_last = m.time_stationary.pi[time_state_index(
        L, {TimeStateKind::B, L, L})];
    const double pi_vbe_last = m.time_stationary.pi[time_state_index(
        L, {TimeStateKind::VBE, L, L})];
    t.p_con_rx = pi_v_last / (pi_b_last + pi_v_last + pi_vbe_last) *
                 sp.v_to_b;
    t.t_rxb = t.t_rb * (1.0 - t.p_con_rx);
    const double rb_frac = 1.0 - pi_i - pi_tx;
    if (rb_frac < 1e-300) {
        fail(ErrorKind::degenerate,
             "degenerate regime: receiving-busy probability vanished");
    }
    t.t_nrx = (pi_i + pi_tx) / rb_frac * t.t_rb;
    t.t_rxp = (1.0 - t.p_con_rx) * (t.t_rxb + t.t_nrx) +
              t.p_con_rx * t.t_rxb;
    return t;
}

InterferenceReport interference_free(const SolvedModel& m) {
    const int L = m.params.frame_slots;
    const int R = m.params.neighbors;
    const SupportProbs& sp = m.support;
    const double pi_i = m.time_stationary.pi_idle;
    const double pi_v_last = v_state(m, L);
    const double a = aux_a(m.params.p_tx, m.p_of);

    InterferenceReport rep;
    rep.p_rx = pi_i * (1.0 - sp.idle_to_idle - sp.idle_to_tx) +
               pi_v_last * sp.v_to_b;
    if (rep.p_rx < 1e-300) {
        fail(ErrorKind::degenerate,
             "fully synchronized regime: reception start probability "
             "vanished");
    }

    // entry weights of the three clean-start cases: straight into a
    // vulnerable slot, into the early virtually-blocked area, or into the
    // late virtually-blocked area of a given residual length
    const double vbl_each = sp.idle_to_vbl / L;
    const double w_case_v = pi_i * (sp.idle_to_v + vbl_each) +
                            pi_v_last * sp.v_to_b;
    const double w_case_vbe = pi_i * sp.idle_to_vbe;
    const double w_case_vbl = pi_i * vbl_each;

    // distance law inside an early/late virtually-blocked area
    std::vector<double> f_vb(R);
    {
        double den = 0.0;
        for (int k = 1; k <= R; ++k) {
            f_vb[k - 1] = geo_sum(a, k + 1, R + 1); // sum_{i=k}^{R} a^i
            den += f_vb[k - 1];
        }
        for (double& x : f_vb) x /= den;
    }

    rep.f_drx_given_if.assign(R, 0.0);
    double clean_mass = 0.0;
    for (int d = 1; d <= R; ++d) {
        VTransitionsAtDistance vt =
            v_transitions_at_distance(m.params.p_tx, R, m.p_of, d);
        const double q = vt.v_to_v_d, e = vt.v_to_vbe_d;
        // survive L-1 vulnerable steps, or slip into the early-blocked area
        // at any point and coast to the end
        double qpow = 1.0; // q^i
        double geo_q = 0.0; // sum_{i=0}^{L-2} q^i
        for (int i = 0; i <= L - 2; ++i) {
            geo_q += qpow;
            qpow *= q;
        }
        const double case_v = qpow + e * geo_q; // qpow = q^(L-1)
        // late-blocked starts: residual length l leaves L-1-l exposed steps
        double case_vbl = 0.0;
        {
            double qp = 1.0;   // q^(L-1-l) built from l = L-1 downwards
            double geo = 0.0;  // sum_{i=0}^{L-2-l} q^i
            for (int l = L - 1; l >= 1; --l) {
                case_vbl += qp;
                if (l <= L - 2) case_vbl += e * geo;
                geo += qp;
                qp *= q;
            }
        }
        const double same_side = dtx_survival(m.params, m.p_of, R - d + 1);
        const double term =
            same_side * (w_case_v * case_v / R + w_case_vbe * f_vb[d - 1] +
                         w_case_vbl * case_vbl * f_vb[d - 1]);
        rep.f_drx_given_if[d - 1] = term;
        clean_mass += term;
    }
    rep.p_if = clean_mass / rep.p_rx;
    if (rep.p_if > 0.0) {
        for (double& x : rep.f_drx_given_if) x /= clean_mass;
    }
    return rep;
}

GoodputReport goodput(const SolvedModel& m) {
    GoodputReport g;
    try {
        TimeMetrics t = time_metrics(m);
        InterferenceReport rep = interference_free(m);
        g.goodput = m.params.frame_slots * rep.p_if / t.t_rxp;
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::degenerate) throw;
        g.goodput = 0.0;
        g.degenerate = true;
    }
    return g;
}

namespace {

double goodput_at(int L, int R, double p_tx) {
    SolvedModel m = solve_model({p_tx, L, R});
    return goodput(m).goodput;
}

} // namespace

std::optional<double> find_sync_point(int frame_slots, int neighbors,
                                      const std::vector<double>& grid) {
    if (grid.size() < 16) {
        fail(ErrorKind::invalid_argument, "sync-point grid needs >= 16 points");
    }
    for (size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            fail(ErrorKind::invalid_argument, "sync-point grid must ascend");
        }
    }
    std::optional<double> prev;
    for (double p_tx : grid) {
        double g = goodput_at(frame_slots, neighbors, p_tx);
        if (g < kSyncGoodputThreshold) {
            if (!prev) return p_tx; // below threshold from the first point
            double lo = *prev, hi = p_tx;
            const double target = (hi - lo) / 100.0;
            while (hi - lo > target) {
                double mid = 0.5 * (lo + hi);
                if (goodput_at(frame_slots, neighbors, mid) <
                    kSyncGoodputThreshold) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return hi;
        }
        prev = p_tx;
    }
    return std::nullopt;
}

} // namespace csmahs
