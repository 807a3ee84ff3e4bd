#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "core/error.hpp"
#include "core/geoseries.hpp"
#include "core/metrics.hpp"
#include "core/serialize.hpp"
#include "core/space_chain.hpp"

using namespace csmahs;

TEST_CASE("time metrics identities") {
    struct Point {
        double p_tx;
        int R;
    };
    for (Point pt : {Point{0.05, 8}, Point{0.1, 16}, Point{0.34, 8},
                     Point{0.6, 16}}) {
        auto [p_tx, R] = pt;
        SolvedModel m = solve_model({p_tx, 32, R});
        TimeMetrics t = time_metrics(m);
        const auto& sp = m.support;

        CHECK(t.t_idle ==
              doctest::Approx(1.0 / (1.0 - sp.idle_to_idle)).epsilon(1e-14));
        CHECK(t.t_txp == t.t_tx + t.t_ntx);
        CHECK(t.t_rb >= 32.0); // hidden stations prolong the busy period
        CHECK(t.p_con_rx >= 0.0);
        CHECK(t.p_con_rx < 1.0);
        CHECK(t.t_rxb <= t.t_rb + 1e-12);

        // busy period two ways: renewal-reward from occupancy vs the
        // inversion of the non-idle mixture; agreement closes the loop
        // between the idle-occupancy route and the mixture route
        double entry = 1.0 - sp.idle_to_idle - sp.idle_to_tx;
        double t_rb_renewal = m.time_stationary.pi_rb /
                              (m.time_stationary.pi_idle * entry);
        CHECK(std::abs(t_rb_renewal - t.t_rb) /
                  std::max(1.0, t.t_rb) <=
              1e-9);
        double tni_mixture = (entry * t_rb_renewal + sp.idle_to_tx * 32.0) /
                             (1.0 - sp.idle_to_idle);
        CHECK(std::abs(tni_mixture - t.t_non_idle) /
                  std::max(1.0, t.t_non_idle) <=
              1e-9);
    }
}

TEST_CASE("synchronized regime anchors") {
    for (int R : {8, 16}) {
        SolvedModel m = solve_model({0.8, 32, R});
        MetricsReport rep = compute_metrics_report(m);
        CHECK(std::abs(rep.pi_idle - 1.0 / 33.0) <= 2e-3);
        CHECK(std::abs(rep.time.t_rb - 32.0) <= 0.5);
        CHECK(rep.goodput < 1e-3);
    }
}

TEST_CASE("interference report") {
    SUBCASE("rare access is interference-free") {
        SolvedModel m = solve_model({1e-5, 32, 16});
        InterferenceReport r = interference_free(m);
        CHECK(r.p_if > 0.99);
        SolvedModel m2 = solve_model({1e-4, 32, 16});
        CHECK(interference_free(m2).p_if < r.p_if); // rising towards 1
    }
    SUBCASE("conditional distance law is normalized") {
        for (double p_tx : {0.05, 0.34}) {
            SolvedModel m = solve_model({p_tx, 32, 16});
            InterferenceReport r = interference_free(m);
            double sum = 0.0;
            for (double x : r.f_drx_given_if) sum += x;
            CHECK(std::abs(sum - 1.0) <= 1e-9);
        }
    }
    SUBCASE("close neighbors receive more cleanly at high access") {
        SolvedModel m = solve_model({0.34, 32, 16});
        InterferenceReport r = interference_free(m);
        CHECK(r.f_drx_given_if.front() > r.f_drx_given_if.back());
    }
}

// Replays the reception story stochastically from the same ingredients:
// pick the entry case, the reception distance, then step the vulnerable
// phase with the distance-conditioned hazards and apply the same-side
// survival.  Catches assembly mistakes in the closed-form composition.
TEST_CASE("interference probability against a story Monte-Carlo") {
    struct Point {
        double p_tx;
        int L, R;
    };
    for (Point pt : {Point{0.1, 32, 16}, Point{0.2, 32, 8}, Point{0.3, 8, 4}}) {
        auto [p_tx, L, R] = pt;
        SolvedModel m = solve_model({p_tx, L, R});
        InterferenceReport rep = interference_free(m);
        const auto& sp = m.support;
        double pi_i = m.time_stationary.pi_idle;
        double pi_vll = m.time_stationary.pi[time_state_index(
            L, {TimeStateKind::V, L, L})];
        double a = aux_a(p_tx, m.p_of);

        double w_v = pi_i * (sp.idle_to_v + sp.idle_to_vbl / L) +
                     pi_vll * sp.v_to_b;
        double w_vbe = pi_i * sp.idle_to_vbe;
        double w_vbl = pi_i * sp.idle_to_vbl / L;
        double p_rx = pi_i * (1 - sp.idle_to_idle - sp.idle_to_tx) +
                      pi_vll * sp.v_to_b;

        std::vector<double> fvb(R);
        double den = 0.0;
        for (int k = 1; k <= R; ++k) {
            fvb[k - 1] = geo_sum(a, k + 1, R + 1);
            den += fvb[k - 1];
        }
        for (auto& x : fvb) x /= den;
        std::vector<VTransitionsAtDistance> vt;
        for (int d = 1; d <= R; ++d)
            vt.push_back(v_transitions_at_distance(p_tx, R, m.p_of, d));
        std::vector<double> same(R);
        for (int d = 1; d <= R; ++d)
            same[d - 1] = dtx_survival(m.params, m.p_of, R - d + 1);

        std::mt19937_64 rng(2718);
        auto uni = [&] { return (rng() >> 11) * 0x1.0p-53; };
        auto draw_fvb = [&] {
            double u = uni(), acc = 0.0;
            for (int k = 0; k < R; ++k) {
                acc += fvb[k];
                if (u < acc) return k + 1;
            }
            return R;
        };
        auto survive_v = [&](int from_step, int d) {
            for (int n = from_step; n <= L - 1; ++n) {
                double x = uni();
                if (x < vt[d - 1].v_to_b_d) return false;
                if (x < vt[d - 1].v_to_b_d + vt[d - 1].v_to_vbe_d)
                    return true; // coasts to the end untouched
            }
            return true;
        };

        const long episodes = 4'000'000;
        const double tot_w = w_v + w_vbe + w_vbl * (L - 1);
        long clean = 0;
        for (long e = 0; e < episodes; ++e) {
            double u = uni() * tot_w;
            int d;
            bool ok;
            if (u < w_v) {
                d = 1 + static_cast<int>(uni() * R);
                ok = survive_v(1, d);
            } else if (u < w_v + w_vbe) {
                d = draw_fvb();
                ok = true;
            } else {
                int l = 1 + static_cast<int>((u - w_v - w_vbe) / w_vbl);
                if (l > L - 1) l = L - 1;
                d = draw_fvb();
                ok = survive_v(l + 1, d);
            }
            if (ok && uni() < same[d - 1]) ++clean;
        }
        double mc = static_cast<double>(clean) / episodes * tot_w / p_rx;
        // ~4 sigma of binomial error on the clean fraction
        double sigma = 4.0 * std::sqrt(rep.p_if * (1 - rep.p_if) / episodes) *
                           tot_w / p_rx +
                       1e-4;
        CHECK(std::abs(mc - rep.p_if) <= sigma);
    }
}

TEST_CASE("goodput") {
    SolvedModel m = solve_model({0.1, 32, 16});
    MetricsReport rep = compute_metrics_report(m);
    GoodputReport g = goodput(m);
    CHECK(g.goodput == rep.goodput);
    CHECK(g.goodput <= 32.0 / rep.time.t_rxp);
    CHECK_FALSE(g.degenerate);
}

TEST_CASE("degenerate guards") {
    SolvedModel m = solve_model({0.5, 4, 2});
    SUBCASE("never-busy channel") {
        m.support.idle_to_idle = 1.0 - m.support.idle_to_tx;
        CHECK_THROWS_WITH_AS(time_metrics(m), doctest::Contains("degenerate"),
                             Error);
    }
    SUBCASE("vanishing reception start probability") {
        for (double& x : m.time_stationary.pi) x = 0.0;
        m.time_stationary.pi_idle = 0.0;
        CHECK_THROWS_WITH_AS(interference_free(m),
                             doctest::Contains("synchronized"), Error);
    }
    SUBCASE("goodput reports the degenerate flag instead of failing") {
        m.support.idle_to_idle = 1.0 - m.support.idle_to_tx;
        GoodputReport g = goodput(m);
        CHECK(g.degenerate);
        CHECK(g.goodput == 0.0);
    }
}

TEST_CASE("monotone trends on the studied grids") {
    // the idle probability falls monotonically below the synchronization
    // point, then climbs back to 1/(L+1); the clean-reception probability
    // falls across the whole range
    for (int R : {8, 16}) {
        std::vector<double> below_sp =
            R == 16 ? std::vector<double>{0.01, 0.05, 0.1, 0.2}
                    : std::vector<double>{0.01, 0.05, 0.1, 0.2, 0.34};
        double prev_pi_i = 2.0;
        for (double p_tx : below_sp) {
            SolvedModel m = solve_model({p_tx, 32, R});
            CHECK(m.time_stationary.pi_idle <= prev_pi_i + 1e-12);
            prev_pi_i = m.time_stationary.pi_idle;
        }
        double prev_p_if = 2.0;
        for (double p_tx : {0.01, 0.05, 0.1, 0.2, 0.34, 0.5, 0.8}) {
            SolvedModel m = solve_model({p_tx, 32, R});
            MetricsReport rep = compute_metrics_report(m);
            CHECK(rep.interference.p_if <= prev_p_if + 1e-12);
            prev_p_if = rep.interference.p_if;
        }
    }
}

TEST_CASE("synchronization point") {
    std::vector<double> grid;
    for (int i = 0; i < 18; ++i) grid.push_back(0.05 + i * (0.9 - 0.05) / 17);

    SUBCASE("denser networks synchronize earlier") {
        auto sp16 = find_sync_point(32, 16, grid);
        auto sp8 = find_sync_point(32, 8, grid);
        REQUIRE(sp16.has_value());
        REQUIRE(sp8.has_value());
        CHECK(*sp16 < *sp8);
    }
    SUBCASE("frame length barely moves the synchronization point") {
        std::vector<double> sps;
        for (int L : {16, 32, 48}) {
            auto sp = find_sync_point(L, 8, grid);
            REQUIRE(sp.has_value());
            sps.push_back(*sp);
        }
        double lo = *std::min_element(sps.begin(), sps.end());
        double hi = *std::max_element(sps.begin(), sps.end());
        CHECK(hi / lo < 1.15);
    }
    SUBCASE("grid validation") {
        std::vector<double> tiny = {0.1, 0.2};
        CHECK_THROWS_AS(find_sync_point(32, 8, tiny), Error);
        std::vector<double> unsorted(grid);
        std::swap(unsorted[3], unsorted[7]);
        CHECK_THROWS_AS(find_sync_point(32, 8, unsorted), Error);
    }
    SUBCASE("none when goodput stays healthy") {
        std::vector<double> low;
        for (int i = 0; i < 16; ++i) low.push_back(0.001 + i * 0.0005);
        CHECK_FALSE(find_sync_point(32, 8, low).has_value());
    }
}
