#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/error.hpp"
#include "core/support_probs.hpp"

using namespace csmahs;

namespace {

double sum_idle_exits(const SupportProbs& s) {
    return s.idle_to_idle + s.idle_to_tx + s.idle_to_v + s.idle_to_b +
           s.idle_to_vbl + s.idle_to_vbe;
}

double sum_v_exits(const SupportProbs& s) {
    return s.v_to_b + s.v_to_vbe + s.v_to_v;
}

double max_component_diff(const SupportProbs& a, const SupportProbs& b) {
    double w = 0.0;
    auto u = [&w](double x, double y) { w = std::max(w, std::abs(x - y)); };
    u(a.idle_to_idle, b.idle_to_idle);
    u(a.idle_to_tx, b.idle_to_tx);
    u(a.idle_to_v, b.idle_to_v);
    u(a.idle_to_b, b.idle_to_b);
    u(a.idle_to_vbl, b.idle_to_vbl);
    u(a.idle_to_vbe, b.idle_to_vbe);
    u(a.v_to_b, b.v_to_b);
    u(a.v_to_vbe, b.v_to_vbe);
    u(a.v_to_v, b.v_to_v);
    return w;
}

const std::vector<double> kPtx = {0.02, 0.3, 0.88};
const std::vector<double> kPof = {0.02, 0.15, 0.88};
const std::vector<int> kL = {2, 8, 16, 32};
const std::vector<int> kR = {2, 4, 8, 16};

} // namespace

TEST_CASE("aux_a") {
    CHECK(aux_a(0.1, 0.0996) == doctest::Approx(0.81036).epsilon(1e-12));
    CHECK(aux_a(0.5, 0.5) == 0.25);
    // excluded endpoint, asserted as a limit
    CHECK(aux_a(1e-12, 1e-12) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("access probability passes through") {
    ModelParams p{0.34, 32, 16};
    CHECK(support_probabilities(p, 0.1).idle_to_tx == 0.34);
}

TEST_CASE("nearly certain access") {
    ModelParams p{0.999999, 32, 16};
    SupportProbs s = support_probabilities(p, 0.3);
    CHECK(s.idle_to_idle < 1e-5);
    CHECK(s.idle_to_tx == 0.999999);
    SupportProbs ser = support_probabilities_by_series(p, 0.3, 1e-12);
    CHECK(ser.idle_to_idle < 1e-5);
}

TEST_CASE("sum-to-one identities on the grid") {
    for (double p_tx : kPtx)
        for (double p_of : kPof)
            for (int L : kL)
                for (int R : kR) {
                    ModelParams p{p_tx, L, R};
                    SupportProbs s = support_probabilities(p, p_of);
                    CHECK(std::abs(sum_idle_exits(s) - 1.0) <= 1e-12);
                    CHECK(std::abs(sum_v_exits(s) - 1.0) <= 1e-12);
                    CHECK(s.idle_to_vbe >= -1e-13);
                    CHECK(s.idle_to_idle >= 0.0);
                    CHECK(s.v_to_v >= 0.0);
                }
}

TEST_CASE("closed forms match the series oracle") {
    // the series ignores L, so the L axis collapses
    for (double p_tx : kPtx)
        for (double p_of : kPof)
            for (int R : kR) {
                ModelParams p{p_tx, 32, R};
                SupportProbs closed = support_probabilities(p, p_of);
                SupportProbs series =
                    support_probabilities_by_series(p, p_of, 1e-15);
                CHECK(max_component_diff(closed, series) <= 1e-9);
            }
    // small R edge cases where some case ranges are empty
    for (int R : {1, 2}) {
        ModelParams p{0.25, 4, R};
        SupportProbs closed = support_probabilities(p, 0.2);
        SupportProbs series = support_probabilities_by_series(p, 0.2, 1e-15);
        CHECK(max_component_diff(closed, series) <= 1e-9);
        CHECK(series.idle_to_vbe >= 0.0);
    }
}

TEST_CASE("continuity in p_of") {
    // the components fall smoothly with slopes up to O(1), so neighboring
    // 1e-4-spaced values differ by a few 1e-5; a genuine case-boundary bug
    // shows up as a jump in the second difference instead
    ModelParams p{0.3, 16, 8};
    SupportProbs prev2 = support_probabilities(p, 1e-4);
    SupportProbs prev1 = support_probabilities(p, 2e-4);
    double worst_second = 0.0;
    for (int i = 3; i <= 9999; ++i) {
        SupportProbs cur = support_probabilities(p, i * 1e-4);
        CHECK(max_component_diff(prev1, cur) <= 1e-3);
        auto second = [&](double a, double b, double c) {
            worst_second = std::max(worst_second, std::abs(a - 2 * b + c));
        };
        second(prev2.idle_to_idle, prev1.idle_to_idle, cur.idle_to_idle);
        second(prev2.idle_to_v, prev1.idle_to_v, cur.idle_to_v);
        second(prev2.idle_to_b, prev1.idle_to_b, cur.idle_to_b);
        second(prev2.idle_to_vbl, prev1.idle_to_vbl, cur.idle_to_vbl);
        second(prev2.idle_to_vbe, prev1.idle_to_vbe, cur.idle_to_vbe);
        second(prev2.v_to_b, prev1.v_to_b, cur.v_to_b);
        second(prev2.v_to_vbe, prev1.v_to_vbe, cur.v_to_vbe);
        second(prev2.v_to_v, prev1.v_to_v, cur.v_to_v);
        prev2 = prev1;
        prev1 = cur;
    }
    CHECK(worst_second <= 1e-6);
}

TEST_CASE("distance-conditioned transitions") {
    const double p_tx = 0.1, p_of = 0.0996;
    const int R = 16;

    SUBCASE("v_to_v carries no distance dependence") {
        auto first = v_transitions_at_distance(p_tx, R, p_of, 1);
        auto last = v_transitions_at_distance(p_tx, R, p_of, R);
        CHECK(first.v_to_v_d == last.v_to_v_d);
    }
    SUBCASE("per-distance triple sums to one") {
        for (int d = 1; d <= R; ++d) {
            auto t = v_transitions_at_distance(p_tx, R, p_of, d);
            CHECK(std::abs(t.v_to_b_d + t.v_to_vbe_d + t.v_to_v_d - 1.0) <=
                  1e-12);
        }
    }
    SUBCASE("uniform average over distances recovers the means") {
        for (double ptx : {0.1, 0.34, 0.7}) {
            ModelParams p{ptx, 32, R};
            SupportProbs s = support_probabilities(p, p_of);
            double mb = 0.0, me = 0.0, mv = 0.0;
            for (int d = 1; d <= R; ++d) {
                auto t = v_transitions_at_distance(ptx, R, p_of, d);
                mb += t.v_to_b_d / R;
                me += t.v_to_vbe_d / R;
                mv += t.v_to_v_d / R;
            }
            CHECK(std::abs(mb - s.v_to_b) <= 1e-12);
            CHECK(std::abs(me - s.v_to_vbe) <= 1e-12);
            CHECK(std::abs(mv - s.v_to_v) <= 1e-12);
        }
    }
    SUBCASE("certain access blocks every distance") {
        for (int d = 1; d <= R; ++d) {
            auto t = v_transitions_at_distance(1.0 - 1e-9, R, 0.3, d);
            CHECK(t.v_to_b_d == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(v_transitions_at_distance(p_tx, R, p_of, 0), Error);
        CHECK_THROWS_AS(v_transitions_at_distance(p_tx, R, p_of, R + 1),
                        Error);
    }
}

TEST_CASE("guard on vanishing 1 - a") {
    ModelParams p{1e-13, 32, 16};
    CHECK_THROWS_WITH_AS(support_probabilities(p, 1e-13),
                         doctest::Contains("guard"), Error);
}

TEST_CASE("series oracle input validation") {
    ModelParams p{0.1, 32, 16};
    CHECK_THROWS_AS(support_probabilities_by_series(p, 0.1, 0.5), Error);
    CHECK_THROWS_AS(support_probabilities(p, 0.0), Error);
    CHECK_THROWS_AS(support_probabilities(p, 1.0), Error);
}
