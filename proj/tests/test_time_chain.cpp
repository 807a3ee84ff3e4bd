#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/time_chain.hpp"

using namespace csmahs;

namespace {

TimeChain make_chain(double p_tx, int L, int R, double p_of) {
    ModelParams params{p_tx, L, R};
    return build_time_chain(params, support_probabilities(params, p_of));
}

// nonzero transition count implied by the chain structure
int expected_nnz(int L) {
    int nnz = (L >= 2) ? 5 + (L - 1) : 5; // idle exits
    nnz += L;                             // TX chain + return to idle
    nnz += (L >= 2) ? 3 * (L - 1) + 2 : 2; // V interior rows + last row
    nnz += L;                             // VBE
    nnz += L * (L + 1) / 2;               // B blocks, one exit per state
    nnz += L * (L - 1) / 2;               // VBL blocks
    return nnz;
}

} // namespace

TEST_CASE("state enumeration") {
    CHECK(enumerate_time_states(1).size() == 5);
    CHECK(enumerate_time_states(2).size() == 11);
    CHECK(enumerate_time_states(32).size() == 1121);

    SUBCASE("ordering and index function agree") {
        for (int L : {1, 2, 5, 32}) {
            auto states = enumerate_time_states(L);
            CHECK(states[0].kind == TimeStateKind::I);
            std::set<int> seen;
            for (size_t i = 0; i < states.size(); ++i) {
                int idx = time_state_index(L, states[i]);
                CHECK(idx == static_cast<int>(i));
                seen.insert(idx);
            }
            CHECK(seen.size() == states.size());
        }
    }
    SUBCASE("block layout: descending total length") {
        auto states = enumerate_time_states(4);
        // first B block has total length L, last has length 1
        int base = 1 + 3 * 4;
        CHECK(states[base].kind == TimeStateKind::B);
        CHECK(states[base].total_len == 4);
        CHECK(states[base + 4].total_len == 3);
        auto& last_b = states[base + 4 * 5 / 2 - 1];
        CHECK(last_b.kind == TimeStateKind::B);
        CHECK(last_b.total_len == 1);
    }
}

TEST_CASE("chain structure") {
    const int L = 8, R = 4;
    TimeChain c = make_chain(0.2, L, R, 0.15);

    SUBCASE("row sums") {
        for (int r = 0; r < c.state_count; ++r) {
            double sum = 0.0;
            for (int k = c.row_begin[r]; k < c.row_begin[r + 1]; ++k)
                sum += c.vals[k];
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }
    SUBCASE("nonzero pattern count") {
        CHECK(static_cast<int>(c.cols.size()) == expected_nnz(L));
        for (int Lx : {1, 2, 3, 16}) {
            TimeChain cx = make_chain(0.2, Lx, R, 0.15);
            CHECK(static_cast<int>(cx.cols.size()) == expected_nnz(Lx));
        }
    }
    SUBCASE("deterministic interior rows") {
        // TX(L,n) -> TX(L,n+1) with probability one
        for (int n = 1; n < L; ++n) {
            int r = time_state_index(L, {TimeStateKind::TX, L, n});
            CHECK(c.row_begin[r + 1] - c.row_begin[r] == 1);
            CHECK(c.cols[c.row_begin[r]] ==
                  time_state_index(L, {TimeStateKind::TX, L, n + 1}));
            CHECK(c.vals[c.row_begin[r]] == 1.0);
        }
        // VBE(L,L) -> I with probability one
        int r = time_state_index(L, {TimeStateKind::VBE, L, L});
        CHECK(c.row_begin[r + 1] - c.row_begin[r] == 1);
        CHECK(c.cols[c.row_begin[r]] == 0);
        CHECK(c.vals[c.row_begin[r]] == 1.0);
        // B(L,L) -> I, shorter blocks -> V(L, L-m+1)
        r = time_state_index(L, {TimeStateKind::B, L, L});
        CHECK(c.cols[c.row_begin[r]] == 0);
        for (int m = 1; m < L; ++m) {
            r = time_state_index(L, {TimeStateKind::B, L - m, L - m});
            CHECK(c.cols[c.row_begin[r]] ==
                  time_state_index(L, {TimeStateKind::V, L, L - m + 1}));
        }
    }
    SUBCASE("vulnerable rows") {
        const SupportProbs& sp = c.support;
        for (int n = 1; n < L; ++n) {
            int r = time_state_index(L, {TimeStateKind::V, L, n});
            CHECK(c.row_begin[r + 1] - c.row_begin[r] == 3);
            double to_b = 0, to_vbe = 0, to_v = 0;
            for (int k = c.row_begin[r]; k < c.row_begin[r + 1]; ++k) {
                int col = c.cols[k];
                if (col == time_state_index(L, {TimeStateKind::B, L - n, 1}))
                    to_b = c.vals[k];
                if (col ==
                    time_state_index(L, {TimeStateKind::VBE, L, n + 1}))
                    to_vbe = c.vals[k];
                if (col == time_state_index(L, {TimeStateKind::V, L, n + 1}))
                    to_v = c.vals[k];
            }
            CHECK(to_b == sp.v_to_b);
            CHECK(to_vbe == sp.v_to_vbe);
            CHECK(to_v == sp.v_to_v);
        }
        int r = time_state_index(L, {TimeStateKind::V, L, L});
        CHECK(c.row_begin[r + 1] - c.row_begin[r] == 2);
    }
    SUBCASE("L = 1 has no late-blocked states") {
        TimeChain c1 = make_chain(0.2, 1, R, 0.15);
        CHECK(c1.state_count == 5);
        CHECK(c1.row_begin[1] - c1.row_begin[0] == 5); // I row
    }
}

TEST_CASE("stationary distribution") {
    SUBCASE("vanishing access keeps the station idle") {
        ModelParams p{1e-9, 8, 4};
        SupportProbs sp = support_probabilities(p, 1e-9);
        TimeStationary st = stationary_time(build_time_chain(p, sp));
        CHECK(st.pi_idle == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("normalization, positivity, residual") {
        for (double p_of : {0.02, 0.3}) {
            TimeChain c = make_chain(0.3, 16, 8, p_of);
            TimeStationary st = stationary_time(c);
            double sum = 0.0;
            for (double x : st.pi) {
                CHECK(x >= 0.0);
                sum += x;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-10);
            CHECK(st.residual < 1e-10);
            // aggregates
            double tx = 0.0;
            for (int n = 1; n <= 16; ++n)
                tx += st.pi[time_state_index(16, {TimeStateKind::TX, 16, n})];
            CHECK(st.pi_tx == doctest::Approx(tx).epsilon(1e-14));
            CHECK(st.pi_rb ==
                  doctest::Approx(1.0 - st.pi_idle - st.pi_tx).epsilon(1e-12));
        }
    }
    SUBCASE("structured solver equals power iteration") {
        struct Point {
            double p_tx;
            int L, R;
            double p_of;
        };
        for (Point pt : {Point{0.1, 8, 4, 0.1}, Point{0.34, 16, 8, 0.05},
                         Point{0.7, 4, 2, 0.3}}) {
            auto [p_tx, L, R, p_of] = pt;
            TimeChain c = make_chain(p_tx, L, R, p_of);
            TimeStationary st = stationary_time(c);
            std::vector<double> ref = stationary_power_iteration(c, 1e-13);
            double dev = 0.0;
            for (size_t i = 0; i < ref.size(); ++i)
                dev = std::max(dev, std::abs(ref[i] - st.pi[i]));
            CHECK(dev <= 1e-9);
        }
    }
    SUBCASE("occupancy fast path equals the full solve") {
        ModelParams p{0.34, 32, 16};
        SupportProbs sp = support_probabilities(p, 0.0116);
        TimeAggregates agg = time_occupancy(p, sp);
        TimeStationary st = stationary_time(build_time_chain(p, sp));
        CHECK(agg.pi_idle == doctest::Approx(st.pi_idle).epsilon(1e-14));
        CHECK(agg.pi_tx == doctest::Approx(st.pi_tx).epsilon(1e-14));
        for (int n = 1; n <= 32; ++n) {
            CHECK(agg.v_states[n - 1] ==
                  doctest::Approx(
                      st.pi[time_state_index(32, {TimeStateKind::V, 32, n})])
                      .epsilon(1e-13));
        }
    }
}

TEST_CASE("transmission occupancy identity") {
    // every transmit sub-state carries pi_I * p_tx, so pi_TX = L p_tx pi_I
    for (double p_tx : {0.05, 0.4, 0.8}) {
        TimeChain c = make_chain(p_tx, 16, 8, 0.1);
        TimeStationary st = stationary_time(c);
        CHECK(st.pi_tx ==
              doctest::Approx(16 * p_tx * st.pi_idle).epsilon(1e-12));
    }
}

TEST_CASE("coordinate dump") {
    TimeChain c = make_chain(0.2, 2, 2, 0.15);
    std::ostringstream os;
    c.dump_coo(os);
    std::string text = os.str();
    CHECK(!text.empty());
    size_t lines = 0;
    for (char ch : text)
        if (ch == '\n') ++lines;
    CHECK(lines == c.cols.size());
}

TEST_CASE("support invariant violations rejected") {
    ModelParams p{0.2, 4, 2};
    SupportProbs sp = support_probabilities(p, 0.3);
    sp.v_to_v += 0.01;
    CHECK_THROWS_AS(build_time_chain(p, sp), Error);
}
