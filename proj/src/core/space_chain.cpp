#include "space_chain.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "error.hpp"
#include "geoseries.hpp"
#include "support_probs.hpp"

namespace csmahs {

namespace {

void check_pof(double p_of) {
    if (!(p_of > 0.0 && p_of < 1.0)) {
        fail(ErrorKind::invalid_argument, "p_of out of open interval (0, 1)");
    }
}

// 1 + L p_tx (1 - a^(R+1)) / (1 - a); the inverse of the R-Zone idle
// probability and the common denominator of the range-II expressions.
double rzone_denom(double p_tx, int L, int R, double a) {
    return 1.0 + L * p_tx * geo_sum(a, 1, R + 1);
}

} // namespace

double df_pmf(double p_of, int k) {
    check_pof(p_of);
    if (k < 1) fail(ErrorKind::invalid_argument, "d_F takes values k >= 1");
    return std::pow(1.0 - p_of, k - 1) * p_of;
}

namespace {

// Pr{d_TX >= m} for m <= R+1.  The textbook form 1 - p v (1 - a^(m-1))/(1-a)
// cancels catastrophically once the sum approaches 1; expanding 1 - a =
// p + (1-p) p_of turns it into the all-positive equivalent
// (p_of + p v a^(m-1)) / (1 - a).
double survival_sync_range(double p, double p_of, double a, int m) {
    const double v = 1.0 - p_of;
    const double one_minus_a = p + (1.0 - p) * p_of;
    return (p_of + p * v * std::pow(a, m - 1)) / one_minus_a;
}

} // namespace

double dtx_pmf(const ModelParams& params, double p_of, int k) {
    check_pof(p_of);
    if (k < 1) fail(ErrorKind::invalid_argument, "d_TX takes values k >= 1");
    const double p = params.p_tx;
    const int L = params.frame_slots, R = params.neighbors;
    const double v = 1.0 - p_of;
    const double a = (1.0 - p) * v;
    if (k <= R) return std::pow(1.0 - p, k - 1) * p * std::pow(v, k);
    const double pre = survival_sync_range(p, p_of, a, R + 1);
    const double D = rzone_denom(p, L, R, a);
    if (k <= 2 * R + 1) return pre * L * p * std::pow(a, k - R - 1) / D;
    return pre / D * std::pow(v, k - 2 * R - 2) * p_of;
}

double dtx_survival(const ModelParams& params, double p_of, int m) {
    check_pof(p_of);
    if (m <= 1) return 1.0;
    const double p = params.p_tx;
    const int L = params.frame_slots, R = params.neighbors;
    const double v = 1.0 - p_of;
    const double a = (1.0 - p) * v;
    if (m <= R + 1) return survival_sync_range(p, p_of, a, m);
    const double pre = survival_sync_range(p, p_of, a, R + 1);
    const double D = rzone_denom(p, L, R, a);
    if (m <= 2 * R + 2) // (D - L p sum_{i<m-1-R} a^i) / D without cancelling
        return pre * (1.0 + L * p * geo_sum(a, m - R, R + 1)) / D;
    return pre / D * std::pow(v, m - 2 * R - 2);
}

RZoneSolution rzone_closed_forms(double p_tx, int frame_slots, int neighbors,
                                 double p_of) {
    if (!(p_tx > 0.0 && p_tx < 1.0)) {
        fail(ErrorKind::invalid_argument, "p_tx out of open interval (0, 1)");
    }
    check_pof(p_of);
    const double a = aux_a(p_tx, p_of);
    const double D = rzone_denom(p_tx, frame_slots, neighbors, a);
    RZoneSolution rz;
    rz.pi_nt = 1.0 / D;
    rz.pi_t.resize(neighbors + 1);
    for (int i = 0; i <= neighbors; ++i) {
        rz.pi_t[i] = p_tx * std::pow(a, i) / D;
    }
    return rz;
}

void SpaceChain::dump_coo(std::ostream& os) const {
    os << "# states: 0 = F, 1.." << state_count - 1 << " = O(0)..O("
       << 2 * params.neighbors << ")\n";
    os << "# derived O(R) self-transition = " << o_r_self << "\n";
    for (int r = 0; r < state_count; ++r) {
        for (int c = 0; c < state_count; ++c) {
            double v = at(r, c);
            if (v != 0.0) os << r << ' ' << c << ' ' << v << '\n';
        }
    }
}

SpaceChain build_space_chain(const ModelParams& params, double p_of) {
    validate(params);
    check_pof(p_of);
    const double p = params.p_tx;
    const int L = params.frame_slots, R = params.neighbors;
    const double v = 1.0 - p_of;
    const double a = (1.0 - p) * v;

    SpaceChain ch;
    ch.params = params;
    ch.p_of = p_of;
    ch.state_count = 2 * R + 2;
    ch.matrix.assign(static_cast<size_t>(ch.state_count) * ch.state_count, 0.0);
    auto set = [&](int r, int c, double val) {
        ch.matrix[static_cast<size_t>(r) * ch.state_count + c] = val;
    };
    const int F = 0;
    auto O = [](int n) { return 1 + n; };

    set(F, F, 1.0 - p_of);
    set(F, O(0), p_of);
    for (int n = 0; n < R; ++n) set(O(n), O(n + 1), 1.0);

    // gap hazards: exit to the next transmitter given the gap reached j
    std::vector<double> hazards(R);
    for (int j = 1; j <= R; ++j) {
        double f = std::pow(1.0 - p, j - 1) * p * std::pow(v, j);
        double h = f / dtx_survival(params, p_of, j);
        hazards[j - 1] = h;
        set(O(R + j - 1), O(R), h);
        set(O(R + j - 1), O(R + j), 1.0 - h);
    }
    ch.o_r_self = hazards[0];

    const double D = rzone_denom(p, L, R, a);
    for (int n = 0; n <= R; ++n) {
        set(O(2 * R), O(n), L * p * std::pow(a, R - n) / D);
    }
    set(O(2 * R), F, 1.0 / D);

    // row-stochasticity
    for (int r = 0; r < ch.state_count; ++r) {
        double sum = 0.0;
        for (int c = 0; c < ch.state_count; ++c) sum += ch.at(r, c);
        if (std::abs(sum - 1.0) > 1e-12) {
            std::ostringstream msg;
            msg << "space chain row " << r << " sums to " << sum;
            fail(ErrorKind::solver, msg.str());
        }
    }
    // chaining the hazards must reproduce the inter-transmitter PMF
    double prod = 1.0;
    for (int d = 1; d <= R; ++d) {
        double rec = prod * hazards[d - 1];
        double ref = dtx_pmf(params, p_of, d);
        if (std::abs(rec - ref) > 1e-10) {
            std::ostringstream msg;
            msg << "gap reconstruction mismatch at d = " << d << ": " << rec
                << " vs " << ref;
            fail(ErrorKind::solver, msg.str());
        }
        prod *= 1.0 - hazards[d - 1];
    }
    return ch;
}

namespace {

// The traversal is a renewal process: one cycle is a free run (mean 1/p_of
// states) followed by an occupied span.  Expected visits per cycle are exact:
// every gap between adjacent transmitters has the d_TX law and the span ends
// with the first gap of at least 2R+2, so with q = Pr{d_TX >= 2R+2} the
// transmitter state is hit 1/q times and the surrounding countdown states
// collect survival-weighted visits.  This avoids the ill-conditioned linear
// solve that the nearly absorbing F state causes at small p_of.
SpaceStationary solve_space(const SpaceChain& ch) {
    const int R = ch.params.neighbors;
    const int n = ch.state_count;
    const double q = dtx_survival(ch.params, ch.p_of, 2 * R + 2);

    std::vector<double> visits(n, 0.0);
    visits[0] = 1.0 / ch.p_of; // free states per cycle
    for (int j = 0; j < R; ++j)
        visits[1 + j] = dtx_survival(ch.params, ch.p_of, 2 * R + 1 - j) / q;
    visits[1 + R] = 1.0 / q;
    for (int j = 1; j <= R; ++j)
        visits[1 + R + j] = dtx_survival(ch.params, ch.p_of, j + 1) / q;

    double cycle = 0.0;
    for (double v : visits) cycle += v;

    SpaceStationary st;
    st.pi.resize(n);
    for (int i = 0; i < n; ++i) st.pi[i] = visits[i] / cycle;
    st.pi_free = st.pi[0];

    double res = 0.0;
    for (int c = 0; c < n; ++c) {
        double acc = 0.0;
        for (int r = 0; r < n; ++r) acc += st.pi[r] * ch.at(r, c);
        res = std::max(res, std::abs(acc - st.pi[c]));
    }
    st.residual = res;
    if (res > 1e-10) {
        std::ostringstream msg;
        msg << "space stationary residual " << res << " exceeds 1e-10";
        fail(ErrorKind::solver, msg.str());
    }
    return st;
}

} // namespace

SpaceStationary stationary_space(const SpaceChain& chain) {
    return solve_space(chain);
}

std::vector<double> space_stationary_power_iteration(const SpaceChain& chain,
                                                     double tol,
                                                     long max_iters) {
    const int n = chain.state_count;
    std::vector<double> pi(n, 1.0 / n), next(n);
    for (long it = 0; it < max_iters; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                next[c] += pi[r] * chain.at(r, c);
        double delta = 0.0, sum = 0.0;
        for (int i = 0; i < n; ++i) {
            next[i] = 0.5 * next[i] + 0.5 * pi[i];
            sum += next[i];
        }
        for (int i = 0; i < n; ++i) {
            next[i] /= sum;
            delta = std::max(delta, std::abs(next[i] - pi[i]));
        }
        pi.swap(next);
        if (delta < tol) return pi;
    }
    fail(ErrorKind::solver, "space power iteration did not converge");
}

double space_pi_free(const ModelParams& params, double p_of) {
    SpaceChain ch = build_space_chain(params, p_of);
    return solve_space(ch).pi_free;
}

} // namespace csmahs
