#include "time_chain.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <ostream>
#include <sstream>

#include "error.hpp"

namespace csmahs {

std::string to_string(const TimeStateId& s) {
    switch (s.kind) {
    case TimeStateKind::I: return "I";
    case TimeStateKind::TX: return "TX(" + std::to_string(s.total_len) + "," + std::to_string(s.step) + ")";
    case TimeStateKind::V: return "V(" + std::to_string(s.total_len) + "," + std::to_string(s.step) + ")";
    case TimeStateKind::VBE: return "VBE(" + std::to_string(s.total_len) + "," + std::to_string(s.step) + ")";
    case TimeStateKind::B: return "B(" + std::to_string(s.total_len) + "," + std::to_string(s.step) + ")";
    case TimeStateKind::VBL: return "VBL(" + std::to_string(s.total_len) + "," + std::to_string(s.step) + ")";
    }
    return "?";
}

std::vector<TimeStateId> enumerate_time_states(int L) {
    if (L < 1) fail(ErrorKind::invalid_argument, "L must be >= 1");
    std::vector<TimeStateId> states;
    states.reserve(1 + 3 * L + L * L);
    states.push_back({TimeStateKind::I, 0, 0});
    for (int n = 1; n <= L; ++n) states.push_back({TimeStateKind::TX, L, n});
    for (int n = 1; n <= L; ++n) states.push_back({TimeStateKind::V, L, n});
    for (int n = 1; n <= L; ++n) states.push_back({TimeStateKind::VBE, L, n});
    for (int m = 0; m < L; ++m)
        for (int n = 1; n <= L - m; ++n)
            states.push_back({TimeStateKind::B, L - m, n});
    for (int m = 1; m < L; ++m)
        for (int n = 1; n <= L - m; ++n)
            states.push_back({TimeStateKind::VBL, L - m, n});
    return states;
}

int time_state_index(int L, const TimeStateId& s) {
    switch (s.kind) {
    case TimeStateKind::I: return 0;
    case TimeStateKind::TX: return 1 + (s.step - 1);
    case TimeStateKind::V: return 1 + L + (s.step - 1);
    case TimeStateKind::VBE: return 1 + 2 * L + (s.step - 1);
    case TimeStateKind::B: {
        int m = L - s.total_len;
        return 1 + 3 * L + m * L - m * (m - 1) / 2 + (s.step - 1);
    }
    case TimeStateKind::VBL: {
        int m = L - s.total_len;
        return 1 + 3 * L + L * (L + 1) / 2 + (m - 1) * L -
               (m - 1) * m / 2 + (s.step - 1);
    }
    }
    return -1;
}

void TimeChain::dump_coo(std::ostream& os) const {
    for (int r = 0; r < state_count; ++r) {
        for (int k = row_begin[r]; k < row_begin[r + 1]; ++k) {
            os << r << ' ' << cols[k] << ' ' << vals[k] << '\n';
        }
    }
}

TimeChain build_time_chain(const ModelParams& params,
                           const SupportProbs& sp) {
    validate(params);
    const int L = params.frame_slots;
    const double sum_i = sp.idle_to_idle + sp.idle_to_tx + sp.idle_to_v +
                         sp.idle_to_b + sp.idle_to_vbl + sp.idle_to_vbe;
    const double sum_v = sp.v_to_b + sp.v_to_vbe + sp.v_to_v;
    if (std::abs(sum_i - 1.0) > 1e-12 || std::abs(sum_v - 1.0) > 1e-12) {
        fail(ErrorKind::invalid_argument,
             "support probabilities violate sum-to-one invariants");
    }

    TimeChain chain;
    chain.params = params;
    chain.support = sp;
    chain.state_count = 1 + 3 * L + L * L;
    chain.row_begin.assign(chain.state_count + 1, 0);

    auto ix = [&](TimeStateKind k, int l, int n) {
        return time_state_index(L, {k, l, n});
    };
    const int I = 0;
    const double vbl_each = sp.idle_to_vbl / L;

    // assemble rows in enumeration order
    std::vector<std::pair<int, double>> row;
    auto flush = [&](int r) {
        chain.row_begin[r + 1] = chain.row_begin[r] + static_cast<int>(row.size());
        double sum = 0.0;
        for (auto& [c, val] : row) {
            chain.cols.push_back(c);
            chain.vals.push_back(val);
            sum += val;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            std::ostringstream msg;
            msg << "row " << r << " sums to " << sum << " (dangling probability)";
            fail(ErrorKind::internal, msg.str());
        }
        row.clear();
    };

    // I row
    row = {{I, sp.idle_to_idle},
           {ix(TimeStateKind::TX, L, 1), sp.idle_to_tx},
           {ix(TimeStateKind::V, L, 1), sp.idle_to_v + vbl_each},
           {ix(TimeStateKind::VBE, L, 1), sp.idle_to_vbe},
           {ix(TimeStateKind::B, L, 1), sp.idle_to_b}};
    for (int m = 1; m < L; ++m)
        row.emplace_back(ix(TimeStateKind::VBL, L - m, 1), vbl_each);
    flush(0);

    // TX rows
    for (int n = 1; n < L; ++n) {
        row = {{ix(TimeStateKind::TX, L, n + 1), 1.0}};
        flush(ix(TimeStateKind::TX, L, n));
    }
    row = {{I, 1.0}};
    flush(ix(TimeStateKind::TX, L, L));

    // V rows
    for (int n = 1; n < L; ++n) {
        row = {{ix(TimeStateKind::B, L - n, 1), sp.v_to_b},
               {ix(TimeStateKind::VBE, L, n + 1), sp.v_to_vbe},
               {ix(TimeStateKind::V, L, n + 1), sp.v_to_v}};
        flush(ix(TimeStateKind::V, L, n));
    }
    row = {{ix(TimeStateKind::V, L, 1), sp.v_to_b}, {I, 1.0 - sp.v_to_b}};
    flush(ix(TimeStateKind::V, L, L));

    // VBE rows
    for (int n = 1; n < L; ++n) {
        row = {{ix(TimeStateKind::VBE, L, n + 1), 1.0}};
        flush(ix(TimeStateKind::VBE, L, n));
    }
    row = {{I, 1.0}};
    flush(ix(TimeStateKind::VBE, L, L));

    // B rows: blocked until the earlier transmitter finishes, then either
    // back to idle (both started together, m = 0) or to the vulnerable
    // sub-state synced with the later transmitter's remaining time
    for (int m = 0; m < L; ++m) {
        int tl = L - m;
        for (int n = 1; n < tl; ++n) {
            row = {{ix(TimeStateKind::B, tl, n + 1), 1.0}};
            flush(ix(TimeStateKind::B, tl, n));
        }
        if (m == 0) {
            row = {{I, 1.0}};
        } else {
            row = {{ix(TimeStateKind::V, L, L - m + 1), 1.0}};
        }
        flush(ix(TimeStateKind::B, tl, tl));
    }

    // VBL rows
    for (int m = 1; m < L; ++m) {
        int tl = L - m;
        for (int n = 1; n < tl; ++n) {
            row = {{ix(TimeStateKind::VBL, tl, n + 1), 1.0}};
            flush(ix(TimeStateKind::VBL, tl, n));
        }
        row = {{ix(TimeStateKind::V, L, L - m + 1), 1.0}};
        flush(ix(TimeStateKind::VBL, tl, tl));
    }

    return chain;
}

namespace {

// Unnormalized stationary masses with pi_I = 1.  The only coupled unknowns
// are the vulnerable sub-states x_k = pi(V(L,k)): a V step feeds B blocks
// that re-enter V at the mirrored position, giving a sub-diagonal plus
// anti-diagonal system.
struct RawStationary {
    std::vector<double> x;   // V(L,1..L)
    std::vector<double> vbe; // VBE(L,1..L)
    double total = 0.0;
    double tx_each = 0.0;
    double b_full_each = 0.0; // B(L,*) from idle
    double vbl_each = 0.0;
};

RawStationary solve_raw(const ModelParams& params, const SupportProbs& sp) {
    const int L = params.frame_slots;
    const double q = sp.v_to_v, b = sp.v_to_b, e = sp.v_to_vbe;
    const double s = sp.idle_to_vbl / L;
    const double v1 = sp.idle_to_v + s;

    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(L, L);
    Eigen::VectorXd c(L);
    A(0, L - 1) -= b;
    c(0) = v1;
    for (int k = 2; k <= L; ++k) {
        A(k - 1, k - 2) -= q;
        A(k - 1, L - k) -= b;
        c(k - 1) = s;
    }
    Eigen::VectorXd x = A.partialPivLu().solve(c);
    if (!x.allFinite()) {
        fail(ErrorKind::solver, "vulnerable-block solve produced non-finite values");
    }

    RawStationary r;
    r.x.assign(x.data(), x.data() + L);
    r.tx_each = sp.idle_to_tx;
    r.b_full_each = sp.idle_to_b;
    r.vbl_each = s;
    r.vbe.resize(L);
    double acc = sp.idle_to_vbe;
    r.vbe[0] = acc;
    for (int k = 2; k <= L; ++k) {
        acc += e * r.x[k - 2];
        r.vbe[k - 1] = acc;
    }
    double total = 1.0 + L * r.tx_each + L * r.b_full_each +
                   s * (static_cast<double>(L) * (L - 1) / 2.0);
    for (int n = 1; n <= L; ++n) total += r.x[n - 1] + r.vbe[n - 1];
    for (int n = 1; n < L; ++n) total += (L - n) * b * r.x[n - 1];
    r.total = total;
    return r;
}

} // namespace

TimeAggregates time_occupancy(const ModelParams& params,
                              const SupportProbs& sp) {
    const int L = params.frame_slots;
    RawStationary raw = solve_raw(params, sp);
    TimeAggregates agg;
    agg.pi_idle = 1.0 / raw.total;
    agg.pi_tx = L * raw.tx_each / raw.total;
    agg.pi_rb = 1.0 - agg.pi_idle - agg.pi_tx;
    agg.v_states.resize(L);
    for (int n = 0; n < L; ++n) agg.v_states[n] = raw.x[n] / raw.total;
    agg.pi_b_last = raw.b_full_each / raw.total;
    agg.pi_vbe_last = raw.vbe[L - 1] / raw.total;
    return agg;
}

TimeStationary stationary_time(const TimeChain& chain) {
    const int L = chain.params.frame_slots;
    RawStationary raw = solve_raw(chain.params, chain.support);
    const double b = chain.support.v_to_b;

    TimeStationary st;
    st.pi.assign(chain.state_count, 0.0);
    auto set = [&](TimeStateKind k, int l, int n, double val) {
        st.pi[time_state_index(L, {k, l, n})] = val / raw.total;
    };
    set(TimeStateKind::I, 0, 0, 1.0);
    for (int n = 1; n <= L; ++n) set(TimeStateKind::TX, L, n, raw.tx_each);
    for (int n = 1; n <= L; ++n) set(TimeStateKind::V, L, n, raw.x[n - 1]);
    for (int n = 1; n <= L; ++n) set(TimeStateKind::VBE, L, n, raw.vbe[n - 1]);
    for (int n = 1; n <= L; ++n) set(TimeStateKind::B, L, n, raw.b_full_each);
    for (int m = 1; m < L; ++m)
        for (int n = 1; n <= L - m; ++n)
            set(TimeStateKind::B, L - m, n, b * raw.x[m - 1]);
    for (int m = 1; m < L; ++m)
        for (int n = 1; n <= L - m; ++n)
            set(TimeStateKind::VBL, L - m, n, raw.vbl_each);

    st.pi_idle = st.pi[0];
    st.pi_tx = 0.0;
    for (int n = 1; n <= L; ++n)
        st.pi_tx += st.pi[time_state_index(L, {TimeStateKind::TX, L, n})];
    st.pi_rb = 1.0 - st.pi_idle - st.pi_tx;

    // residual ||pi^T P - pi^T||_inf against the assembled sparse matrix
    std::vector<double> out(chain.state_count, 0.0);
    for (int r = 0; r < chain.state_count; ++r) {
        for (int k = chain.row_begin[r]; k < chain.row_begin[r + 1]; ++k) {
            out[chain.cols[k]] += st.pi[r] * chain.vals[k];
        }
    }
    double res = 0.0;
    for (int i = 0; i < chain.state_count; ++i)
        res = std::max(res, std::abs(out[i] - st.pi[i]));
    st.residual = res;
    if (res > 1e-10) {
        std::ostringstream msg;
        msg << "stationary residual " << res << " exceeds 1e-10";
        fail(ErrorKind::solver, msg.str());
    }
    return st;
}

std::vector<double> stationary_power_iteration(const TimeChain& chain,
                                               double tol,
                                               int64_t max_iters) {
    const int n = chain.state_count;
    std::vector<double> pi(n, 1.0 / n), next(n);
    for (int64_t it = 0; it < max_iters; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int r = 0; r < n; ++r) {
            const double w = pi[r];
            for (int k = chain.row_begin[r]; k < chain.row_begin[r + 1]; ++k)
                next[chain.cols[k]] += w * chain.vals[k];
        }
        double delta = 0.0, sum = 0.0;
        for (int i = 0; i < n; ++i) {
            next[i] = 0.5 * next[i] + 0.5 * pi[i]; // lazy step kills periodicity
            sum += next[i];
        }
        for (int i = 0; i < n; ++i) {
            next[i] /= sum;
            delta = std::max(delta, std::abs(next[i] - pi[i]));
        }
        pi.swap(next);
        if (delta < tol) return pi;
    }
    fail(ErrorKind::solver, "power iteration did not converge");
}

} // namespace csmahs
