#include "support_probs.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "error.hpp"
#include "geoseries.hpp"

namespace csmahs {

double aux_a(double p_tx, double p_of) {
    return (1.0 - p_tx) * (1.0 - p_of);
}

namespace {

void check_inputs(const ModelParams& params, double p_of) {
    validate(params);
    if (!(p_of > 0.0 && p_of < 1.0)) {
        fail(ErrorKind::invalid_argument, "p_of out of open interval (0, 1)");
    }
}

} // namespace

// Each idle-exit probability is a mixture over the free-area size d_F of the
// mean fraction of free-area stations making that exit, with the size-biased
// geometric weight n * (1-p_of)^(n-1) * p_of^2.  The V-exit probabilities use
// the plain geometric weight (the vulnerable area always holds R stations, so
// the size bias cancels).  The per-size means split into cases by how the
// one-side sensing range compares with the area; each case mean is a short
// polynomial-times-geometric expression, so the mixtures reduce to partial
// geometric sums in (1-p_of) and in a plus closed tails.
SupportProbs support_probabilities(const ModelParams& params, double p_of) {
    check_inputs(params, p_of);
    const double p = params.p_tx;
    const int R = params.neighbors;
    const double u = 1.0 - p;   // station stays quiet for one slot
    const double v = 1.0 - p_of;
    const double a = u * v;
    if (1.0 - a < kGeoGuard) {
        fail(ErrorKind::degenerate,
             "numerical guard: 1 - (1-p_tx)(1-p_of) below 1e-12");
    }
    const double P2 = p_of * p_of;
    const double uR = std::pow(u, R);
    const double uR1 = uR * u;           // u^(R+1)
    const double u2R1 = uR1 * uR;        // u^(2R+1)

    SupportProbs s;
    s.idle_to_tx = p;

    // idle -> idle
    double pII = u * geo_sum_weighted(a, 1, R + 1);
    pII += (2.0 / p) * uR1 * geo_sum(v, R + 2, 2 * R) +
           (2.0 * R + 2.0 - 2.0 / p) * u * geo_sum(a, R + 2, 2 * R) -
           u * geo_sum_weighted(a, R + 2, 2 * R);
    pII += (2.0 / p) * uR1 * geo_tail(v, p_of, 2 * R + 1) -
           (2.0 * R + 2.0 / p) * u2R1 * geo_tail(v, p_of, 2 * R + 1) +
           u2R1 * geo_tail_weighted(v, p_of, 2 * R + 1);
    s.idle_to_idle = P2 * pII;

    // idle -> vulnerable
    double pVI = 2.0 * R *
                 (uR1 * geo_sum(v, R + 2, 2 * R + 2) -
                  u * geo_sum(a, R + 2, 2 * R + 2));
    pVI += 2.0 * R *
           (p * u2R1 *
                (geo_tail_weighted(v, p_of, 2 * R + 3) -
                 (2.0 * R + 2.0) * geo_tail(v, p_of, 2 * R + 3)) +
            (uR1 - u2R1 * u) * geo_tail(v, p_of, 2 * R + 3));
    s.idle_to_v = P2 * pVI;

    // idle -> blocked
    double pBI = u * geo_sum_weighted(v, 1, R + 1) +
                 u * geo_sum_weighted(a, 1, R + 1) -
                 (2.0 * u / p) * geo_sum(v, 1, R + 1) +
                 (2.0 * u * u / p) * geo_sum(a, 1, R + 1);
    pBI += u * (((4.0 + 2.0 * R * p) / p * uR - 2.0 / p) *
                    geo_sum(v, R + 2, 2 * R) +
                (1.0 - 2.0 * uR) * geo_sum_weighted(v, R + 2, 2 * R) +
                (2.0 * R + 2.0 - 2.0 / p) * geo_sum(a, R + 2, 2 * R) -
                geo_sum_weighted(a, R + 2, 2 * R));
    const double alpha = 2.0 * u * (1.0 - uR) * (R - (1.0 - uR) / p);
    const double beta = u * (1.0 - uR) * (1.0 - uR);
    pBI += (alpha - 2.0 * R * beta) * geo_tail(v, p_of, 2 * R + 1) +
           beta * geo_tail_weighted(v, p_of, 2 * R + 1);
    s.idle_to_b = P2 * pBI;

    // shared bracket for idle -> VBL and V -> VBE: both count the stations
    // left of the left-most next-slot transmitter in the adjacent free area
    const double W = geo_sum(v, 1, R) - geo_sum_weighted(a, 1, R) +
                     u * (geo_sum_weighted(a, 1, R) - geo_sum(a, 1, R)) +
                     (1.0 - (R + 1) * uR + R * uR1) * geo_tail(v, p_of, R + 1);
    s.idle_to_vbl = (2.0 * u / p) * P2 * W;

    s.idle_to_vbe = 1.0 - s.idle_to_idle - s.idle_to_tx - s.idle_to_v -
                    s.idle_to_b - s.idle_to_vbl;

    // V -> B
    const double mean_b_full =
        ((R + 1) * (1.0 - uR) - (1.0 - (R + 1) * uR + R * uR1) / p) / R;
    s.v_to_b =
        p_of *
            (((R + 1) * geo_sum(v, 1, R) - (R + 1) * u * geo_sum(a, 1, R) -
              (1.0 / p) * geo_sum(v, 1, R) +
              (1.0 / p) * u * (geo_sum_weighted(a, 1, R) + geo_sum(a, 1, R)) -
              (1.0 / p) * u * u * geo_sum_weighted(a, 1, R)) /
             R) +
        p_of * mean_b_full * geo_tail(v, p_of, R + 1);

    // V -> VBE
    s.v_to_vbe = (u / (R * p)) * p_of * W;

    // V -> V
    s.v_to_v = p_of * u * geo_sum(a, 1, R + 1) + std::pow(a, R + 1);
    return s;
}

// Brute-force mixture: per free-area size n the per-position case expressions
// are summed directly (segments where the expression is constant in the
// position are multiplied out), then weighted by the geometric law of n.  No
// closed-form algebra is shared with support_probabilities beyond the power
// function.
SupportProbs support_probabilities_by_series(const ModelParams& params,
                                             double p_of, double tail_eps) {
    check_inputs(params, p_of);
    if (!(tail_eps > 0.0 && tail_eps <= 1e-6)) {
        fail(ErrorKind::invalid_argument, "tail_eps must be in (0, 1e-6]");
    }
    const double p = params.p_tx;
    const int R = params.neighbors;
    const double u = 1.0 - p;
    const double v = 1.0 - p_of;
    const double P2 = p_of * p_of;

    std::vector<double> upow(static_cast<size_t>(2 * R + 3), 0.0);
    upow[0] = 1.0;
    for (size_t i = 1; i < upow.size(); ++i) upow[i] = upow[i - 1] * u;
    auto up = [&](int e) {
        return e < static_cast<int>(upow.size()) ? upow[e] : std::pow(u, e);
    };

    // constant-in-x prefixes shared by every size with min(n, R+1) cap
    double vbl_full = 0.0; // sum_x 2 (x-1) u^(x-1) p over x = 1..R+1
    double mb_full = 0.0;  // sum_x (R+1-x)/R u^(x-1) p over x = 1..R
    double me_full = 0.0;  // sum_x (x-1)/R u^(x-1) p over x = 1..R+1

    double pII = 0, pVI = 0, pBI = 0, pVBLI = 0;
    double pBV = 0, pVBEV = 0, pVV = 0;
    double w_geo = p_of; // (1-p_of)^(n-1) p_of
    for (int n = 1;; ++n) {
        double sII, sV = 0.0, sB;
        if (n <= R + 1) {
            sII = n * up(n);
            sB = 0.0;
            for (int x = 1; x <= n; ++x)
                sB += u * (1.0 - up(x - 1)) * (1.0 - up(n - x));
        } else if (n <= 2 * R) {
            sII = 0.0;
            sB = 0.0;
            for (int x = 1; x <= n - R - 1; ++x) {
                sII += up(x + R);
                sB += u * (1.0 - up(x - 1)) * (1.0 - up(R));
            }
            for (int x = n - R; x <= R + 1; ++x) {
                sII += up(n);
                sB += u * (1.0 - up(x - 1)) * (1.0 - up(n - x));
            }
            for (int x = R + 2; x <= n; ++x) {
                sII += up(n - x + R + 1);
                sB += u * (1.0 - up(R)) * (1.0 - up(n - x));
            }
        } else {
            sII = sB = 0.0;
            for (int x = 1; x <= R; ++x) {
                sII += up(x + R);
                sB += u * (1.0 - up(x - 1)) * (1.0 - up(R));
            }
            sII += (n - 2 * R) * up(2 * R + 1);
            sB += (n - 2 * R) * u * (1.0 - up(R)) * (1.0 - up(R));
            for (int x = n - R + 1; x <= n; ++x) {
                sII += up(n - x + R + 1);
                sB += u * (1.0 - up(R)) * (1.0 - up(n - x));
            }
        }
        if (n >= R + 2 && n <= 2 * R + 2) {
            for (int x = 1; x <= n - R - 1; ++x) sV += up(n - x);
        } else if (n >= 2 * R + 3) {
            sV = (n - 2 * R - 2) * up(2 * R + 1);
            for (int x = n - 2 * R - 1; x <= n - R - 1; ++x) sV += up(n - x);
        }
        sV *= 2.0 * R * p;

        // running prefixes implement the min(n, R+1) position caps
        if (n <= R + 1)
            vbl_full += 2.0 * (n - 1) * up(n - 1) * p;
        if (n <= R)
            mb_full += (R + 1.0 - n) / R * up(n - 1) * p;
        if (n <= R + 1)
            me_full += (n - 1.0) / R * up(n - 1) * p;

        pII += sII * w_geo * p_of;   // position sums carry the size bias
        pVI += sV * w_geo * p_of;
        pBI += sB * w_geo * p_of;
        pVBLI += vbl_full * w_geo * p_of;
        pBV += mb_full * w_geo;
        pVBEV += me_full * w_geo;
        pVV += up(std::min(n, R + 1)) * w_geo;

        w_geo *= v;
        if (n > 2 * R + 3 &&
            geo_tail_weighted(v, p_of, n + 1) * P2 < tail_eps)
            break;
    }
    SupportProbs s;
    s.idle_to_tx = p;
    s.idle_to_idle = pII;
    s.idle_to_v = pVI;
    s.idle_to_b = pBI;
    s.idle_to_vbl = pVBLI;
    s.idle_to_vbe = 1.0 - pII - s.idle_to_tx - pVI - pBI - pVBLI;
    s.v_to_b = pBV;
    s.v_to_vbe = pVBEV;
    s.v_to_v = pVV;
    return s;
}

VTransitionsAtDistance v_transitions_at_distance(double p_tx, int neighbors,
                                                 double p_of, int d_rx) {
    if (!(p_tx > 0.0 && p_tx < 1.0) || !(p_of > 0.0 && p_of < 1.0)) {
        fail(ErrorKind::invalid_argument, "probabilities out of (0, 1)");
    }
    const int R = neighbors;
    if (d_rx < 1 || d_rx > R) {
        fail(ErrorKind::invalid_argument, "d_rx out of range 1..R");
    }
    const double u = 1.0 - p_tx;
    const double v = 1.0 - p_of;
    const double a = u * v;
    const double ud = std::pow(u, d_rx);
    const double vd = std::pow(v, d_rx);
    VTransitionsAtDistance t;
    t.d_rx = d_rx;
    // mixtures of the conditional exits over the geometric size of the
    // adjacent free area, split at sizes d_rx and R+1
    t.v_to_b_d = (1.0 - vd) - p_of * u * geo_sum(a, 1, d_rx) +
                 (1.0 - ud) * vd;
    t.v_to_vbe_d = ud * (vd - std::pow(v, R + 1)) -
                   p_of * u * (geo_sum(a, 1, R + 1) - geo_sum(a, 1, d_rx)) +
                   ud * (1.0 - std::pow(u, R - d_rx + 1)) * std::pow(v, R + 1);
    t.v_to_v_d = p_of * u * geo_sum(a, 1, R + 1) + std::pow(a, R + 1);
    return t;
}

} // namespace csmahs
