#include "simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "error.hpp"

namespace csmahs {

SimConfig validate_sim_config(const SimConfig& cfg) {
    std::ostringstream bad;
    if (!(cfg.p_tx > 0.0 && cfg.p_tx < 1.0)) bad << "p_tx out of (0, 1); ";
    if (cfg.frame_slots < 1) bad << "L must be >= 1; ";
    if (cfg.neighbors < 1) bad << "R must be >= 1; ";
    if (cfg.stations < 4 * cfg.neighbors + 4)
        bad << "N must be >= 4R + 4 so the ring dwarfs the sensing range; ";
    if (cfg.warmup_slots < 1) bad << "warmup_slots must be >= 1; ";
    if (cfg.measure_slots < 1) bad << "measure_slots must be >= 1; ";
    std::string msg = bad.str();
    if (!msg.empty()) {
        msg.resize(msg.size() - 2);
        fail(ErrorKind::validation, msg);
    }
    return cfg;
}

namespace {

constexpr int kBatches = 16;

struct Welford { // plain per-sample accumulator
    int64_t n = 0;
    double sum = 0.0, sumsq = 0.0;
    void add(double x) {
        ++n;
        sum += x;
        sumsq += x * x;
    }
    PeriodStat stat() const {
        PeriodStat p;
        p.count = n;
        if (n > 0) p.mean = sum / n;
        if (n > 1) {
            double var = (sumsq - sum * sum / n) / (n - 1);
            p.se = std::sqrt(std::max(var, 0.0) / n);
        }
        return p;
    }
};

struct BatchMeans { // one value per batch; SE across batches
    double sum[kBatches] = {};
    double cnt[kBatches] = {};
    void add(int b, double v, double w = 1.0) {
        sum[b] += v;
        cnt[b] += w;
    }
    // mean of pooled data and SE of the batch means
    void finish(double& mean, double& se) const {
        double tot = 0.0, totw = 0.0;
        int used = 0;
        double bm[kBatches];
        for (int i = 0; i < kBatches; ++i) {
            tot += sum[i];
            totw += cnt[i];
            if (cnt[i] > 0) bm[used++] = sum[i] / cnt[i];
        }
        mean = totw > 0 ? tot / totw : 0.0;
        if (used > 1) {
            double m = 0.0;
            for (int i = 0; i < used; ++i) m += bm[i];
            m /= used;
            double var = 0.0;
            for (int i = 0; i < used; ++i) var += (bm[i] - m) * (bm[i] - m);
            se = std::sqrt(var / (used - 1) / used);
        } else {
            se = 0.0;
        }
    }
};

} // namespace

SimReport run_simulation(const SimConfig& cfg_in) {
    const SimConfig cfg = validate_sim_config(cfg_in);
    const int N = cfg.stations;
    const int L = cfg.frame_slots;
    const int R = cfg.neighbors;
    const int64_t warm = cfg.warmup_slots;
    const int64_t t_end = cfg.warmup_slots + cfg.measure_slots;

    std::mt19937_64 rng(cfg.seed);
    auto uniform = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };

    std::vector<uint8_t> is_tx(N, 0);
    std::vector<int64_t> start_slot(N, -1);
    std::vector<int32_t> busy_cnt(N, 0);
    std::vector<int32_t> txs; // sorted transmitter positions
    txs.reserve(N);
    // transmissions ending after slot t are released at the top of t+1
    std::vector<std::vector<int32_t>> end_bucket(L + 1);

    // per-station trackers
    std::vector<uint8_t> prev_chan(N, 0); // 0 idle, 1 busy, 2 transmitting
    std::vector<int64_t> run_start(N, 0);
    std::vector<uint8_t> in_burst(N, 0);
    std::vector<int64_t> burst_start(N, 0), burst_end(N, -1);
    std::vector<int32_t> burst_frames(N, 0);
    std::vector<int64_t> last_burst_start(N, -1);
    std::vector<int64_t> completed_at(N, -2); // slot the last counted burst ended
    std::vector<int64_t> last_tx_start(N, -1);

    std::vector<int32_t> pending; // stations starting at the current slot
    pending.reserve(N);
    std::vector<int32_t> next_pending;
    next_pending.reserve(N);

    SimReport rep;
    rep.config = cfg;
    rep.dtx_hist.assign(N + 1, 0);
    rep.df_hist.assign(N + 1, 0);
    rep.df_hist_spaced.assign(N + 1, 0);

    Welford w_idle, w_rb, w_rxb, w_txp;
    BatchMeans bm_idle, bm_tx, bm_rb_occ; // occupancy fractions
    BatchMeans bm_trb, bm_trxp, bm_pif, bm_good;
    int64_t occ_idle = 0, occ_tx = 0, occ_busy = 0;
    int64_t consec_count = 0;

    auto batch_of = [&](int64_t t) {
        int b = static_cast<int>((t - warm) * kBatches / cfg.measure_slots);
        return std::min(b, kBatches - 1);
    };

    auto wrap = [N](int v) { return v < 0 ? v + N : (v >= N ? v - N : v); };

    for (int64_t t = 0; t < t_end; ++t) {
        const bool in_meas = t >= warm;

        // release transmissions whose last slot was t-1
        auto& ending = end_bucket[static_cast<size_t>(t % (L + 1))];
        for (int s : ending) {
            is_tx[s] = 0;
            auto it = std::lower_bound(txs.begin(), txs.end(), s);
            txs.erase(it);
            for (int v = s - R; v <= s + R; ++v) {
                if (v != s) busy_cnt[wrap(v)] -= 1;
            }
        }
        for (int s : ending) {
            if (busy_cnt[s] != 0) {
                fail(ErrorKind::internal,
                     "protocol bug: channel busy right after own transmission");
            }
        }
        ending.clear();

        // commit this slot's transmission starts
        for (int s : pending) {
            is_tx[s] = 1;
            start_slot[s] = t;
            txs.insert(std::lower_bound(txs.begin(), txs.end(), s), s);
            end_bucket[static_cast<size_t>((t + L) % (L + 1))].push_back(s);
            for (int v = s - R; v <= s + R; ++v) {
                if (v == s) continue;
                int w = wrap(v);
                // in-range transmitters must be slot-synchronized
                if (is_tx[w] && start_slot[w] != t) {
                    fail(ErrorKind::internal,
                         "protocol bug: in-range transmitters not slot-synchronized");
                }
                busy_cnt[w] += 1;
                // a frame starting inside a live burst joins and extends it
                if (in_burst[w]) {
                    burst_frames[w] += 1;
                    if (burst_end[w] < t + L - 1) burst_end[w] = t + L - 1;
                }
            }
            if (in_meas && last_tx_start[s] >= warm) {
                w_txp.add(static_cast<double>(t - last_tx_start[s]));
            }
            last_tx_start[s] = t;
        }
        pending.clear();

        if (cfg.check_with_scan) {
            for (int s = 0; s < N; ++s) {
                int32_t scan = 0;
                for (int v = s - R; v <= s + R; ++v) {
                    if (v != s) scan += is_tx[wrap(v)];
                }
                if (scan != busy_cnt[s]) {
                    fail(ErrorKind::internal,
                         "incremental busy counter diverged from range scan");
                }
            }
        }

        // spatial samples from the transmitter gaps
        if (in_meas) {
            const bool spaced = (t - warm) % rep.df_snapshot_stride == 0;
            const int m = static_cast<int>(txs.size());
            if (m == 0) {
                ++rep.ring_wide_idle_slots;
            } else if (m == 1) {
                int run = N - (2 * R + 1);
                if (run >= 1) {
                    rep.df_hist[run] += 1;
                    ++rep.df_samples;
                    if (spaced) rep.df_hist_spaced[run] += 1;
                }
            } else {
                for (int i = 0; i < m; ++i) {
                    int gap = (i + 1 < m ? txs[i + 1] : txs[0] + N) - txs[i];
                    rep.dtx_hist[gap] += 1;
                    ++rep.dtx_samples;
                    int run = gap - (2 * R + 1);
                    if (run >= 1) {
                        rep.df_hist[run] += 1;
                        ++rep.df_samples;
                        if (spaced) rep.df_hist_spaced[run] += 1;
                    }
                }
            }
            if (cfg.check_with_scan && !txs.empty()) {
                // the gap-derived free runs must equal a direct scan of the
                // stations sensing idle
                std::vector<int> scan_runs, gap_runs;
                int anchor = txs[0];
                int run = 0;
                for (int i = 0; i < N; ++i) {
                    int s = wrap(anchor + i);
                    bool idle = !is_tx[s] && busy_cnt[s] == 0;
                    if (idle) {
                        ++run;
                    } else if (run > 0) {
                        scan_runs.push_back(run);
                        run = 0;
                    }
                }
                if (run > 0) scan_runs.push_back(run);
                const int m2 = static_cast<int>(txs.size());
                for (int i = 0; i < m2; ++i) {
                    int gap = (i + 1 < m2 ? txs[i + 1] : txs[0] + N) - txs[i];
                    if (gap - (2 * R + 1) >= 1)
                        gap_runs.push_back(gap - (2 * R + 1));
                }
                std::sort(scan_runs.begin(), scan_runs.end());
                std::sort(gap_runs.begin(), gap_runs.end());
                if (scan_runs != gap_runs) {
                    fail(ErrorKind::internal,
                         "free-run derivation diverged from direct scan");
                }
            }
        }

        // per-station classification, bookkeeping, and next-slot decisions
        int64_t slot_idle = 0, slot_tx = 0;
        for (int s = 0; s < N; ++s) {
            uint8_t now;
            if (is_tx[s]) {
                now = 2;
                ++slot_tx;
            } else if (busy_cnt[s] > 0) {
                now = 1;
            } else {
                now = 0;
                ++slot_idle;
            }
            const uint8_t prev = prev_chan[s];
            if (now != prev) {
                if (prev == 0 && in_meas && run_start[s] >= warm) {
                    w_idle.add(static_cast<double>(t - run_start[s]));
                }
                if (prev == 1 && in_meas && run_start[s] >= warm) {
                    double len = static_cast<double>(t - run_start[s]);
                    w_rb.add(len);
                    bm_trb.add(batch_of(t), len);
                }
                run_start[s] = t;
                prev_chan[s] = now;
            }
            if (now == 1) {
                if (!in_burst[s]) {
                    in_burst[s] = 1;
                    burst_start[s] = t;
                    burst_end[s] = t + L - 1; // all heard frames began now
                    burst_frames[s] = busy_cnt[s];
                    if (in_meas && last_burst_start[s] >= warm) {
                        double gap = static_cast<double>(t - last_burst_start[s]);
                        bm_trxp.add(batch_of(t), gap);
                    }
                    if (completed_at[s] == t - 1) ++consec_count;
                    last_burst_start[s] = t;
                }
                if (in_burst[s] && t == burst_end[s]) {
                    in_burst[s] = 0;
                    if (in_meas && burst_start[s] >= warm) {
                        ++rep.bursts_completed;
                        const bool clean = burst_frames[s] == 1;
                        if (clean) ++rep.bursts_clean;
                        int b = batch_of(t);
                        bm_pif.add(b, clean ? 1.0 : 0.0);
                        bm_good.add(b, clean ? 1.0 : 0.0, 0.0);
                        w_rxb.add(static_cast<double>(t - burst_start[s] + 1));
                        completed_at[s] = t;
                    } else {
                        completed_at[s] = -2;
                    }
                }
            } else if (now == 0) {
                // decide a start for the next slot
                if (uniform() < cfg.p_tx) next_pending.push_back(s);
            }
        }
        if (in_meas) {
            occ_idle += slot_idle;
            occ_tx += slot_tx;
            occ_busy += N - slot_idle - slot_tx;
            int b = batch_of(t);
            bm_idle.add(b, static_cast<double>(slot_idle), N);
            bm_tx.add(b, static_cast<double>(slot_tx), N);
            bm_rb_occ.add(b, static_cast<double>(N - slot_idle - slot_tx), N);
        }
        pending.swap(next_pending);
    }

    const double denom = static_cast<double>(cfg.measure_slots) * N;
    rep.pi_idle = occ_idle / denom;
    rep.pi_tx = occ_tx / denom;
    rep.pi_rb = occ_busy / denom;
    double dummy;
    bm_idle.finish(dummy, rep.se_pi_idle);
    bm_tx.finish(dummy, rep.se_pi_tx);
    bm_rb_occ.finish(dummy, rep.se_pi_rb);

    rep.t_idle = w_idle.stat();
    rep.t_rb = w_rb.stat();
    rep.t_rxb = w_rxb.stat();
    rep.t_txp = w_txp.stat();
    {
        double mean, se;
        bm_trxp.finish(mean, se);
        rep.t_rxp.count = 0;
        for (int i = 0; i < kBatches; ++i)
            rep.t_rxp.count += static_cast<int64_t>(bm_trxp.cnt[i]);
        rep.t_rxp.mean = mean;
        rep.t_rxp.se = se;
        bm_trb.finish(mean, se);
        rep.t_rb.se = se; // batch-means SE is honest under autocorrelation
    }

    rep.bursts_consecutive = consec_count;
    if (rep.bursts_completed > 0) {
        rep.p_if = static_cast<double>(rep.bursts_clean) / rep.bursts_completed;
        rep.p_con_rx =
            static_cast<double>(consec_count) / rep.bursts_completed;
    }
    {
        double mean, se;
        bm_pif.finish(mean, se);
        rep.se_p_if = se;
    }
    rep.goodput = static_cast<double>(rep.bursts_clean) * L / denom;
    {
        // per-batch goodput from per-batch clean counts
        double bg[kBatches];
        int used = 0;
        for (int i = 0; i < kBatches; ++i) {
            double batch_slots = static_cast<double>(cfg.measure_slots) / kBatches;
            bg[used++] = bm_good.sum[i] * L / (batch_slots * N);
        }
        double m = 0.0;
        for (int i = 0; i < used; ++i) m += bg[i];
        m /= used;
        double var = 0.0;
        for (int i = 0; i < used; ++i) var += (bg[i] - m) * (bg[i] - m);
        rep.se_goodput = used > 1 ? std::sqrt(var / (used - 1) / used) : 0.0;
    }

    if (rep.df_samples > 0) {
        double total_len = 0.0;
        for (size_t k = 1; k < rep.df_hist.size(); ++k)
            total_len += static_cast<double>(k) * rep.df_hist[k];
        rep.df_fit_p_of = rep.df_samples / total_len;
    }
    return rep;
}

std::vector<double> SimReport::dtx_pmf_empirical(int k_max) const {
    std::vector<double> out(k_max, 0.0);
    if (dtx_samples == 0) return out;
    for (int k = 1; k <= k_max && k < static_cast<int>(dtx_hist.size()); ++k)
        out[k - 1] = static_cast<double>(dtx_hist[k]) / dtx_samples;
    return out;
}

std::vector<double> SimReport::df_pmf_empirical(int k_max) const {
    std::vector<double> out(k_max, 0.0);
    if (df_samples == 0) return out;
    for (int k = 1; k <= k_max && k < static_cast<int>(df_hist.size()); ++k)
        out[k - 1] = static_cast<double>(df_hist[k]) / df_samples;
    return out;
}

} // namespace csmahs
