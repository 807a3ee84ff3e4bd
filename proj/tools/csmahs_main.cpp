// Command-line front end for the csmahs shared library: single solves, p_tx
// sweeps, ring simulations, and analytic-vs-simulated validation.  Talks to
// the library through the public C API only.
#include "csmahs/csmahs.h"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

// process exit codes
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSolver = 4;
constexpr int kExitComparison = 5;
constexpr int kExitIo = 6;
constexpr int kExitInternal = 7;

int exit_code_for(int status) {
    switch (status) {
    case CSMAHS_OK: return kExitOk;
    case CSMAHS_E_INVALID_ARGUMENT:
    case CSMAHS_E_VALIDATION: return kExitValidation;
    case CSMAHS_E_NO_ROOT:
    case CSMAHS_E_SOLVER:
    case CSMAHS_E_DEGENERATE: return kExitSolver;
    case CSMAHS_E_IO: return kExitIo;
    default: return kExitInternal;
    }
}

[[noreturn]] void die(int status, const std::string& context) {
    std::cerr << "csmahs: " << context << ": " << csmahs_last_error() << "\n";
    std::exit(exit_code_for(status));
}

std::string fmt(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// relative outputs land under CSMAHS_OUT_DIR when it is set
std::string resolve_out(const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    const char* dir = std::getenv("CSMAHS_OUT_DIR");
    if (!dir || !*dir) return path;
    return (std::filesystem::path(dir) / p).string();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(resolve_out(path));
    if (!os) {
        std::cerr << "csmahs: cannot open " << resolve_out(path)
                  << " for writing\n";
        std::exit(kExitIo);
    }
    return os;
}

// expands "--config FILE" into --key=value tokens from flat key=value lines
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 0; i < argc; ++i) {
        std::string a = argv[i];
        std::string path;
        if (a == "--config" && i + 1 < argc) {
            path = argv[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
        } else {
            args.push_back(std::move(a));
            continue;
        }
        std::ifstream is(path);
        if (!is) {
            std::cerr << "csmahs: cannot read config file " << path << "\n";
            std::exit(kExitUsage);
        }
        std::string line;
        while (std::getline(is, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            while (!line.empty() && (line.back() == ' ' || line.back() == '\r'))
                line.pop_back();
            size_t start = line.find_first_not_of(' ');
            if (start == std::string::npos) continue;
            line = line.substr(start);
            if (line.find('=') == std::string::npos) {
                std::cerr << "csmahs: config line is not key=value: " << line
                          << "\n";
                std::exit(kExitUsage);
            }
            args.push_back("--" + line);
        }
    }
    return args;
}

uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

struct PtxRange {
    std::vector<double> explicit_list;
    double lo = 0.0, hi = 0.0;
    int points = 0;
    bool log_spaced = false;

    std::vector<double> values() const {
        if (!explicit_list.empty()) return explicit_list;
        std::vector<double> out;
        for (int i = 0; i < points; ++i) {
            double t = points == 1 ? 0.0
                                   : static_cast<double>(i) / (points - 1);
            out.push_back(log_spaced
                              ? lo * std::pow(hi / lo, t)
                              : lo + (hi - lo) * t);
        }
        return out;
    }
};

void check_ptx_values(const std::vector<double>& v) {
    if (v.empty()) {
        std::cerr << "csmahs: empty p_tx list\n";
        std::exit(kExitUsage);
    }
    for (double p : v) {
        if (!(p > 0.0 && p < 1.0)) {
            std::cerr << "csmahs: p_tx " << p << " outside (0, 1)\n";
            std::exit(kExitValidation);
        }
    }
}

struct ModelOwner {
    csmahs_model* m = nullptr;
    ~ModelOwner() { csmahs_model_free(m); }
};

struct SimOwner {
    csmahs_sim_report* r = nullptr;
    ~SimOwner() { csmahs_sim_report_free(r); }
};

void write_hist_csv(const std::string& path, const csmahs_sim_report* rep,
                    int which, int k_max, int64_t samples) {
    std::vector<double> pmf(k_max);
    csmahs_sim_report_pmf(rep, which, k_max, pmf.data());
    std::ofstream os = open_out(path);
    os << "k,count,probability\n";
    for (int k = 1; k <= k_max; ++k) {
        int64_t count = std::llround(pmf[k - 1] * static_cast<double>(samples));
        os << k << ',' << count << ',' << fmt(pmf[k - 1]) << '\n';
    }
}

// ---------------------------------------------------------------- solve ----

struct SolveArgs {
    double p_tx = -1.0;
    int L = 0, R = 0;
    double slot_seconds = 0.0, frame_seconds = 0.0;
    double range_m = 0.0, density = 0.0;
    std::string out, pmf_csv, dump_time, dump_space;
    bool oracle = false;
};

int run_solve(const SolveArgs& a) {
    int L = a.L, R = a.R;
    if (L == 0 && a.frame_seconds > 0.0) {
        int32_t v = 0;
        if (int rc = csmahs_frame_slots(a.frame_seconds, a.slot_seconds, &v))
            die(rc, "deriving frame slots");
        L = v;
    }
    if (R == 0 && a.range_m > 0.0) {
        int32_t v = 0;
        if (int rc = csmahs_neighbor_count(a.range_m, a.density, &v))
            die(rc, "deriving neighbor count");
        R = v;
    }
    ModelOwner model;
    if (int rc = csmahs_solve(a.p_tx, L, R, &model.m)) die(rc, "solve");
    csmahs_metrics m{};
    csmahs_model_metrics(model.m, &m);

    std::cout << "p_tx=" << fmt(m.p_tx) << " L=" << m.frame_slots
              << " R=" << m.neighbors << "\n"
              << "p_OF=" << fmt(m.p_of) << " (residual " << fmt(m.residual)
              << ", " << m.iterations << " evaluations)\n"
              << "pi_I=" << fmt(m.pi_idle) << " pi_TX=" << fmt(m.pi_tx)
              << " pi_RB=" << fmt(m.pi_rb) << "\n"
              << "T_I=" << fmt(m.t_idle) << " T_RB=" << fmt(m.t_rb)
              << " T_RXB=" << fmt(m.t_rxb) << " T_RXP=" << fmt(m.t_rxp)
              << " T_TXP=" << fmt(m.t_txp) << "\n"
              << "p_IF=" << fmt(m.p_if) << " p_ConRX=" << fmt(m.p_con_rx)
              << " G=" << fmt(m.goodput) << "\n";
    if (m.degenerate)
        std::cout << "note: synchronized degenerate regime, goodput forced to 0\n";
    if (m.multiple_roots)
        std::cout << "warning: multiple fixed-point candidates; smallest residual kept\n";

    if (a.oracle) {
        double dev = 0.0;
        if (int rc = csmahs_model_oracle_check(model.m, 1e-15, &dev))
            die(rc, "oracle check");
        std::cout << "oracle: closed forms vs series max deviation = "
                  << fmt(dev) << "\n";
    }
    if (!a.out.empty()) {
        char* json = nullptr;
        if (int rc = csmahs_model_metrics_json(model.m, &json))
            die(rc, "serializing metrics");
        open_out(a.out) << json << "\n";
        csmahs_string_free(json);
    }
    if (!a.pmf_csv.empty()) {
        int k_max = 6 * (2 * m.neighbors + 2);
        std::vector<double> dtx(k_max), df(k_max);
        csmahs_model_dtx_pmf(model.m, k_max, dtx.data());
        csmahs_model_df_pmf(model.m, k_max, df.data());
        std::ofstream os = open_out(a.pmf_csv);
        os << "k,f_dtx,f_df\n";
        for (int k = 1; k <= k_max; ++k)
            os << k << ',' << fmt(dtx[k - 1]) << ',' << fmt(df[k - 1]) << '\n';
    }
    if (!a.dump_time.empty() || !a.dump_space.empty()) {
        std::string tp = resolve_out(a.dump_time);
        std::string sp = resolve_out(a.dump_space);
        if (int rc = csmahs_model_dump_chains(
                model.m, a.dump_time.empty() ? nullptr : tp.c_str(),
                a.dump_space.empty() ? nullptr : sp.c_str()))
            die(rc, "dumping chains");
    }
    return kExitOk;
}

// ---------------------------------------------------------------- sweep ----

struct SweepArgs {
    int L = 32, R = 16;
    PtxRange range;
    std::string mode = "analytic";
    std::string out;
    std::string format = "csv";
    uint64_t seed_base = 1;
    int stations = 800;
    int64_t warmup = 50'000, slots = 500'000;
    int jobs = 0;
};

struct SweepRow {
    double p_tx = 0.0;
    bool ok = false;
    std::string status = "ok";
    csmahs_metrics ana{};
    csmahs_sim_summary sim{};
    bool has_ana = false, has_sim = false;
};

SweepRow sweep_point(const SweepArgs& a, double p_tx, int index) {
    SweepRow row;
    row.p_tx = p_tx;
    if (a.mode != "simulate") {
        ModelOwner model;
        int rc = csmahs_solve(p_tx, a.L, a.R, &model.m);
        if (rc != CSMAHS_OK) {
            row.status = csmahs_last_error();
            return row;
        }
        csmahs_model_metrics(model.m, &row.ana);
        row.has_ana = true;
    }
    if (a.mode != "analytic") {
        csmahs_sim_config cfg{};
        cfg.stations = a.stations;
        cfg.frame_slots = a.L;
        cfg.neighbors = a.R;
        cfg.p_tx = p_tx;
        cfg.warmup_slots = a.warmup;
        cfg.measure_slots = a.slots;
        cfg.seed = a.seed_base + static_cast<uint64_t>(index);
        SimOwner sim;
        int rc = csmahs_simulate(&cfg, &sim.r);
        if (rc != CSMAHS_OK) {
            row.status = csmahs_last_error();
            return row;
        }
        csmahs_sim_report_summary(sim.r, &row.sim);
        row.has_sim = true;
    }
    row.ok = true;
    return row;
}

void write_wide_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                    bool simulated) {
    os << "p_tx,p_OF,pi_I,pi_TX,pi_RB,T_I,T_RB,T_RXB,T_RXP,T_TXP,p_IF,G,"
          "sync_flag,status\n";
    for (const auto& r : rows) {
        os << fmt(r.p_tx) << ',';
        if (!r.ok) {
            os << ",,,,,,,,,,,," << '"' << r.status << '"' << '\n';
            continue;
        }
        if (simulated) {
            const auto& s = r.sim;
            bool sync = s.goodput < 1e-3;
            os << fmt(s.df_fit_p_of) << ',' << fmt(s.pi_idle) << ','
               << fmt(s.pi_tx) << ',' << fmt(s.pi_rb) << ',' << fmt(s.t_idle)
               << ',' << fmt(s.t_rb) << ',' << fmt(s.t_rxb) << ','
               << fmt(s.t_rxp) << ',' << fmt(s.t_txp) << ',' << fmt(s.p_if)
               << ',' << fmt(s.goodput) << ',' << (sync ? 1 : 0) << ",ok\n";
        } else {
            const auto& m = r.ana;
            bool sync = m.degenerate || m.goodput < 1e-3;
            os << fmt(m.p_of) << ',' << fmt(m.pi_idle) << ',' << fmt(m.pi_tx)
               << ',' << fmt(m.pi_rb) << ',' << fmt(m.t_idle) << ','
               << fmt(m.t_rb) << ',' << fmt(m.t_rxb) << ',' << fmt(m.t_rxp)
               << ',' << fmt(m.t_txp) << ',' << fmt(m.p_if) << ','
               << fmt(m.goodput) << ',' << (sync ? 1 : 0) << ",ok\n";
        }
    }
}

struct Comparison {
    const char* metric;
    double analytic, simulated, stderr_;
};

std::vector<Comparison> compare_row(const SweepRow& r) {
    const auto& a = r.ana;
    const auto& s = r.sim;
    return {{"pi_I", a.pi_idle, s.pi_idle, s.se_pi_idle},
            {"pi_TX", a.pi_tx, s.pi_tx, s.se_pi_tx},
            {"pi_RB", a.pi_rb, s.pi_rb, s.se_pi_rb},
            {"T_RB", a.t_rb, s.t_rb, s.se_t_rb},
            {"T_RXP", a.t_rxp, s.t_rxp, s.se_t_rxp},
            {"p_IF", a.p_if, s.p_if, s.se_p_if},
            {"G", a.goodput, s.goodput, s.se_goodput},
            {"p_OF", a.p_of, s.df_fit_p_of, 0.0}};
}

double relative_error(double analytic, double simulated) {
    return std::abs(analytic - simulated) /
           std::max(std::abs(analytic), 1e-6);
}

void write_comparison_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "p_tx,metric,analytic,simulated,stderr,rel_error,status\n";
    for (const auto& r : rows) {
        if (!r.ok) {
            os << fmt(r.p_tx) << ",,,,,," << '"' << r.status << '"' << '\n';
            continue;
        }
        for (const auto& c : compare_row(r)) {
            os << fmt(r.p_tx) << ',' << c.metric << ',' << fmt(c.analytic)
               << ',' << fmt(c.simulated) << ',' << fmt(c.stderr_) << ','
               << fmt(relative_error(c.analytic, c.simulated)) << ",ok\n";
        }
    }
}

void write_sweep_json(std::ostream& os, const std::vector<SweepRow>& rows,
                      const std::string& mode) {
    os << "[\n";
    bool first = true;
    for (const auto& r : rows) {
        if (!first) os << ",\n";
        first = false;
        os << "  {\"p_tx\": " << fmt(r.p_tx) << ", \"status\": \""
           << (r.ok ? "ok" : r.status) << "\"";
        if (r.has_ana) {
            const auto& m = r.ana;
            os << ", \"analytic\": {\"p_OF\": " << fmt(m.p_of)
               << ", \"pi_I\": " << fmt(m.pi_idle)
               << ", \"pi_TX\": " << fmt(m.pi_tx)
               << ", \"pi_RB\": " << fmt(m.pi_rb)
               << ", \"T_I\": " << fmt(m.t_idle)
               << ", \"T_RB\": " << fmt(m.t_rb)
               << ", \"T_RXB\": " << fmt(m.t_rxb)
               << ", \"T_RXP\": " << fmt(m.t_rxp)
               << ", \"T_TXP\": " << fmt(m.t_txp)
               << ", \"p_IF\": " << fmt(m.p_if)
               << ", \"G\": " << fmt(m.goodput)
               << ", \"degenerate\": " << (m.degenerate ? "true" : "false")
               << "}";
        }
        if (r.has_sim) {
            const auto& s = r.sim;
            os << ", \"simulated\": {\"p_OF_fit\": " << fmt(s.df_fit_p_of)
               << ", \"pi_I\": " << fmt(s.pi_idle)
               << ", \"pi_TX\": " << fmt(s.pi_tx)
               << ", \"pi_RB\": " << fmt(s.pi_rb)
               << ", \"T_I\": " << fmt(s.t_idle)
               << ", \"T_RB\": " << fmt(s.t_rb)
               << ", \"T_RXB\": " << fmt(s.t_rxb)
               << ", \"T_RXP\": " << fmt(s.t_rxp)
               << ", \"T_TXP\": " << fmt(s.t_txp)
               << ", \"p_IF\": " << fmt(s.p_if)
               << ", \"G\": " << fmt(s.goodput)
               << ", \"seed\": " << s.seed << "}";
        }
        os << "}";
    }
    os << "\n]\n";
    (void)mode;
}

int run_sweep(const SweepArgs& a) {
    std::vector<double> pts = a.range.values();
    check_ptx_values(pts);

    std::vector<SweepRow> rows(pts.size());
    int jobs = a.jobs > 0
                   ? a.jobs
                   : static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(pts.size())));
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= pts.size()) return;
            rows[i] = sweep_point(a, pts[i], static_cast<int>(i));
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!a.out.empty()) {
        file = open_out(a.out);
        os = &file;
    }
    if (a.format == "json") {
        write_sweep_json(*os, rows, a.mode);
    } else if (a.mode == "both") {
        write_comparison_csv(*os, rows);
    } else {
        write_wide_csv(*os, rows, a.mode == "simulate");
    }
    for (const auto& r : rows) {
        if (!r.ok)
            std::cerr << "csmahs: p_tx=" << fmt(r.p_tx) << " failed: "
                      << r.status << "\n";
    }
    return kExitOk;
}

// ------------------------------------------------------------- simulate ----

struct SimArgs {
    int n = 800, L = 32, R = 16;
    double p_tx = 0.1;
    int64_t warmup = 50'000, slots = 500'000;
    std::optional<uint64_t> seed;
    std::string out, hist_dtx, hist_df;
    bool check = false;
};

int run_simulate(const SimArgs& a) {
    csmahs_sim_config cfg{};
    cfg.stations = a.n;
    cfg.frame_slots = a.L;
    cfg.neighbors = a.R;
    cfg.p_tx = a.p_tx;
    cfg.warmup_slots = a.warmup;
    cfg.measure_slots = a.slots;
    cfg.seed = a.seed ? *a.seed : entropy_seed();
    cfg.check_with_scan = a.check ? 1 : 0;

    SimOwner sim;
    if (int rc = csmahs_simulate(&cfg, &sim.r)) die(rc, "simulate");
    csmahs_sim_summary s{};
    csmahs_sim_report_summary(sim.r, &s);

    std::cout << "seed=" << s.seed << " (mt19937_64)\n"
              << "pi_I=" << fmt(s.pi_idle) << " pi_TX=" << fmt(s.pi_tx)
              << " pi_RB=" << fmt(s.pi_rb) << "\n"
              << "T_I=" << fmt(s.t_idle) << " T_RB=" << fmt(s.t_rb)
              << " T_RXB=" << fmt(s.t_rxb) << " T_RXP=" << fmt(s.t_rxp)
              << " T_TXP=" << fmt(s.t_txp) << "\n"
              << "p_IF=" << fmt(s.p_if) << " p_ConRX=" << fmt(s.p_con_rx)
              << " G=" << fmt(s.goodput) << " p_OF_fit="
              << fmt(s.df_fit_p_of) << "\n"
              << "bursts=" << s.bursts << " ring_wide_idle_slots="
              << s.ring_wide_idle_slots << "\n";

    if (!a.out.empty()) {
        char* json = nullptr;
        if (int rc = csmahs_sim_report_json(sim.r, &json))
            die(rc, "serializing report");
        open_out(a.out) << json << "\n";
        csmahs_string_free(json);
    }
    int k_max = std::min(a.n, 8 * (2 * a.R + 2));
    if (!a.hist_dtx.empty())
        write_hist_csv(a.hist_dtx, sim.r, 0, k_max, s.dtx_samples);
    if (!a.hist_df.empty())
        write_hist_csv(a.hist_df, sim.r, 1, k_max, s.df_samples);
    return kExitOk;
}

// ------------------------------------------------------------- validate ----

struct ValidateArgs {
    int L = 32;
    std::vector<int> neighbors = {8, 16};
    std::vector<double> p_tx = {0.01, 0.05, 0.1, 0.2, 0.34};
    int n = 800;
    int64_t warmup = 50'000, slots = 500'000;
    int seeds = 5;
    uint64_t seed_base = 0xC50A0001ULL;
    double rel_tol = 0.05;
    double abs_floor = 0.005;
    double tv_bound = 0.02;
    double alpha = 0.05;
    std::string out;
    bool quick = false;
};

int run_validate(const ValidateArgs& a0) {
    ValidateArgs a = a0;
    if (a.quick) {
        a.p_tx = {0.05, 0.1};
        a.neighbors = {8};
        a.warmup = 5'000;
        a.slots = 50'000;
        a.seeds = 2;
    }
    int failures = 0;
    std::ostringstream report;
    report << "[\n";
    bool first_entry = true;

    for (int R : a.neighbors) {
        for (double p_tx : a.p_tx) {
            ModelOwner model;
            if (int rc = csmahs_solve(p_tx, a.L, R, &model.m))
                die(rc, "solve");
            csmahs_metrics m{};
            csmahs_model_metrics(model.m, &m);

            // pool seeds: averages for rates, count-weighted for periods
            csmahs_sim_summary pool{};
            std::vector<double> dtx_emp;
            double trb_w = 0.0, trxp_w = 0.0;
            int64_t bursts = 0;
            int k_max = 6 * (2 * R + 2);
            dtx_emp.assign(k_max, 0.0);
            double df_fit_num = 0.0, df_fit_den = 0.0;
            double chi_stat = 0.0;
            int32_t chi_pass = 1, chi_dof = 0;
            for (int si = 0; si < a.seeds; ++si) {
                csmahs_sim_config cfg{};
                cfg.stations = a.n;
                cfg.frame_slots = a.L;
                cfg.neighbors = R;
                cfg.p_tx = p_tx;
                cfg.warmup_slots = a.warmup;
                cfg.measure_slots = a.slots;
                cfg.seed = a.seed_base + static_cast<uint64_t>(si);
                SimOwner sim;
                if (int rc = csmahs_simulate(&cfg, &sim.r)) die(rc, "simulate");
                csmahs_sim_summary s{};
                csmahs_sim_report_summary(sim.r, &s);
                pool.pi_idle += s.pi_idle / a.seeds;
                pool.pi_tx += s.pi_tx / a.seeds;
                pool.pi_rb += s.pi_rb / a.seeds;
                pool.p_if += s.p_if * s.bursts;
                pool.goodput += s.goodput / a.seeds;
                pool.t_rb += s.t_rb * s.bursts; // burst-weighted periods
                trb_w += s.bursts;
                pool.t_rxp += s.t_rxp * s.bursts;
                trxp_w += s.bursts;
                bursts += s.bursts;
                df_fit_num += 1.0; // harmonic pooling of the geometric MLE
                df_fit_den += 1.0 / s.df_fit_p_of;
                std::vector<double> pmf(k_max);
                csmahs_sim_report_pmf(sim.r, 0, k_max, pmf.data());
                for (int k = 0; k < k_max; ++k)
                    dtx_emp[k] += pmf[k] / a.seeds;
                double stat = 0.0;
                int32_t dof = 0, pass = 0;
                csmahs_sim_df_chi_square(sim.r, m.p_of, a.alpha, &stat, &dof,
                                         &pass);
                if (si == 0) {
                    chi_stat = stat;
                    chi_dof = dof;
                }
                chi_pass &= pass;
            }
            pool.p_if /= bursts > 0 ? bursts : 1;
            pool.t_rb /= trb_w > 0 ? trb_w : 1;
            pool.t_rxp /= trxp_w > 0 ? trxp_w : 1;
            double df_fit = df_fit_num > 0 ? df_fit_num / df_fit_den : 0.0;

            auto check = [&](const char* metric, double analytic,
                             double simulated) {
                double err = std::abs(analytic - simulated);
                bool ok = err <= a.abs_floor ||
                          err <= a.rel_tol * std::abs(analytic);
                if (!ok) ++failures;
                std::cout << (ok ? "PASS" : "FAIL") << " p_tx=" << fmt(p_tx)
                          << " R=" << R << " " << metric << ": analytic "
                          << fmt(analytic) << " simulated " << fmt(simulated)
                          << " (rel " << fmt(relative_error(analytic, simulated))
                          << ")\n";
                if (!first_entry) report << ",\n";
                first_entry = false;
                report << "  {\"p_tx\": " << fmt(p_tx) << ", \"R\": " << R
                       << ", \"metric\": \"" << metric << "\", \"analytic\": "
                       << fmt(analytic) << ", \"simulated\": "
                       << fmt(simulated) << ", \"pass\": "
                       << (ok ? "true" : "false") << "}";
            };
            check("pi_I", m.pi_idle, pool.pi_idle);
            check("pi_TX", m.pi_tx, pool.pi_tx);
            check("pi_RB", m.pi_rb, pool.pi_rb);
            check("T_RB", m.t_rb, pool.t_rb);
            check("T_RXP", m.t_rxp, pool.t_rxp);
            check("p_IF", m.p_if, pool.p_if);
            check("G", m.goodput, pool.goodput);

            std::vector<double> ana(k_max);
            csmahs_model_dtx_pmf(model.m, k_max, ana.data());
            double tv = 0.0;
            for (int k = 0; k < k_max; ++k)
                tv += std::abs(ana[k] - dtx_emp[k]);
            tv *= 0.5;
            bool tv_ok = tv <= a.tv_bound;
            if (!tv_ok) ++failures;
            std::cout << (tv_ok ? "PASS" : "FAIL") << " p_tx=" << fmt(p_tx)
                      << " R=" << R << " d_TX total variation " << fmt(tv)
                      << " (bound " << fmt(a.tv_bound) << ")\n";

            double fit_err = std::abs(df_fit - m.p_of) / m.p_of;
            bool fit_ok = fit_err <= a.rel_tol && chi_pass;
            if (!fit_ok) ++failures;
            std::cout << (fit_ok ? "PASS" : "FAIL") << " p_tx=" << fmt(p_tx)
                      << " R=" << R << " d_F geometric fit " << fmt(df_fit)
                      << " vs p_OF " << fmt(m.p_of) << " (chi2 stat "
                      << fmt(chi_stat) << ", dof " << chi_dof << ", "
                      << (chi_pass ? "fits" : "rejected") << ")\n";
        }
    }
    report << "\n]\n";
    if (!a.out.empty()) open_out(a.out) << report.str();
    std::cout << (failures == 0 ? "VALIDATION PASSED"
                                : "VALIDATION FAILED") << " ("
              << failures << " failing checks)\n";
    return failures == 0 ? kExitOk : kExitComparison;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state model and ring simulator for slotted CSMA "
                 "broadcast with hidden stations"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "solve the model at one point");
    solve->add_option("--p-tx", sa.p_tx, "conditional channel access probability")
        ->required();
    solve->add_option("--L", sa.L, "frame duration in slots");
    solve->add_option("--R", sa.R, "one-side neighbor count");
    solve->add_option("--slot-seconds", sa.slot_seconds, "slot duration [s]");
    solve->add_option("--frame-seconds", sa.frame_seconds, "frame duration [s]");
    solve->add_option("--range-m", sa.range_m, "sensing range [m]");
    solve->add_option("--density", sa.density, "stations per meter");
    solve->add_option("--out", sa.out, "write metrics JSON here");
    solve->add_option("--pmf-csv", sa.pmf_csv, "write k,f_dtx,f_df rows here");
    solve->add_option("--dump-time-chain", sa.dump_time,
                      "write the time-chain matrix (row col value)");
    solve->add_option("--dump-space-chain", sa.dump_space,
                      "write the space-chain matrix (row col value)");
    solve->add_flag("--oracle", sa.oracle,
                    "cross-check closed forms against the series oracle");

    SweepArgs wa;
    auto* sweep = app.add_subcommand("sweep", "solve/simulate across p_tx");
    sweep->add_option("--L", wa.L, "frame duration in slots");
    sweep->add_option("--R", wa.R, "one-side neighbor count");
    sweep->add_option("--p-tx-list", wa.range.explicit_list,
                      "explicit p_tx values")
        ->delimiter(',');
    sweep->add_option("--p-tx-min", wa.range.lo, "range start");
    sweep->add_option("--p-tx-max", wa.range.hi, "range end");
    sweep->add_option("--points", wa.range.points, "range point count");
    sweep->add_flag("--log", wa.range.log_spaced, "log-spaced range");
    sweep->add_option("--mode", wa.mode, "analytic | simulate | both")
        ->check(CLI::IsMember({"analytic", "simulate", "both"}));
    sweep->add_option("--out", wa.out, "output file (stdout when omitted)");
    sweep->add_option("--format", wa.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--seed-base", wa.seed_base, "seed for point i is base+i");
    sweep->add_option("--n", wa.stations, "ring size for simulate/both");
    sweep->add_option("--warmup", wa.warmup, "simulation warmup slots");
    sweep->add_option("--slots", wa.slots, "simulation measure slots");
    sweep->add_option("--jobs", wa.jobs, "worker threads (default: cores)");

    SimArgs ma;
    auto* sim = app.add_subcommand("simulate", "run one ring simulation");
    sim->add_option("--n", ma.n, "ring size (stations)");
    sim->add_option("--p-tx", ma.p_tx, "conditional channel access probability")
        ->required();
    sim->add_option("--L", ma.L, "frame duration in slots");
    sim->add_option("--R", ma.R, "one-side neighbor count");
    sim->add_option("--warmup", ma.warmup, "warmup slots");
    sim->add_option("--slots", ma.slots, "measure slots");
    uint64_t seed_in = 0;
    auto* seed_opt = sim->add_option("--seed", seed_in, "64-bit RNG seed");
    sim->add_option("--out", ma.out, "write the report JSON here");
    sim->add_option("--hist-dtx", ma.hist_dtx, "write d_TX pmf CSV here");
    sim->add_option("--hist-df", ma.hist_df, "write d_F pmf CSV here");
    sim->add_flag("--check", ma.check, "enable brute-force cross-checks");

    ValidateArgs va;
    auto* val = app.add_subcommand(
        "validate", "compare analytic and simulated metrics; exit 5 on failure");
    val->add_option("--L", va.L, "frame duration in slots");
    val->add_option("--R-list", va.neighbors, "neighbor counts")->delimiter(',');
    val->add_option("--p-tx-list", va.p_tx, "p_tx values")->delimiter(',');
    val->add_option("--n", va.n, "ring size");
    val->add_option("--warmup", va.warmup, "warmup slots");
    val->add_option("--slots", va.slots, "measure slots");
    val->add_option("--seeds", va.seeds, "seeds per point");
    val->add_option("--seed-base", va.seed_base, "first seed");
    val->add_option("--rel-tol", va.rel_tol, "relative tolerance");
    val->add_option("--abs-floor", va.abs_floor, "absolute tolerance floor");
    val->add_option("--tv-bound", va.tv_bound, "d_TX total-variation bound");
    val->add_option("--alpha", va.alpha, "chi-square significance");
    val->add_option("--out", va.out, "write the JSON report here");
    val->add_flag("--quick", va.quick, "small fast smoke configuration");

    app.footer("Any subcommand accepts --config FILE with flat key=value\n"
               "lines naming its long options, e.g. \"p-tx=0.1\".");
    std::vector<std::string> args = expand_config(argc, argv);
    std::vector<char*> argp;
    argp.reserve(args.size());
    for (auto& a : args) argp.push_back(a.data());
    try {
        app.parse(static_cast<int>(argp.size()), argp.data());
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve) return run_solve(sa);
        if (*sweep) return run_sweep(wa);
        if (*sim) {
            if (*seed_opt) ma.seed = seed_in;
            return run_simulate(ma);
        }
        if (*val) return run_validate(va);
    } catch (const std::exception& e) {
        std::cerr << "csmahs: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
