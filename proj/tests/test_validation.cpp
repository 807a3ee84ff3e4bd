#include <doctest.h>

#include "core/validation.hpp"

using namespace csmahs;

TEST_CASE("identity suite passes on a reduced grid") {
    IdentityGrid grid;
    grid.p_tx = {0.1, 0.6};
    grid.p_of = {0.05, 0.4};
    grid.frame_slots = {2, 8};
    grid.neighbors = {2, 8};
    SuiteReport rep = run_identity_suite(grid);
    for (const auto& c : rep.checks) {
        INFO(c.name, ": ", c.value, " vs ", c.bound, " ", c.detail);
        CHECK(c.passed);
    }
    CHECK(rep.all_passed());
    CHECK(!to_json_string(rep).empty());
}

TEST_CASE("anchor suite") {
    SuiteReport rep = run_paper_anchor_suite();
    for (const auto& c : rep.checks) {
        INFO(c.name, ": ", c.value, " vs ", c.bound, " ", c.detail);
        CHECK(c.passed);
    }
}

TEST_CASE("pooled simulation accumulates") {
    SimConfig cfg;
    cfg.stations = 64;
    cfg.frame_slots = 8;
    cfg.neighbors = 4;
    cfg.p_tx = 0.1;
    cfg.warmup_slots = 500;
    cfg.measure_slots = 4'000;
    SimReport one = run_simulation([&] {
        SimConfig c = cfg;
        c.seed = 100;
        return c;
    }());
    SimReport pool = pooled_simulation(cfg, 3, 100);
    CHECK(pool.bursts_completed > one.bursts_completed);
    CHECK(pool.dtx_samples >= one.dtx_samples);
    // occupancy stays a probability
    CHECK(pool.pi_idle >= 0.0);
    CHECK(pool.pi_idle <= 1.0);
    double mass = 0.0;
    for (double x : pool.dtx_pmf_empirical(cfg.stations)) mass += x;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sim-vs-analytic harness flags discrepancies") {
    // quick profile; wide tolerances make the machinery itself the subject
    ToleranceProfile prof;
    prof.rel_tol = 0.6;
    prof.abs_floor = 0.05;
    prof.tv_bound = 0.25;
    prof.seeds = 1;
    prof.stations = 120;
    prof.warmup_slots = 2'000;
    prof.measure_slots = 20'000;
    prof.p_tx_points = {0.1};
    prof.neighbor_points = {8};
    SuiteReport rep = run_sim_vs_analytic_suite(prof);
    CHECK(rep.checks.size() == 10);
    for (const auto& c : rep.checks) {
        INFO(c.name, ": ", c.value, " ", c.detail);
        CHECK(c.passed);
    }

    // zero tolerance must fail with the metric named
    prof.rel_tol = 0.0;
    prof.abs_floor = 0.0;
    prof.tv_bound = 0.0;
    SuiteReport strict = run_sim_vs_analytic_suite(prof);
    CHECK_FALSE(strict.all_passed());
    bool named = false;
    for (const auto& c : strict.checks) {
        if (!c.passed && c.name.find("pi_idle") != std::string::npos)
            named = true;
    }
    CHECK(named);
}
