#include <doctest.h>

#include <cmath>
#include <cstring>

#include "core/error.hpp"
#include "core/solver.hpp"

using namespace csmahs;

TEST_CASE("residual is small-step continuous") {
    ModelParams p{0.2, 16, 8};
    for (double x : {0.002, 0.05, 0.3, 0.7, 0.97}) {
        double a = fixed_point_residual(p, x);
        double b = fixed_point_residual(p, x + 1e-6);
        CHECK(std::abs(a - b) < 1e-3);
    }
}

TEST_CASE("reference fixed points") {
    SolveResult a = solve_p_of({0.1, 32, 16});
    CHECK(std::abs(a.p_of - 0.0996) <= 5e-4);
    CHECK(std::abs(a.diagnostics.residual) <= 1e-10);

    SolveResult b = solve_p_of({0.34, 32, 16});
    CHECK(std::abs(b.p_of - 0.0116) <= 5e-4);
    CHECK(std::abs(b.diagnostics.residual) <= 1e-10);
}

TEST_CASE("a root exists across the studied range") {
    for (int R : {8, 16}) {
        for (double p_tx : {0.001, 0.01, 0.1, 0.34, 0.6, 0.9}) {
            SolveResult r = solve_p_of({p_tx, 32, R});
            CHECK(r.diagnostics.sign_changes >= 1);
            CHECK(r.p_of > 0.0);
            CHECK(r.p_of < 1.0);
        }
    }
}

TEST_CASE("nearly idle channel leaves huge free areas") {
    SolveResult r = solve_p_of({1e-6, 32, 16});
    CHECK(r.p_of < 1e-3);
}

TEST_CASE("solved model invariants") {
    SolvedModel m = solve_model({0.1, 32, 16});
    CHECK(std::abs(m.time_stationary.pi_idle -
                   m.space_stationary.pi_free) <= 1e-10);
    CHECK(m.time_stationary.residual < 1e-10);
    CHECK(m.space_stationary.residual < 1e-10);
}

TEST_CASE("repeated solves are bitwise identical") {
    SolvedModel a = solve_model({0.34, 32, 16});
    SolvedModel b = solve_model({0.34, 32, 16});
    CHECK(std::memcmp(&a.p_of, &b.p_of, sizeof(double)) == 0);
    CHECK(a.time_stationary.pi.size() == b.time_stationary.pi.size());
    CHECK(std::memcmp(a.time_stationary.pi.data(), b.time_stationary.pi.data(),
                      a.time_stationary.pi.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(b.space_stationary.pi.data(),
                      a.space_stationary.pi.data(),
                      a.space_stationary.pi.size() * sizeof(double)) == 0);
}

TEST_CASE("solution stability away from the synchronization point") {
    SolveResult a = solve_p_of({0.1, 32, 16});
    SolveResult b = solve_p_of({0.1 + 1e-9, 32, 16});
    CHECK(std::abs(a.p_of - b.p_of) < 1e-5);
}

TEST_CASE("tolerance validation") {
    CHECK_THROWS_AS(solve_p_of({0.1, 32, 16}, 1e-15), Error);
    CHECK_THROWS_AS(solve_p_of({1.5, 32, 16}), Error);
}
