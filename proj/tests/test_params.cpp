#include <doctest.h>

#include "core/error.hpp"
#include "core/params.hpp"

using namespace csmahs;

namespace {

PhysicalConfig phys(double slot, double frame, double range, double dens) {
    PhysicalConfig c;
    c.slot_seconds = slot;
    c.frame_seconds = frame;
    c.sensing_range_m = range;
    c.stations_per_m = dens;
    return c;
}

} // namespace

TEST_CASE("frame slot derivation") {
    CHECK(derive_frame_slots(phys(2e-6, 64e-6, 1, 1)) == 32);
    CHECK(derive_frame_slots(phys(2e-6, 64.1e-6, 1, 1)) == 33);
    CHECK(derive_frame_slots(phys(13e-6, 13e-6, 1, 1)) == 1);
    CHECK_THROWS_AS(derive_frame_slots(phys(0.0, 1e-3, 1, 1)), Error);
    CHECK_THROWS_AS(derive_frame_slots(phys(1e-6, -1.0, 1, 1)), Error);
}

TEST_CASE("neighbor count derivation") {
    CHECK(derive_neighbor_count(phys(1, 1, 160.0, 0.1)) == 16);
    CHECK(derive_neighbor_count(phys(1, 1, 165.0, 0.1)) == 16);
    CHECK_THROWS_WITH_AS(derive_neighbor_count(phys(1, 1, 5.0, 0.1)),
                         doctest::Contains("degenerate"), Error);
}

TEST_CASE("frame slots monotone in durations") {
    double frames[] = {1e-6, 3.7e-6, 64e-6, 64.1e-6, 1e-3};
    double slots[] = {1e-7, 2e-6, 5e-6};
    for (double sl : slots) {
        int prev = 0;
        for (double fr : frames) {
            int L = derive_frame_slots(phys(sl, fr, 1, 1));
            CHECK(L >= prev);
            prev = L;
        }
    }
    // non-increasing in the slot length
    for (double fr : frames) {
        int prev = 1 << 30;
        for (double sl : slots) {
            int L = derive_frame_slots(phys(sl, fr, 1, 1));
            CHECK(L <= prev);
            prev = L;
        }
    }
}

TEST_CASE("neighbor count invariant under r*c, beta/c rescaling") {
    // powers of two keep the product bit-exact
    for (double c : {2.0, 4.0, 0.5, 64.0}) {
        for (double r : {160.0, 33.0, 12.5}) {
            for (double b : {0.1, 0.25, 1.0}) {
                CHECK(derive_neighbor_count(phys(1, 1, r, b)) ==
                      derive_neighbor_count(phys(1, 1, r * c, b / c)));
            }
        }
    }
}

TEST_CASE("parameter validation") {
    ModelParams ok{0.1, 32, 16};
    CHECK(validate(ok).p_tx == 0.1);

    ModelParams zero{0.0, 32, 16};
    CHECK_THROWS_WITH_AS(validate(zero), doctest::Contains("p_tx"), Error);
    ModelParams one{1.0, 32, 16};
    CHECK_THROWS_AS(validate(one), Error);
    ModelParams bad_l{0.1, 0, 16};
    CHECK_THROWS_WITH_AS(validate(bad_l), doctest::Contains("L"), Error);
    ModelParams bad_r{0.1, 32, 0};
    CHECK_THROWS_WITH_AS(validate(bad_r), doctest::Contains("R"), Error);
    // every violation named at once
    ModelParams all_bad{-2.0, 0, -1};
    try {
        validate(all_bad);
        CHECK(false);
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("p_tx") != std::string::npos);
        CHECK(msg.find("L") != std::string::npos);
        CHECK(msg.find("R") != std::string::npos);
    }
}
