#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "core/stats.hpp"

using namespace csmahs;

TEST_CASE("total variation") {
    CHECK(total_variation({0.5, 0.5}, {0.5, 0.5}) == 0.0);
    CHECK(total_variation({1.0, 0.0}, {0.0, 1.0}) == 1.0);
    CHECK(total_variation({0.6, 0.4}, {0.5, 0.5}) ==
          doctest::Approx(0.1).epsilon(1e-14));
    // padding with zeros
    CHECK(total_variation({1.0}, {0.5, 0.5}) ==
          doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("geometric MLE") {
    std::vector<int64_t> hist(10, 0);
    hist[2] = 5; // five runs of length 2
    CHECK(geometric_mle(hist) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(geometric_mle(std::vector<int64_t>(4, 0)) == 0.0);
}

TEST_CASE("chi-square accepts geometric data and rejects shifted data") {
    std::mt19937_64 rng(5);
    auto uni = [&] { return (rng() >> 11) * 0x1.0p-53; };
    const double p = 0.12;
    std::vector<int64_t> hist(400, 0);
    for (int i = 0; i < 20'000; ++i) {
        int k = 1 + static_cast<int>(std::log(1.0 - uni()) /
                                     std::log(1.0 - p));
        if (k < static_cast<int>(hist.size())) hist[k]++;
    }
    ChiSquareResult good = chi_square_geometric(hist, p, 0.05);
    CHECK(good.pass);
    CHECK(good.dof > 3);
    CHECK(good.samples <= kChiSquareSampleCap);

    ChiSquareResult wrong = chi_square_geometric(hist, p * 1.6, 0.05);
    CHECK_FALSE(wrong.pass);

    SUBCASE("tiny samples give a vacuous pass") {
        std::vector<int64_t> few(8, 0);
        few[1] = 3;
        ChiSquareResult r = chi_square_geometric(few, 0.3, 0.05);
        CHECK(r.pass);
        CHECK(r.dof == 0);
    }
}
