#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "dynperm/rng.hpp"

using namespace dynperm;

TEST_CASE("mt19937_64 matches the standard's 10000th output") {
    std::mt19937_64 eng;  // default seed 5489
    eng.discard(9999);
    CHECK(eng() == 9981545732273789042ULL);
}

TEST_CASE("derive_seed matches an independent evaluation of the mixing formula") {
    // Values computed outside C++ from the SplitMix64 constants.
    CHECK(derive_seed(0, 0) == 17448420733077208847ULL);
    CHECK(derive_seed(42, 0) == 5043374705829640723ULL);
    CHECK(derive_seed(42, 1) == 9920616184565843241ULL);
    CHECK(derive_seed(~0ULL, 7) == 16480148423117337484ULL);
}

TEST_CASE("frozen stream prefix") {
    constexpr std::array<std::uint64_t, 8> expected{
        13932490963984468002ULL, 13420457411364381498ULL, 4677546421204989815ULL,
        12185941298227220934ULL, 12614887916923682343ULL, 16854227024123083677ULL,
        526174195944527277ULL,   14293756586459219056ULL};
    Rng rng = derive_rng_stream(42, 0);
    for (auto e : expected) CHECK(rng() == e);

    Rng q = derive_rng_stream(7, 3);
    const std::array<std::uint64_t, 8> idx{803, 582, 10, 190, 11, 105, 497, 475};
    for (auto e : idx) CHECK(uniform_index(q, 1000) == e);
}

TEST_CASE("streams are reproducible and distinct") {
    Rng a = derive_rng_stream(9, 0);
    Rng b = derive_rng_stream(9, 0);
    Rng c = derive_rng_stream(9, 1);
    std::size_t equal = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a();
        CHECK(x == b());
        equal += x == c() ? 1 : 0;
    }
    CHECK(equal == 0);
}

TEST_CASE("uniform_index is uniform on a small range") {
    Rng rng = derive_rng_stream(1, 0);
    constexpr std::uint64_t k = 7;
    constexpr int draws = 70000;
    std::array<int, k> count{};
    for (int i = 0; i < draws; ++i) {
        const auto v = uniform_index(rng, k);
        REQUIRE(v < k);
        ++count[v];
    }
    double chi2 = 0.0;
    const double e = static_cast<double>(draws) / k;
    for (int c : count) chi2 += (c - e) * (c - e) / e;
    CHECK(chi2 < 22.46);  // chi-square(6) at 0.999
    CHECK(uniform_index(rng, 1) == 0);
}

TEST_CASE("uniform01 and fair_bit") {
    Rng rng = derive_rng_stream(2, 0);
    double sum = 0.0;
    int ones = 0;
    constexpr int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const double u = uniform01(rng);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        ones += fair_bit(rng) ? 1 : 0;
    }
    // 5 standard deviations.
    CHECK(std::abs(sum / draws - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / draws));
    CHECK(std::abs(ones / static_cast<double>(draws) - 0.5) < 5.0 * 0.5 / std::sqrt(draws));
}
