#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dynperm/errors.hpp"
#include "dynperm/walks.hpp"
#include "oracles.hpp"

using namespace dynperm;

namespace {

std::vector<Element> succ_of(const CyclePermutation& p) {
    return {p.successors().begin(), p.successors().end()};
}

std::vector<Element> pred_of(const std::vector<Element>& succ) {
    std::vector<Element> pred(succ.size());
    for (std::size_t v = 0; v < succ.size(); ++v) pred[succ[v]] = static_cast<Element>(v);
    return pred;
}

}  // namespace

TEST_CASE("per-cycle profile equals element-level iteration") {
    for (std::size_t n : {2, 7, 20, 50}) {
        Rng rng = derive_rng_stream(21, n);
        auto p = CyclePermutation::identity(n);
        const auto v0 = static_cast<Element>(uniform_index(rng, n));
        MassProfile mass = MassProfile::init(p, v0);
        std::vector<double> mu(n, 0.0);
        mu[v0] = 1.0;
        const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
        for (int t = 0; t < 1000; ++t) {
            const auto [a, b] = sample_uniform_transposition(rng, n);
            mass.update_on_effect(p.apply_transposition(a, b), p);
            mu = oracle::isrw_step(mu, succ_of(p));
            const auto expanded = mass.expand(p);
            double worst = 0.0;
            std::size_t positive = 0;
            for (std::size_t v = 0; v < n; ++v) {
                worst = std::max(worst, std::abs(expanded[v] - mu[v]));
                positive += mu[v] > 0.0 ? 1 : 0;
            }
            REQUIRE(worst <= 1e-10);
            REQUIRE(std::abs(mass.total() - 1.0) <= 1e-12);
            REQUIRE(std::abs(tv_to_uniform(mass, p) - oracle::tv(mu, uniform)) <= 1e-10);
            REQUIRE(support_size(mass, p) == positive);
        }
    }
}

TEST_CASE("cdp total variation is non-increasing") {
    const std::size_t n = 500;
    Rng rng = derive_rng_stream(22, 0);
    auto p = CyclePermutation::identity(n);
    CrossCycleSampler sampler;
    MassProfile mass = MassProfile::init(p, 17);
    double prev = tv_to_uniform(mass, p);
    CHECK(prev == doctest::Approx(1.0 - 1.0 / n).epsilon(1e-15));
    for (std::size_t t = 1; t < n; ++t) {
        const auto [a, b] = sampler.sample(rng, p);
        mass.update_on_effect(p.apply_transposition(a, b), p);
        const double tv = tv_to_uniform(mass, p);
        REQUIRE(tv <= prev + 1e-12);
        prev = tv;
    }
    CHECK(prev <= 1e-12);
}

TEST_CASE("local total variation against explicit evaluation") {
    const std::size_t n = 40;
    Rng rng = derive_rng_stream(23, 0);
    auto p = CyclePermutation::identity(n);
    MassProfile mass = MassProfile::init(p, 3);
    for (int t = 0; t < 60; ++t) {
        const auto [a, b] = sample_uniform_transposition(rng, n);
        mass.update_on_effect(p.apply_transposition(a, b), p);
    }
    // Component: the cycles holding elements with even representative.
    std::vector<bool> in(n, false);
    std::size_t M = 0;
    for (const auto& [label, info] : p.cycles()) {
        if (info.rep % 2 == 0) {
            Element w = info.rep;
            do {
                in[w] = true;
                ++M;
                w = p.successor(w);
            } while (w != info.rep);
        }
    }
    REQUIRE(M > 0);
    const auto mu = mass.expand(p);
    std::vector<double> target(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) target[v] = in[v] ? 1.0 / static_cast<double>(M) : 0.0;
    const double direct = oracle::tv(mu, target);
    const double fast = tv_to_uniform_on_component(mass, p, [&](Element v) { return in[v]; }, M);
    CHECK(fast == doctest::Approx(direct).epsilon(1e-12));
    CHECK_THROWS_AS(tv_to_uniform_on_component(mass, p, [](Element) { return true; }, 0),
                    std::invalid_argument);
}

TEST_CASE("worst-case local bound") {
    for (double eps : {0.01, 0.1, 0.25, 0.5, 0.9}) {
        for (double M : {1.0, 10.0, 1e3, 1e6}) {
            CHECK(worst_case_local_tv(M, 0.0, eps) == eps - eps * eps);
        }
    }
    // Direct l1 evaluation of the worst-case measure at M = 100, delta = 1,
    // eps = 0.1: eps^2 M + delta = 2 elements carrying eps each, the remaining
    // 99 elements share 1 - 2 eps, against the uniform law on 101 elements.
    const double M = 100.0;
    const double delta = 1.0;
    const double eps = 0.1;
    std::vector<double> mu;
    for (int i = 0; i < 2; ++i) mu.push_back(eps);
    for (int i = 0; i < 99; ++i) mu.push_back((1.0 - 2 * eps) / 99.0);
    const std::vector<double> uniform(101, 1.0 / 101.0);
    CHECK(std::abs(oracle::tv(mu, uniform) - worst_case_local_tv(M, delta, eps)) <= 1e-12);

    CHECK_THROWS_AS(worst_case_local_tv(100, 0, 0.0), DomainError);
    CHECK_THROWS_AS(worst_case_local_tv(100, 0, 1.0), DomainError);
    CHECK_THROWS_AS(worst_case_local_tv(0.5, 0, 0.1), DomainError);
    CHECK_THROWS_AS(worst_case_local_tv(100, -1, 0.1), DomainError);
    CHECK_THROWS_AS(worst_case_local_tv(100, 20, 0.1), DomainError);
}

TEST_CASE("mass update rejects effects that do not match") {
    auto p = CyclePermutation::identity(6);
    auto q = CyclePermutation::identity(6);
    MassProfile mass = MassProfile::init(p, 0);
    const auto eff = p.apply_transposition(0, 1);
    CHECK_THROWS_AS(mass.update_on_effect(eff, q), ConsistencyError);
    CHECK_THROWS_AS(MassProfile::init(p, 6), ElementOutOfRange);
}

TEST_CASE("walk kernel on a fixed permutation") {
    // (0 1 2 3 4)(5 6)(7)
    const std::vector<Element> succ{1, 2, 3, 4, 0, 6, 5, 7};
    const auto pred = pred_of(succ);
    std::vector<double> d(8, 0.0);
    d[0] = 1.0;
    const auto one = walk_distribution_step(d, succ, pred);
    CHECK(one[1] == 0.5);
    CHECK(one[4] == 0.5);
    // Odd cycle: aperiodic, converges to uniform on the cycle.
    auto x = d;
    for (int k = 0; k < 400; ++k) x = walk_distribution_step(x, succ, pred);
    for (int v = 0; v < 5; ++v) CHECK(x[v] == doctest::Approx(0.2).epsilon(1e-9));
    // 2-cycle and fixed point.
    std::vector<double> y(8, 0.0);
    y[5] = 1.0;
    y = walk_distribution_step(y, succ, pred);
    CHECK(y[6] == 1.0);
    y = walk_distribution_step(y, succ, pred);
    CHECK(y[5] == 1.0);
    std::vector<double> z(8, 0.0);
    z[7] = 1.0;
    CHECK(walk_distribution_step(z, succ, pred)[7] == 1.0);
    // Lazy kernel smooths the 2-cycle.
    for (int k = 0; k < 60; ++k) y = walk_distribution_step(y, succ, pred, WalkKernel::Lazy);
    CHECK(y[5] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sampled walker follows the exact law") {
    const std::vector<Element> succ{1, 2, 3, 4, 5, 6, 0, 8, 7, 9};
    const auto pred = pred_of(succ);
    Rng rng = derive_rng_stream(24, 0);
    constexpr int runs = 40000;
    constexpr int steps = 5;
    std::vector<double> freq(succ.size(), 0.0);
    for (int r = 0; r < runs; ++r) {
        FiniteSpeedWalker w(0, 1);
        for (int k = 0; k < steps; ++k) w.step(rng, succ, pred);
        freq[w.position()] += 1.0 / runs;
    }
    std::vector<double> exact(succ.size(), 0.0);
    exact[0] = 1.0;
    for (int k = 0; k < steps; ++k) exact = walk_distribution_step(exact, succ, pred);
    CHECK(oracle::tv(freq, exact) < 0.015);
    CHECK_THROWS_AS(FiniteSpeedWalker(0, 0), std::invalid_argument);
}

TEST_CASE("finite speed against infinite speed") {
    Rng rng = derive_rng_stream(25, 0);
    const std::size_t n = 16;
    const auto traj = make_cfdp_trajectory(rng, n, 10);
    REQUIRE(traj.moves.size() == 10);
    const auto lazy = compare_finite_vs_infinite(traj, 2, 10 * n * n, WalkKernel::Lazy);
    REQUIRE(lazy.size() == 10);
    for (double tv : lazy) CHECK(tv < 1e-3);

    // The last comparison is the finite-speed law from finite_speed_run.
    const auto dist = finite_speed_run(traj, 2, 10 * n * n, WalkKernel::Lazy);
    double total = 0.0;
    for (double p : dist) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(finite_speed_run(PermTrajectory{traj.start, {}}, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(finite_speed_run(traj, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(finite_speed_run(traj, 16, 1), ElementOutOfRange);
}
