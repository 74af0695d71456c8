#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dynperm/deg2_rewire.hpp"
#include "dynperm/errors.hpp"
#include "dynperm/graph_track.hpp"
#include "dynperm/walks.hpp"
#include "oracles.hpp"

using namespace dynperm;

namespace {

std::vector<std::pair<Element, Element>> edge_list(const Deg2Graph& g) {
    std::vector<std::pair<Element, Element>> out;
    for (EdgeId e = 0; e < g.edge_count(); ++e) out.push_back(g.endpoints(e));
    return out;
}

}  // namespace

TEST_CASE("two self-loops") {
    auto g = Deg2Graph::init_self_loops(2);
    CHECK(g.component_count() == 2);
    CHECK(g.neighbors(0) == std::pair<Element, Element>{0, 0});
    auto eff = g.rewire(0, 1, 0);
    CHECK(eff.merged());
    CHECK(g.component_count() == 1);
    CHECK(g.cycle(g.component_of(0)).size == 2);
    CHECK(g.check_invariants());
    // Double edge between 0 and 1.
    CHECK(g.neighbors(0) == std::pair<Element, Element>{1, 1});
    CHECK_THROWS_AS(Deg2Graph::init_self_loops(1), InvalidSize);
    CHECK_THROWS_AS(g.rewire(0, 0, 0), InvalidTransposition);
    CHECK_THROWS_AS(g.rewire(0, 2, 0), ElementOutOfRange);
    CHECK_THROWS_AS(g.endpoints(2), ElementOutOfRange);
}

TEST_CASE("components stay cycles and match BFS") {
    for (std::size_t n : {2, 3, 8, 40}) {
        Rng rng = derive_rng_stream(61, n);
        auto g = Deg2Graph::init_self_loops(n);
        for (int t = 0; t < 1500; ++t) {
            const auto before = oracle::bfs_components(n, edge_list(g));
            const auto eff = g.rewire_step(rng);
            REQUIRE(eff.e1 != eff.e2);
            const bool same = before[eff.ends1.first] == before[eff.ends2.first];
            REQUIRE(eff.merged() == !same);
            const auto after = oracle::bfs_components(n, edge_list(g));
            if (eff.split()) {
                const Split& s = std::get<Split>(eff.kind);
                const auto old_size = static_cast<std::size_t>(
                    std::count(before.begin(), before.end(), before[eff.ends1.first]));
                REQUIRE(s.frag_a.size + s.frag_b.size == old_size);
                REQUIRE(g.has_cycle(s.frag_a.label));
                REQUIRE(g.has_cycle(s.frag_b.label));
                REQUIRE(g.cycle(s.frag_a.label).size == s.frag_a.size);
                REQUIRE(g.cycle(s.frag_b.label).size == s.frag_b.size);
            }
            if (eff.preserved()) {
                REQUIRE(oracle::component_sizes(after) == oracle::component_sizes(before));
            }
            REQUIRE(g.check_invariants());
            // Registry partition equals the BFS partition.
            for (Element v = 0; v < n; ++v) {
                for (Element w = v + 1; w < n; ++w) {
                    REQUIRE((g.component_of(v) == g.component_of(w)) == (after[v] == after[w]));
                }
            }
            const auto sizes = oracle::component_sizes(after);
            REQUIRE(g.component_count() == sizes.size());
        }
    }
}

TEST_CASE("same-component rewires split half the time") {
    const std::size_t n = 300;
    Rng rng = derive_rng_stream(62, 0);
    auto g = Deg2Graph::init_self_loops(n);
    std::size_t same = 0;
    std::size_t splits = 0;
    for (int t = 0; t < 60000; ++t) {
        const auto eff = g.rewire_step(rng);
        if (eff.merged()) continue;
        ++same;
        splits += eff.split() ? 1 : 0;
    }
    REQUIRE(same > 10000);
    const double f = static_cast<double>(splits) / static_cast<double>(same);
    CHECK(std::abs(f - 0.5) < 5.0 * 0.5 / std::sqrt(static_cast<double>(same)));
}

TEST_CASE("per-component walk equals element-level iteration") {
    const std::size_t n = 30;
    Rng rng = derive_rng_stream(63, 0);
    auto g = Deg2Graph::init_self_loops(n);
    MassProfile mass = MassProfile::on_cycle(g.component_of(4), 4);
    std::vector<double> mu(n, 0.0);
    mu[4] = 1.0;
    for (int t = 0; t < 1000; ++t) {
        const auto eff = g.rewire_step(rng);
        if (eff.merged()) mass.apply(std::get<Merged>(eff.kind));
        if (eff.split()) mass.apply(std::get<Split>(eff.kind));
        const auto comp = oracle::bfs_components(n, edge_list(g));
        std::vector<double> sum(n, 0.0);
        std::vector<double> size(n, 0.0);
        for (Element v = 0; v < n; ++v) {
            sum[comp[v]] += mu[v];
            size[comp[v]] += 1.0;
        }
        for (Element v = 0; v < n; ++v) mu[v] = sum[comp[v]] / size[comp[v]];
        for (Element v = 0; v < n; ++v) {
            const CycleLabel c = g.component_of(v);
            REQUIRE(std::abs(mass.mass_of(c) / static_cast<double>(g.cycle(c).size) - mu[v]) < 1e-10);
        }
        const std::vector<double> uniform(n, 1.0 / n);
        REQUIRE(std::abs(tv_to_uniform(mass, g) - oracle::tv(mu, uniform)) < 1e-10);
    }
}

TEST_CASE("forest feed uses one endpoint of each edge") {
    Rng rng = derive_rng_stream(64, 0);
    auto g = Deg2Graph::init_self_loops(10);
    ComponentForest f(10);
    for (int t = 1; t <= 30; ++t) {
        const auto eff = g.rewire_step(rng);
        const auto before = f.edges_added();
        const std::size_t comps = f.component_count();
        feed_forest(f, eff, rng);
        REQUIRE(f.edges_added() == before + 1);
        REQUIRE(f.component_count() + 1 >= comps);
    }
    // Self-loop edges: both endpoints equal, so ends1 and ends2 are two distinct
    // vertices in the first step from self-loops.
    auto h = Deg2Graph::init_self_loops(4);
    ComponentForest f2(4);
    const auto eff = h.rewire(0, 1, 1);
    feed_forest(f2, eff, rng);
    CHECK(f2.connected(0, 1));
}

TEST_CASE("profile run") {
    Rng rng = derive_rng_stream(65, 0);
    const std::size_t n = 500;
    const auto rows = isrw_profile_deg2(n, 3 * n, 7, rng, std::pow(n, -0.25), 50);
    REQUIRE(rows.size() == 31);
    CHECK(rows[0].t == 0);
    CHECK(rows[0].tv == doctest::Approx(1.0 - 1.0 / n));
    bool dropped = false;
    for (const auto& r : rows) {
        REQUIRE(r.tv >= 0.0);
        REQUIRE(r.tv <= 1.0);
        REQUIRE((!dropped || r.dropped));
        dropped = r.dropped;
    }
    CHECK(rows.back().tv < 0.5);
    CHECK_THROWS_AS(isrw_profile_deg2(n, 10, static_cast<Element>(n), rng, 0.1), ElementOutOfRange);
}
