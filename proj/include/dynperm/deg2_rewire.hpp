#ifndef DYNPERM_DEG2_REWIRE_HPP
#define DYNPERM_DEG2_REWIRE_HPP

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "dynperm/perm_core.hpp"
#include "dynperm/rng.hpp"

namespace dynperm {

using EdgeId = std::uint32_t;
using HalfEdge = std::uint32_t;

struct Preserved {
    CycleLabel label = 0;
};

struct RewireEffect {
    std::variant<Merged, Split, Preserved> kind;
    EdgeId e1 = 0;
    EdgeId e2 = 0;
    int pairing = 0;  // 0: (1A,2A)(1B,2B), 1: (1A,2B)(1B,2A)
    std::pair<Element, Element> ends1;  // endpoints of e1 before the rewire
    std::pair<Element, Element> ends2;

    bool merged() const noexcept { return std::holds_alternative<Merged>(kind); }
    bool split() const noexcept { return std::holds_alternative<Split>(kind); }
    bool preserved() const noexcept { return std::holds_alternative<Preserved>(kind); }
};

/// 2-regular multigraph on {0, ..., n-1} with n edges; every component is a
/// cycle (a self-loop is a 1-cycle, a double edge a 2-cycle).
///
/// Edge e owns half-edges 2e (side A) and 2e + 1 (side B); each vertex holds
/// two half-edge slots. A rewire of e1, e2 swaps the vertices that one
/// half-edge of e1 and one of e2 are attached to. Same-component rewires are
/// resolved by lockstep walks, so a split costs O(smaller fragment) and a
/// preserve costs O(shorter arc between the two edges).
class Deg2Graph {
public:
    // n self-loops. Throws InvalidSize for n < 2.
    static Deg2Graph init_self_loops(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return n_; }
    std::pair<Element, Element> endpoints(EdgeId e) const;
    std::pair<Element, Element> neighbors(Element v) const;

    CycleLabel component_of(Element v) const { return label_.at(v); }
    bool has_cycle(CycleLabel label) const { return registry_.contains(label); }
    const CycleInfo& cycle(CycleLabel label) const;
    std::size_t component_count() const noexcept { return registry_.size(); }
    const std::unordered_map<CycleLabel, CycleInfo>& components() const noexcept { return registry_; }

    RewireEffect rewire(EdgeId e1, EdgeId e2, int pairing);
    // Two distinct uniform edges and a fair choice of pairing.
    RewireEffect rewire_step(Rng& rng);

    // Degree, half-edge and registry audit, O(n).
    bool check_invariants() const;

private:
    Deg2Graph() = default;

    HalfEdge other_at_vertex(HalfEdge h) const { return slot_[pos_[h] ^ 1U]; }
    HalfEdge next(HalfEdge h) const { return other_at_vertex(h ^ 1U); }
    void swap_attachments(HalfEdge x, HalfEdge y);
    void relabel_orbit(HalfEdge start, CycleLabel label);

    std::size_t n_ = 0;
    std::vector<Element> end_;    // half-edge -> vertex
    std::vector<HalfEdge> slot_;  // 2v + s -> half-edge in slot s of v
    std::vector<std::uint32_t> pos_;  // half-edge -> its slot index
    std::vector<CycleLabel> label_;   // vertex -> component label
    std::unordered_map<CycleLabel, CycleInfo> registry_;
    CycleLabel next_label_ = 0;
};

class ComponentForest;

// Adds the associated-graph edge of a rewire: one uniform endpoint of each of
// the two edges. Equal endpoints only advance the forest's clock.
void feed_forest(ComponentForest& forest, const RewireEffect& effect, Rng& rng);

struct Deg2Sample {
    std::uint64_t t = 0;
    double tv = 0.0;
    double cmax_frac = 0.0;
    bool dropped = false;
};

// Rewiring run from self-loops with an infinite-speed walk from v0 and the
// associated forest (fed one uniform endpoint of each rewired edge; equal
// endpoints only advance its clock). Records every `record_every` steps and
// at t = 0.
std::vector<Deg2Sample> isrw_profile_deg2(std::size_t n, std::uint64_t t_max, Element v0, Rng& rng,
                                          double eps_n, std::uint64_t record_every = 1);

}  // namespace dynperm

#endif  // DYNPERM_DEG2_REWIRE_HPP
