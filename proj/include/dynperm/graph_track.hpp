#ifndef DYNPERM_GRAPH_TRACK_HPP
#define DYNPERM_GRAPH_TRACK_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "dynperm/perm_core.hpp"
#include "dynperm/rng.hpp"
#include "dynperm/walks.hpp"

namespace dynperm {

struct AddEdgeResult {
    bool merged = false;
    Element largest_root = 0;
    std::size_t largest_size = 0;
};

/// Union-find over {0, ..., n-1} that also tracks the edge count, the largest
/// and second-largest component sizes, and sum |C|(|C|-1).
///
/// Union by size (equal sizes: the lower index becomes the root), path halving.
/// The largest component is the one of maximal size with the lowest root.
class ComponentForest {
public:
    explicit ComponentForest(std::size_t n);

    std::size_t size() const noexcept { return parent_.size(); }
    Element find(Element v) const;
    bool connected(Element a, Element b) const { return find(a) == find(b); }
    std::size_t component_size(Element v) const { return size_[find(v)]; }

    // Adds edge {a, b}. Edges inside a component and repeated edges count as
    // time steps. Throws InvalidTransposition for a == b, ElementOutOfRange.
    AddEdgeResult add_edge(Element a, Element b);
    // Counts a time step without adding an edge.
    void advance_clock() noexcept { ++edges_; }

    std::uint64_t edges_added() const noexcept { return edges_; }
    Element largest_root() const noexcept { return largest_root_; }
    std::size_t largest_size() const noexcept { return size_[largest_root_]; }
    std::size_t second_size() const noexcept;
    std::size_t component_count() const noexcept { return components_; }
    bool in_largest(Element v) const { return find(v) == largest_root_; }

    // Sum over components of |C|(|C|-1).
    std::uint64_t same_component_pairs() const noexcept { return same_pairs_; }
    // Chance that a uniform non-loop edge falls inside one component.
    double p_rejection() const noexcept;

    // O(n) recount of (largest root, largest size, second size).
    struct Recount {
        Element largest_root;
        std::size_t largest_size;
        std::size_t second_size;
    };
    Recount recount() const;

private:
    void histogram_remove(std::size_t s);

    mutable std::vector<Element> parent_;
    std::vector<std::size_t> size_;
    std::map<std::size_t, std::size_t> size_count_;  // component size -> multiplicity
    std::uint64_t edges_ = 0;
    std::uint64_t same_pairs_ = 0;
    std::size_t components_ = 0;
    Element largest_root_ = 0;
};

inline double p_rejection(const ComponentForest& forest) { return forest.p_rejection(); }

// Drop-down condition at the forest's current time t: t > n(1 + eps_n)/2 and
// some occupied cycle lies in the largest component. Cycles are tested through
// their representatives.
// `cycles` is anything with cycle(label) -> CycleInfo.
template <class CycleStructure>
bool dropdown_check(const MassProfile& mass, const CycleStructure& cycles,
                    const ComponentForest& forest, double eps_n) {
    const double n = static_cast<double>(forest.size());
    if (!(static_cast<double>(forest.edges_added()) > n * (1.0 + eps_n) / 2.0)) return false;
    const Element giant = forest.largest_root();
    for (const auto& [label, m] : mass.masses()) {
        if (forest.find(cycles.cycle(label).rep) == giant) return true;
    }
    return false;
}

// Standard graph process together with its cycle-free version: a proposed edge
// is accepted into the cycle-free forest iff its endpoints lie in different
// components. tau counts accepted edges.
class CoupledCycleFreeState {
public:
    explicit CoupledCycleFreeState(std::size_t n, bool keep_accepted_edges = false);

    // Feeds one proposed edge. Returns true if it was accepted.
    bool propose(Element a, Element b);

    const ComponentForest& standard() const noexcept { return standard_; }
    const ComponentForest& cycle_free() const noexcept { return cycle_free_; }
    std::uint64_t time() const noexcept { return standard_.edges_added(); }
    std::uint64_t tau() const noexcept { return tau_; }
    const std::vector<std::pair<Element, Element>>& accepted_edges() const noexcept {
        return accepted_;
    }

private:
    ComponentForest standard_;
    ComponentForest cycle_free_;
    std::uint64_t tau_ = 0;
    bool keep_;
    std::vector<std::pair<Element, Element>> accepted_;
};

struct CoupledSample {
    std::uint64_t t = 0;
    std::uint64_t tau = 0;
    std::size_t cmax = 0;
    std::size_t csec = 0;
    double p_reject = 0.0;
};

// Runs t_max uniform edge proposals on n vertices and records the state after
// every `record_every`-th step (and after the last one).
std::vector<CoupledSample> run_coupled_cycle_free(Rng& rng, std::size_t n, std::uint64_t t_max,
                                                  std::uint64_t record_every = 1);

// Cycle-free process where only accepted edges advance the clock. For each s
// in `grid` returns |C_max|/n once round(s n) edges have been accepted.
// Throws ElementOutOfRange for s outside [0, 1).
std::vector<double> cycle_free_largest_trajectory(Rng& rng, std::size_t n,
                                                  const std::vector<double>& grid);

}  // namespace dynperm

#endif  // DYNPERM_GRAPH_TRACK_HPP
