#ifndef DYNPERM_PERM_CORE_HPP
#define DYNPERM_PERM_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "dynperm/rng.hpp"

namespace dynperm {

// Elements are 0-indexed in memory. Anything user-facing (CSV, CLI) adds 1.
using Element = std::uint32_t;
using CycleLabel = std::uint64_t;

struct CycleInfo {
    std::size_t size = 0;
    Element rep = 0;
};

struct Merged {
    CycleLabel left_cycle = 0;   // cycle of a before the move
    CycleLabel right_cycle = 0;  // cycle of b before the move
    CycleLabel new_cycle = 0;    // surviving label, one of the two above
    std::size_t new_size = 0;
};

struct Fragment {
    CycleLabel label = 0;
    std::size_t size = 0;
};

struct Split {
    CycleLabel old_cycle = 0;
    Fragment frag_a;  // fragment holding a
    Fragment frag_b;  // fragment holding b
};

struct TranspositionEffect {
    std::variant<Merged, Split> kind;
    Element a = 0;
    Element b = 0;

    bool merged() const noexcept { return std::holds_alternative<Merged>(kind); }
    const Merged& as_merged() const { return std::get<Merged>(kind); }
    const Split& as_split() const { return std::get<Split>(kind); }
};

/// Permutation of {0, ..., n-1} stored as a successor array plus a registry
/// of its cycles.
///
/// Right-multiplying by a transposition (a, b) swaps succ[a] and succ[b]. If a
/// and b share a cycle it splits into the two arcs delimited by a and b,
/// otherwise the two cycles are joined. Merges relabel the smaller cycle;
/// splits locate the smaller arc by walking both arcs in lockstep and relabel
/// only that arc, so a split costs O(min fragment).
class CyclePermutation {
public:
    using Registry = std::unordered_map<CycleLabel, CycleInfo>;

    static CyclePermutation identity(std::size_t n);

    // Builds the registry for an arbitrary successor array. Throws
    // ConsistencyError if `succ` is not a bijection.
    static CyclePermutation from_successors(std::vector<Element> succ);

    std::size_t size() const noexcept { return succ_.size(); }
    Element successor(Element v) const { return succ_.at(v); }
    std::span<const Element> successors() const noexcept { return succ_; }

    CycleLabel cycle_of(Element v) const { return cycle_id_.at(v); }
    bool has_cycle(CycleLabel label) const { return cycles_.contains(label); }
    const CycleInfo& cycle(CycleLabel label) const;
    std::size_t cycle_size_of(Element v) const { return cycle(cycle_of(v)).size; }
    std::size_t cycle_count() const noexcept { return cycles_.size(); }
    const Registry& cycles() const noexcept { return cycles_; }

    // Sum over cycles of |C|(|C|-1): the number of ordered same-cycle pairs.
    std::uint64_t same_cycle_pairs() const noexcept { return same_cycle_pairs_; }
    // Probability that a uniform transposition falls inside one cycle.
    double same_cycle_pair_fraction() const noexcept;
    // Number of splits applied so far.
    std::uint64_t split_count() const noexcept { return split_count_; }

    TranspositionEffect apply_transposition(Element a, Element b);

    // Full O(n) audit of the bijection and registry invariants.
    bool check_invariants() const;

    friend bool operator==(const CyclePermutation& x, const CyclePermutation& y) {
        return x.succ_ == y.succ_;
    }

private:
    CyclePermutation() = default;

    CycleLabel fresh_label() noexcept { return next_label_++; }
    void relabel_cycle_from(Element start, CycleLabel label);

    std::vector<Element> succ_;
    std::vector<CycleLabel> cycle_id_;
    Registry cycles_;
    CycleLabel next_label_ = 0;
    std::uint64_t same_cycle_pairs_ = 0;
    std::uint64_t split_count_ = 0;
};

// Uniform over the n(n-1)/2 transpositions. Requires n >= 2.
std::pair<Element, Element> sample_uniform_transposition(Rng& rng, std::size_t n);

/// Uniform sampler over transpositions whose two elements lie in different
/// cycles.
///
/// While at most 90% of all pairs are same-cycle pairs it rejects uniform
/// transpositions. Past that point it switches to an exact two-stage draw:
/// a with weight n - |cycle(a)|, then b uniform outside cycle(a). The weights
/// come from a snapshot of the cycle structure which is corrected by
/// rejection; this is exact as long as cycles have only merged since the
/// snapshot, so any split forces a rebuild, as does the acceptance rate
/// dropping below one half.
///
/// One instance should follow one permutation through its evolution.
class CrossCycleSampler {
public:
    std::pair<Element, Element> sample(Rng& rng, const CyclePermutation& perm);

    static constexpr double kSwitchFraction = 0.9;

private:
    std::pair<Element, Element> sample_exact(Rng& rng, const CyclePermutation& perm);
    void rebuild(const CyclePermutation& perm);
    bool snapshot_is_usable(const CyclePermutation& perm) const;

    std::size_t n_ = 0;
    std::uint64_t snapshot_splits_ = 0;
    std::uint64_t snapshot_weight_ = 0;  // ordered cross pairs at snapshot time
    bool valid_ = false;
    std::vector<Element> grouped_;             // elements, grouped by snapshot cycle
    std::vector<std::size_t> block_begin_;     // per block, offset into grouped_
    std::vector<std::uint64_t> block_cumulative_;  // prefix sums of block weights
    std::vector<std::uint32_t> block_of_;      // element -> snapshot block
};

// Uniform over cross-cycle transpositions. Throws ExhaustedDynamics when only
// one cycle is left. Stateless convenience wrapper around CrossCycleSampler.
std::pair<Element, Element> sample_cross_cycle_transposition(Rng& rng, const CyclePermutation& perm);

// Largest cycle; ties go to the cycle with the lowest representative.
std::pair<CycleLabel, std::size_t> largest_cycle(const CyclePermutation& perm);

}  // namespace dynperm

#endif  // DYNPERM_PERM_CORE_HPP
