#include "dynperm/perm_core.hpp"

#include <algorithm>
#include <string>

#include "dynperm/errors.hpp"

namespace dynperm {

namespace {

std::uint64_t pairs_in(std::size_t size) {
    return static_cast<std::uint64_t>(size) * (size - 1);
}

void check_element(Element v, std::size_t n) {
    if (v >= n) {
        throw ElementOutOfRange("element " + std::to_string(v + 1) + " outside [1, " +
                                std::to_string(n) + "]");
    }
}

}  // namespace

CyclePermutation CyclePermutation::identity(std::size_t n) {
    if (n == 0) throw InvalidSize("identity permutation needs n >= 1");
    CyclePermutation p;
    p.succ_.resize(n);
    p.cycle_id_.resize(n);
    p.cycles_.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
        const auto e = static_cast<Element>(v);
        p.succ_[v] = e;
        const CycleLabel label = p.fresh_label();
        p.cycle_id_[v] = label;
        p.cycles_.emplace(label, CycleInfo{1, e});
    }
    return p;
}

CyclePermutation CyclePermutation::from_successors(std::vector<Element> succ) {
    const std::size_t n = succ.size();
    if (n == 0) throw InvalidSize("permutation needs n >= 1");
    std::vector<bool> hit(n, false);
    for (Element s : succ) {
        if (s >= n || hit[s]) throw ConsistencyError("successor array is not a bijection");
        hit[s] = true;
    }
    CyclePermutation p;
    p.succ_ = std::move(succ);
    p.cycle_id_.assign(n, 0);
    std::vector<bool> seen(n, false);
    for (std::size_t v = 0; v < n; ++v) {
        if (seen[v]) continue;
        const CycleLabel label = p.fresh_label();
        std::size_t size = 0;
        Element w = static_cast<Element>(v);
        do {
            seen[w] = true;
            p.cycle_id_[w] = label;
            ++size;
            w = p.succ_[w];
        } while (w != v);
        p.cycles_.emplace(label, CycleInfo{size, static_cast<Element>(v)});
        p.same_cycle_pairs_ += pairs_in(size);
    }
    return p;
}

const CycleInfo& CyclePermutation::cycle(CycleLabel label) const {
    auto it = cycles_.find(label);
    if (it == cycles_.end()) {
        throw ConsistencyError("cycle label " + std::to_string(label) + " is not live");
    }
    return it->second;
}

double CyclePermutation::same_cycle_pair_fraction() const noexcept {
    const std::size_t n = size();
    if (n < 2) return 1.0;
    return static_cast<double>(same_cycle_pairs_) / static_cast<double>(pairs_in(n));
}

void CyclePermutation::relabel_cycle_from(Element start, CycleLabel label) {
    Element w = start;
    do {
        cycle_id_[w] = label;
        w = succ_[w];
    } while (w != start);
}

TranspositionEffect CyclePermutation::apply_transposition(Element a, Element b) {
    const std::size_t n = size();
    check_element(a, n);
    check_element(b, n);
    if (a == b) throw InvalidTransposition("transposition needs two distinct elements");

    const CycleLabel ca = cycle_id_[a];
    const CycleLabel cb = cycle_id_[b];

    if (ca != cb) {
        CycleInfo& info_a = cycles_.at(ca);
        CycleInfo& info_b = cycles_.at(cb);
        const std::size_t sa = info_a.size;
        const std::size_t sb = info_b.size;
        const bool a_survives = sa >= sb;
        const CycleLabel survivor = a_survives ? ca : cb;
        const CycleLabel absorbed = a_survives ? cb : ca;
        // Relabel the smaller cycle while it is still closed.
        relabel_cycle_from(a_survives ? b : a, survivor);
        std::swap(succ_[a], succ_[b]);

        same_cycle_pairs_ += pairs_in(sa + sb) - pairs_in(sa) - pairs_in(sb);
        (a_survives ? info_a : info_b).size = sa + sb;
        cycles_.erase(absorbed);
        return {Merged{ca, cb, survivor, sa + sb}, a, b};
    }

    std::swap(succ_[a], succ_[b]);
    // a now closes a cycle through the old arc b -> ... -> a, and b through
    // a -> ... -> b. Walk both until the shorter one returns to its start.
    Element x = succ_[a];
    Element y = succ_[b];
    std::size_t steps = 1;
    bool a_is_small = false;
    while (true) {
        if (x == a) {
            a_is_small = true;
            break;
        }
        if (y == b) break;
        x = succ_[x];
        y = succ_[y];
        ++steps;
    }

    CycleInfo& old_info = cycles_.at(ca);
    const std::size_t old_size = old_info.size;
    const std::size_t small_size = steps;
    const std::size_t large_size = old_size - small_size;
    const Element small_start = a_is_small ? a : b;
    const Element large_start = a_is_small ? b : a;

    const CycleLabel fresh = fresh_label();
    relabel_cycle_from(small_start, fresh);
    old_info.size = large_size;
    if (cycle_id_[old_info.rep] != ca) old_info.rep = large_start;
    cycles_.emplace(fresh, CycleInfo{small_size, small_start});

    same_cycle_pairs_ += pairs_in(small_size) + pairs_in(large_size);
    same_cycle_pairs_ -= pairs_in(old_size);
    ++split_count_;

    Split split{ca, {}, {}};
    if (a_is_small) {
        split.frag_a = {fresh, small_size};
        split.frag_b = {ca, large_size};
    } else {
        split.frag_a = {ca, large_size};
        split.frag_b = {fresh, small_size};
    }
    return {split, a, b};
}

bool CyclePermutation::check_invariants() const {
    const std::size_t n = size();
    if (cycle_id_.size() != n) return false;
    std::vector<bool> hit(n, false);
    for (Element s : succ_) {
        if (s >= n || hit[s]) return false;
        hit[s] = true;
    }
    std::size_t total = 0;
    std::uint64_t pairs = 0;
    for (const auto& [label, info] : cycles_) {
        if (info.rep >= n || cycle_id_[info.rep] != label) return false;
        std::size_t steps = 0;
        Element w = info.rep;
        do {
            if (cycle_id_[w] != label) return false;
            w = succ_[w];
            if (++steps > n) return false;
        } while (w != info.rep);
        if (steps != info.size) return false;
        total += info.size;
        pairs += pairs_in(info.size);
    }
    return total == n && pairs == same_cycle_pairs_;
}

std::pair<Element, Element> sample_uniform_transposition(Rng& rng, std::size_t n) {
    if (n < 2) throw InvalidSize("a transposition needs n >= 2");
    const auto a = static_cast<Element>(uniform_index(rng, n));
    auto b = static_cast<Element>(uniform_index(rng, n - 1));
    if (b >= a) ++b;
    return {a, b};
}

std::pair<Element, Element> CrossCycleSampler::sample(Rng& rng, const CyclePermutation& perm) {
    if (perm.cycle_count() < 2) {
        throw ExhaustedDynamics("single cycle left: no cross-cycle transposition exists");
    }
    if (perm.same_cycle_pair_fraction() <= kSwitchFraction) {
        while (true) {
            auto [a, b] = sample_uniform_transposition(rng, perm.size());
            if (perm.cycle_of(a) != perm.cycle_of(b)) return {a, b};
        }
    }
    return sample_exact(rng, perm);
}

bool CrossCycleSampler::snapshot_is_usable(const CyclePermutation& perm) const {
    if (!valid_ || n_ != perm.size() || snapshot_splits_ != perm.split_count()) return false;
    const std::uint64_t current = static_cast<std::uint64_t>(n_) * (n_ - 1) - perm.same_cycle_pairs();
    return 2 * current >= snapshot_weight_;
}

void CrossCycleSampler::rebuild(const CyclePermutation& perm) {
    n_ = perm.size();
    snapshot_splits_ = perm.split_count();
    grouped_.clear();
    grouped_.reserve(n_);
    block_begin_.clear();
    block_cumulative_.clear();
    block_of_.assign(n_, 0);

    std::uint64_t running = 0;
    for (const auto& [label, info] : perm.cycles()) {
        const auto block = static_cast<std::uint32_t>(block_begin_.size());
        block_begin_.push_back(grouped_.size());
        Element w = info.rep;
        do {
            grouped_.push_back(w);
            block_of_[w] = block;
            w = perm.successor(w);
        } while (w != info.rep);
        running += static_cast<std::uint64_t>(info.size) * (n_ - info.size);
        block_cumulative_.push_back(running);
    }
    block_begin_.push_back(grouped_.size());
    snapshot_weight_ = running;
    valid_ = true;
}

std::pair<Element, Element> CrossCycleSampler::sample_exact(Rng& rng, const CyclePermutation& perm) {
    if (!snapshot_is_usable(perm)) rebuild(perm);
    const std::size_t n = n_;

    // First element: proportional to n - |snapshot cycle|, thinned to the
    // current weight n - |cycle|.
    Element a = 0;
    std::size_t old_size = 0;
    std::size_t begin = 0;
    while (true) {
        const std::uint64_t r = uniform_index(rng, snapshot_weight_);
        const auto it = std::upper_bound(block_cumulative_.begin(), block_cumulative_.end(), r);
        const auto block = static_cast<std::size_t>(it - block_cumulative_.begin());
        begin = block_begin_[block];
        old_size = block_begin_[block + 1] - begin;
        a = grouped_[begin + uniform_index(rng, old_size)];
        const std::size_t now_outside = n - perm.cycle_size_of(a);
        if (uniform_index(rng, n - old_size) < now_outside) break;
    }

    // Second element: uniform outside a's snapshot cycle, rejected if it has
    // since merged into a's cycle.
    const CycleLabel ca = perm.cycle_of(a);
    constexpr int kMaxTries = 16;
    for (int attempt = 0; attempt < kMaxTries; ++attempt) {
        std::size_t j = uniform_index(rng, n - old_size);
        if (j >= begin) j += old_size;
        const Element b = grouped_[j];
        if (perm.cycle_of(b) != ca) return {a, b};
    }
    // a's cycle grew a lot since the snapshot: pick b by direct scan and
    // refresh the snapshot next time.
    valid_ = false;
    std::uint64_t k = uniform_index(rng, n - perm.cycle_size_of(a));
    for (std::size_t v = 0; v < n; ++v) {
        if (perm.cycle_of(static_cast<Element>(v)) == ca) continue;
        if (k-- == 0) return {a, static_cast<Element>(v)};
    }
    throw ConsistencyError("cross-cycle scan ran past the end of the permutation");
}

std::pair<Element, Element> sample_cross_cycle_transposition(Rng& rng, const CyclePermutation& perm) {
    CrossCycleSampler sampler;
    return sampler.sample(rng, perm);
}

std::pair<CycleLabel, std::size_t> largest_cycle(const CyclePermutation& perm) {
    CycleLabel best = 0;
    CycleInfo best_info{0, 0};
    for (const auto& [label, info] : perm.cycles()) {
        if (info.size > best_info.size || (info.size == best_info.size && info.rep < best_info.rep)) {
            best = label;
            best_info = info;
        }
    }
    return {best, best_info.size};
}

}  // namespace dynperm
