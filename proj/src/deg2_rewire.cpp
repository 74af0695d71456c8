#include "dynperm/deg2_rewire.hpp"

#include <string>

#include "dynperm/errors.hpp"
#include "dynperm/graph_track.hpp"
#include "dynperm/walks.hpp"

namespace dynperm {

Deg2Graph Deg2Graph::init_self_loops(std::size_t n) {
    if (n < 2) throw InvalidSize("degree-two graph needs n >= 2");
    Deg2Graph g;
    g.n_ = n;
    g.end_.resize(2 * n);
    g.slot_.resize(2 * n);
    g.pos_.resize(2 * n);
    g.label_.resize(n);
    g.registry_.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::uint32_t s = 0; s < 2; ++s) {
            const auto h = static_cast<HalfEdge>(2 * v + s);
            g.end_[h] = static_cast<Element>(v);
            g.slot_[h] = h;
            g.pos_[h] = h;
        }
        const CycleLabel label = g.next_label_++;
        g.label_[v] = label;
        g.registry_.emplace(label, CycleInfo{1, static_cast<Element>(v)});
    }
    return g;
}

std::pair<Element, Element> Deg2Graph::endpoints(EdgeId e) const {
    if (e >= n_) throw ElementOutOfRange("edge " + std::to_string(e) + " out of range");
    return {end_[2 * e], end_[2 * e + 1]};
}

std::pair<Element, Element> Deg2Graph::neighbors(Element v) const {
    if (v >= n_) throw ElementOutOfRange("vertex " + std::to_string(v + 1) + " out of range");
    return {end_[slot_[2 * v] ^ 1U], end_[slot_[2 * v + 1] ^ 1U]};
}

const CycleInfo& Deg2Graph::cycle(CycleLabel label) const {
    auto it = registry_.find(label);
    if (it == registry_.end()) throw ConsistencyError("component label is not live");
    return it->second;
}

void Deg2Graph::swap_attachments(HalfEdge x, HalfEdge y) {
    const std::uint32_t px = pos_[x];
    const std::uint32_t py = pos_[y];
    slot_[px] = y;
    slot_[py] = x;
    pos_[x] = py;
    pos_[y] = px;
    std::swap(end_[x], end_[y]);
}

void Deg2Graph::relabel_orbit(HalfEdge start, CycleLabel label) {
    HalfEdge h = start;
    do {
        label_[end_[h]] = label;
        h = next(h);
    } while (h != start);
}

RewireEffect Deg2Graph::rewire(EdgeId e1, EdgeId e2, int pairing) {
    if (e1 >= n_ || e2 >= n_) throw ElementOutOfRange("edge out of range");
    if (e1 == e2) throw InvalidTransposition("rewiring needs two distinct edges");
    const HalfEdge x = 2 * e1 + 1;
    const HalfEdge y = pairing == 0 ? 2 * e2 : 2 * e2 + 1;
    const CycleLabel c1 = label_[end_[2 * e1]];
    const CycleLabel c2 = label_[end_[2 * e2]];

    RewireEffect effect;
    effect.e1 = e1;
    effect.e2 = e2;
    effect.pairing = pairing;
    effect.ends1 = {end_[2 * e1], end_[2 * e1 + 1]};
    effect.ends2 = {end_[2 * e2], end_[2 * e2 + 1]};

    if (c1 != c2) {
        CycleInfo& i1 = registry_.at(c1);
        CycleInfo& i2 = registry_.at(c2);
        const std::size_t s1 = i1.size;
        const std::size_t s2 = i2.size;
        const bool keep_first = s1 >= s2;
        const CycleLabel survivor = keep_first ? c1 : c2;
        const CycleLabel absorbed = keep_first ? c2 : c1;
        relabel_orbit(keep_first ? 2 * e2 : 2 * e1, survivor);
        swap_attachments(x, y);
        (keep_first ? i1 : i2).size = s1 + s2;
        registry_.erase(absorbed);
        effect.kind = Merged{c1, c2, survivor, s1 + s2};
        return effect;
    }

    swap_attachments(x, y);
    // Walk forward and backward from e1 and forward from e2. Meeting the other
    // edge means one component; a walk closing on itself first means a split.
    const HalfEdge f1 = 2 * e1;
    const HalfEdge b1 = 2 * e1 + 1;
    const HalfEdge f2 = 2 * e2;
    HalfEdge w1 = f1;
    HalfEdge w3 = b1;
    HalfEdge w2 = f2;
    std::size_t steps = 0;
    bool same = false;
    bool e1_closed = false;
    while (true) {
        ++steps;
        w1 = next(w1);
        w3 = next(w3);
        w2 = next(w2);
        if ((w1 >> 1U) == e2 || (w3 >> 1U) == e2 || (w2 >> 1U) == e1) {
            same = true;
            break;
        }
        if (w1 == f1 || w3 == b1) {
            e1_closed = true;
            break;
        }
        if (w2 == f2) break;
    }
    if (same) {
        effect.kind = Preserved{c1};
        return effect;
    }

    CycleInfo& old_info = registry_.at(c1);
    const std::size_t old_size = old_info.size;
    const std::size_t small_size = steps;
    const std::size_t large_size = old_size - small_size;
    const CycleLabel fresh = next_label_++;
    const HalfEdge small_start = e1_closed ? f1 : f2;
    const Element large_vertex = end_[e1_closed ? f2 : f1];
    relabel_orbit(small_start, fresh);
    old_info.size = large_size;
    if (label_[old_info.rep] != c1) old_info.rep = large_vertex;
    registry_.emplace(fresh, CycleInfo{small_size, end_[small_start]});

    Split split{c1, {}, {}};
    if (e1_closed) {
        split.frag_a = {fresh, small_size};
        split.frag_b = {c1, large_size};
    } else {
        split.frag_a = {c1, large_size};
        split.frag_b = {fresh, small_size};
    }
    effect.kind = split;
    return effect;
}

RewireEffect Deg2Graph::rewire_step(Rng& rng) {
    const auto e1 = static_cast<EdgeId>(uniform_index(rng, n_));
    auto e2 = static_cast<EdgeId>(uniform_index(rng, n_ - 1));
    if (e2 >= e1) ++e2;
    const int pairing = fair_bit(rng) ? 1 : 0;
    return rewire(e1, e2, pairing);
}

bool Deg2Graph::check_invariants() const {
    if (end_.size() != 2 * n_ || slot_.size() != 2 * n_ || pos_.size() != 2 * n_) return false;
    std::vector<int> degree(n_, 0);
    for (HalfEdge h = 0; h < 2 * n_; ++h) {
        if (slot_[pos_[h]] != h) return false;
        if (end_[h] != pos_[h] / 2) return false;
        ++degree[end_[h]];
    }
    for (int d : degree) {
        if (d != 2) return false;
    }
    std::size_t total = 0;
    for (const auto& [label, info] : registry_) {
        if (info.rep >= n_ || label_[info.rep] != label) return false;
        const HalfEdge start = slot_[2 * info.rep];
        HalfEdge h = start;
        std::size_t steps = 0;
        do {
            if (label_[end_[h]] != label) return false;
            h = next(h);
            if (++steps > n_) return false;
        } while (h != start);
        if (steps != info.size) return false;
        total += steps;
    }
    return total == n_;
}

void feed_forest(ComponentForest& forest, const RewireEffect& effect, Rng& rng) {
    const Element a = fair_bit(rng) ? effect.ends1.second : effect.ends1.first;
    const Element b = fair_bit(rng) ? effect.ends2.second : effect.ends2.first;
    if (a == b) {
        forest.advance_clock();
    } else {
        forest.add_edge(a, b);
    }
}

std::vector<Deg2Sample> isrw_profile_deg2(std::size_t n, std::uint64_t t_max, Element v0, Rng& rng,
                                          double eps_n, std::uint64_t record_every) {
    Deg2Graph g = Deg2Graph::init_self_loops(n);
    if (v0 >= n) throw ElementOutOfRange("start vertex out of range");
    if (record_every == 0) record_every = 1;
    MassProfile mass = MassProfile::on_cycle(g.component_of(v0), v0);
    ComponentForest forest(n);
    const double dn = static_cast<double>(n);
    bool dropped = false;
    std::vector<Deg2Sample> out;
    out.push_back({0, tv_to_uniform(mass, g), 1.0 / dn, false});
    for (std::uint64_t t = 1; t <= t_max; ++t) {
        const RewireEffect eff = g.rewire_step(rng);
        if (eff.merged()) {
            mass.apply(std::get<Merged>(eff.kind));
        } else if (eff.split()) {
            mass.apply(std::get<Split>(eff.kind));
        }
        feed_forest(forest, eff, rng);
        if (!dropped) dropped = dropdown_check(mass, g, forest, eps_n);
        if (t % record_every == 0 || t == t_max) {
            out.push_back({t, tv_to_uniform(mass, g), static_cast<double>(forest.largest_size()) / dn,
                           dropped});
        }
    }
    return out;
}

}  // namespace dynperm
