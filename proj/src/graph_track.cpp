#include "dynperm/graph_track.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynperm/errors.hpp"

namespace dynperm {

namespace {

std::uint64_t pairs_in(std::size_t s) { return static_cast<std::uint64_t>(s) * (s - 1); }

}  // namespace

ComponentForest::ComponentForest(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    if (n == 0) throw InvalidSize("forest needs n >= 1");
    for (std::size_t v = 0; v < n; ++v) parent_[v] = static_cast<Element>(v);
    size_count_[1] = n;
}

Element ComponentForest::find(Element v) const {
    if (v >= parent_.size()) throw ElementOutOfRange("vertex " + std::to_string(v + 1) + " out of range");
    while (parent_[v] != v) {
        parent_[v] = parent_[parent_[v]];
        v = parent_[v];
    }
    return v;
}

void ComponentForest::histogram_remove(std::size_t s) {
    auto it = size_count_.find(s);
    if (--it->second == 0) size_count_.erase(it);
}

AddEdgeResult ComponentForest::add_edge(Element a, Element b) {
    if (a == b) throw InvalidTransposition("self-loops are not allowed");
    Element ra = find(a);
    Element rb = find(b);
    ++edges_;
    if (ra == rb) return {false, largest_root_, size_[largest_root_]};

    if (size_[ra] < size_[rb] || (size_[ra] == size_[rb] && rb < ra)) std::swap(ra, rb);
    const std::size_t sa = size_[ra];
    const std::size_t sb = size_[rb];
    parent_[rb] = ra;
    size_[ra] = sa + sb;
    --components_;
    same_pairs_ += pairs_in(sa + sb) - pairs_in(sa) - pairs_in(sb);
    histogram_remove(sa);
    histogram_remove(sb);
    ++size_count_[sa + sb];

    const std::size_t best = size_[largest_root_];
    if (largest_root_ == rb || largest_root_ == ra) {
        largest_root_ = ra;
    } else if (sa + sb > best || (sa + sb == best && ra < largest_root_)) {
        largest_root_ = ra;
    }
    return {true, largest_root_, size_[largest_root_]};
}

std::size_t ComponentForest::second_size() const noexcept {
    auto it = size_count_.rbegin();
    if (it->second >= 2) return it->first;
    ++it;
    return it == size_count_.rend() ? 0 : it->first;
}

double ComponentForest::p_rejection() const noexcept {
    const std::size_t n = size();
    if (n < 2) return 1.0;
    return static_cast<double>(same_pairs_) / static_cast<double>(pairs_in(n));
}

ComponentForest::Recount ComponentForest::recount() const {
    const std::size_t n = size();
    std::vector<std::size_t> sizes(n, 0);
    for (std::size_t v = 0; v < n; ++v) ++sizes[find(static_cast<Element>(v))];
    Recount r{0, 0, 0};
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t s = sizes[v];
        if (s == 0) continue;
        if (s > r.largest_size) {
            r.second_size = r.largest_size;
            r.largest_size = s;
            r.largest_root = static_cast<Element>(v);
        } else if (s > r.second_size) {
            r.second_size = s;
        }
    }
    return r;
}

CoupledCycleFreeState::CoupledCycleFreeState(std::size_t n, bool keep_accepted_edges)
    : standard_(n), cycle_free_(n), keep_(keep_accepted_edges) {}

bool CoupledCycleFreeState::propose(Element a, Element b) {
    const bool accept = !standard_.connected(a, b);
    standard_.add_edge(a, b);
    if (accept) {
        cycle_free_.add_edge(a, b);
        ++tau_;
        if (keep_) accepted_.emplace_back(a, b);
    }
    return accept;
}

std::vector<CoupledSample> run_coupled_cycle_free(Rng& rng, std::size_t n, std::uint64_t t_max,
                                                  std::uint64_t record_every) {
    if (n < 2) throw InvalidSize("coupled process needs n >= 2");
    if (record_every == 0) record_every = 1;
    CoupledCycleFreeState state(n);
    std::vector<CoupledSample> out;
    out.reserve(static_cast<std::size_t>(t_max / record_every + 1));
    for (std::uint64_t t = 1; t <= t_max; ++t) {
        const auto [a, b] = sample_uniform_transposition(rng, n);
        state.propose(a, b);
        if (t % record_every == 0 || t == t_max) {
            const auto& g = state.standard();
            out.push_back({t, state.tau(), g.largest_size(), g.second_size(), g.p_rejection()});
        }
    }
    return out;
}

std::vector<double> cycle_free_largest_trajectory(Rng& rng, std::size_t n,
                                                  const std::vector<double>& grid) {
    if (n < 2) throw InvalidSize("cycle-free process needs n >= 2");
    std::vector<std::pair<std::uint64_t, std::size_t>> targets;
    targets.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid[i];
        if (!(s >= 0.0 && s < 1.0)) {
            throw ElementOutOfRange("scaled accepted-edge time must lie in [0, 1)");
        }
        const auto tau = static_cast<std::uint64_t>(std::llround(s * static_cast<double>(n)));
        targets.emplace_back(std::min<std::uint64_t>(tau, n - 1), i);
    }
    std::sort(targets.begin(), targets.end());

    std::vector<double> out(grid.size(), 0.0);
    ComponentForest forest(n);
    std::uint64_t accepted = 0;
    const double dn = static_cast<double>(n);
    for (const auto& [tau, idx] : targets) {
        while (accepted < tau) {
            const auto [a, b] = sample_uniform_transposition(rng, n);
            if (forest.connected(a, b)) continue;
            forest.add_edge(a, b);
            ++accepted;
        }
        out[idx] = static_cast<double>(forest.largest_size()) / dn;
    }
    return out;
}

}  // namespace dynperm
