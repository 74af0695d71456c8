#include "dynperm/partition_chain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "dynperm/errors.hpp"

namespace dynperm {

namespace {

struct Hit {
    std::size_t block;
    double offset;  // distance from the block's left end
};

// Locates x in blocks laid out back to back in the given order.
Hit locate_in(const std::vector<double>& lengths, const std::vector<std::size_t>& order, double x) {
    double start = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double len = lengths[order[k]];
        if (x < start + len || k + 1 == order.size()) {
            return {order[k], std::clamp(x - start, 0.0, len)};
        }
        start += len;
    }
    throw ConsistencyError("locate on an empty partition");
}

ChainEvent apply_move(IntervalPartition& p, const Hit& h, const Hit& g, bool split_coin) {
    if (h.block != g.block) {
        p.merge_blocks(h.block, g.block);
        return ChainEvent::Merge;
    }
    if (!split_coin) return ChainEvent::Noop;
    const double len = p.blocks()[h.block];
    if (!(g.offset > 0.0 && g.offset < len)) return ChainEvent::Noop;
    p.split_block(h.block, g.offset);
    return ChainEvent::Split;
}

}  // namespace

IntervalPartition::IntervalPartition(std::vector<double> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw DomainError("partition needs at least one block");
    for (double b : blocks_) {
        if (!(b > 0.0)) throw DomainError("partition blocks must be positive");
    }
    resort();
    length_ = block_sum();
}

double IntervalPartition::block_sum() const {
    // Smallest first for accuracy.
    double s = 0.0;
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) s += *it;
    return s;
}

void IntervalPartition::resort() { std::sort(blocks_.begin(), blocks_.end(), std::greater<>()); }

std::size_t IntervalPartition::locate(double x) const {
    double start = 0.0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        start += blocks_[i];
        if (x < start) return i;
    }
    return blocks_.size() - 1;
}

void IntervalPartition::split_block(std::size_t i, double first_piece) {
    const double len = blocks_.at(i);
    if (!(first_piece > 0.0 && first_piece < len)) throw DomainError("split point outside the block");
    blocks_[i] = first_piece;
    blocks_.push_back(len - first_piece);
    resort();
}

void IntervalPartition::merge_blocks(std::size_t i, std::size_t j) {
    if (i == j) throw DomainError("cannot merge a block with itself");
    if (i > j) std::swap(i, j);
    blocks_.at(i) += blocks_.at(j);
    blocks_.erase(blocks_.begin() + static_cast<std::ptrdiff_t>(j));
    resort();
}

IntervalPartition sample_poidir(Rng& rng, double theta) {
    if (!(theta > 0.0)) throw DomainError("PoiDir needs theta > 0");
    std::vector<double> blocks;
    double rest = 1.0;
    const double inv = 1.0 / theta;
    while (rest >= 1e-12) {
        const double u = uniform01(rng);
        const double frac = theta == 1.0 ? 1.0 - u : 1.0 - std::pow(u, inv);
        const double piece = rest * frac;
        if (piece <= 0.0) continue;
        blocks.push_back(piece);
        rest -= piece;
    }
    if (rest > 0.0) blocks.push_back(rest);
    return IntervalPartition(std::move(blocks));
}

ChainEvent split_merge_step(IntervalPartition& partition, Rng& rng, double theta) {
    const double L = partition.length();
    const double u = uniform01(rng) * L;
    const double up = uniform01(rng) * L;
    const bool coin = theta >= 1.0 || uniform01(rng) < theta;
    std::vector<std::size_t> order(partition.block_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const Hit h = locate_in(partition.blocks(), order, u);
    const Hit g = locate_in(partition.blocks(), order, up);
    return apply_move(partition, h, g, coin);
}

IntervalPartition extract_cycle_partition(const CyclePermutation& perm, std::size_t cmax_size) {
    if (cmax_size == 0) throw DomainError("largest component size must be positive");
    const double scale = static_cast<double>(cmax_size);
    std::vector<double> blocks;
    blocks.reserve(perm.cycle_count());
    for (const auto& [label, info] : perm.cycles()) blocks.push_back(static_cast<double>(info.size) / scale);
    return IntervalPartition(std::move(blocks));
}

double sup_norm_discrepancy(const IntervalPartition& left, const IntervalPartition& right) {
    const auto& a = left.blocks();
    const auto& b = right.blocks();
    const std::size_t k = std::max(a.size(), b.size());
    double d = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double x = i < a.size() ? a[i] : 0.0;
        const double y = i < b.size() ? b[i] : 0.0;
        d = std::max(d, std::abs(x - y));
    }
    return d;
}

CouplingState::CouplingState(IntervalPartition left, IntervalPartition right, double match_tol,
                             double theta)
    : left_(std::move(left)), right_(std::move(right)), tol_(match_tol), theta_(theta) {
    if (!(match_tol >= 0.0)) throw DomainError("match tolerance must be non-negative");
    if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("theta must lie in (0, 1]");
    rematch();
}

void CouplingState::rematch() {
    matches_.clear();
    const auto& a = left_.blocks();
    const auto& b = right_.blocks();
    std::vector<bool> used(b.size(), false);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(a[i] - b[j]) <= tol_) {
                used[j] = true;
                matches_.emplace_back(i, j);
                break;
            }
        }
    }
}

double CouplingState::matched_mass_left() const {
    double q = 0.0;
    for (const auto& [i, j] : matches_) q += left_.blocks()[i];
    return q;
}

double CouplingState::matched_mass_right() const {
    double q = 0.0;
    for (const auto& [i, j] : matches_) q += right_.blocks()[j];
    return q;
}

CouplingState::StepResult CouplingState::step(Rng& rng) {
    const double L = left_.length();
    const double u = uniform01(rng) * L;
    const double up = uniform01(rng) * L;
    const bool coin = theta_ >= 1.0 || uniform01(rng) < theta_;
    return step_with(u, up, coin);
}

CouplingState::StepResult CouplingState::step_with(double u, double u_prime, bool split_coin) {
    // Matches were found scanning left blocks in descending order, so their
    // order is already longest-first with ties by insertion.
    std::vector<bool> left_matched(left_.block_count(), false);
    std::vector<bool> right_matched(right_.block_count(), false);
    std::vector<std::size_t> left_m;
    std::vector<std::size_t> right_m;
    for (const auto& [i, j] : matches_) {
        left_matched[i] = true;
        right_matched[j] = true;
        left_m.push_back(i);
        right_m.push_back(j);
    }
    std::vector<std::size_t> left_u;
    std::vector<std::size_t> right_u;
    for (std::size_t i = 0; i < left_.block_count(); ++i) {
        if (!left_matched[i]) left_u.push_back(i);
    }
    for (std::size_t j = 0; j < right_.block_count(); ++j) {
        if (!right_matched[j]) right_u.push_back(j);
    }
    const double q_left = matched_mass_left();
    const double q_right = matched_mass_right();

    auto locate_left = [&](double x) -> Hit {
        const double gap_start = 1.0 - q_left;
        if (!left_m.empty() && x >= gap_start && x < 1.0) {
            return locate_in(left_.blocks(), left_m, x - gap_start);
        }
        if (left_u.empty()) return locate_in(left_.blocks(), left_m, x - gap_start);
        const double virt = x < gap_start ? x : x - q_left;
        return locate_in(left_.blocks(), left_u, virt);
    };
    auto locate_right = [&](double x) -> Hit {
        const double gap_start = 1.0 - q_right;
        if (!right_m.empty() && (x >= gap_start || right_u.empty())) {
            return locate_in(right_.blocks(), right_m, x - gap_start);
        }
        return locate_in(right_.blocks(), right_u, x);
    };

    StepResult r;
    const Hit lh = locate_left(u);
    const Hit lg = locate_left(u_prime);
    const double right_len = right_.length();
    r.right_moved = u <= right_len && u_prime <= right_len;
    Hit rh{};
    Hit rg{};
    if (r.right_moved) {
        rh = locate_right(u);
        rg = locate_right(u_prime);
    }
    r.left = apply_move(left_, lh, lg, split_coin);
    if (r.right_moved) r.right = apply_move(right_, rh, rg, split_coin);
    rematch();
    return r;
}

std::size_t count_upcrossings(const std::vector<double>& series, double eps) {
    const double level = 1.0 - eps;
    std::size_t k = 0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i - 1] < level && series[i] >= level) ++k;
    }
    return k;
}

ReturnTimeStats mean_return_time(Rng& rng, double eps, std::uint64_t steps, double theta) {
    if (!(eps > 0.0 && eps < 0.5)) throw DomainError("eps must lie in (0, 1/2)");
    IntervalPartition p = sample_poidir(rng, theta);
    const double level = 1.0 - eps;
    std::uint64_t first = 0;
    std::uint64_t last = 0;
    std::size_t visits = 0;
    for (std::uint64_t t = 1; t <= steps; ++t) {
        split_merge_step(p, rng, theta);
        if (p.largest() > level) {
            if (visits == 0) first = t;
            last = t;
            ++visits;
        }
    }
    if (visits < 2) throw InsufficientData("fewer than two visits to the large-block set");
    ReturnTimeStats s;
    s.visits = visits;
    s.mean_return_time = static_cast<double>(last - first) / static_cast<double>(visits - 1);
    s.occupation = static_cast<double>(visits) / static_cast<double>(steps);
    return s;
}

}  // namespace dynperm
