#include "dynperm/walks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dynperm/errors.hpp"

namespace dynperm {

MassProfile MassProfile::init(const CyclePermutation& perm, Element v0) {
    if (v0 >= perm.size()) {
        throw ElementOutOfRange("start element " + std::to_string(v0 + 1) + " outside [1, " +
                                std::to_string(perm.size()) + "]");
    }
    MassProfile p;
    p.origin_ = v0;
    p.mass_.emplace(perm.cycle_of(v0), 1.0);
    return p;
}

MassProfile MassProfile::on_cycle(CycleLabel label, Element v0) {
    MassProfile p;
    p.origin_ = v0;
    p.mass_.emplace(label, 1.0);
    return p;
}

double MassProfile::mass_of(CycleLabel label) const {
    auto it = mass_.find(label);
    return it == mass_.end() ? 0.0 : it->second;
}

double MassProfile::total() const {
    double s = 0.0;
    for (const auto& [label, m] : mass_) s += m;
    return s;
}

std::vector<double> MassProfile::expand(const CyclePermutation& perm) const {
    std::vector<double> out(perm.size(), 0.0);
    for (const auto& [label, m] : mass_) {
        const CycleInfo& info = perm.cycle(label);
        const double each = m / static_cast<double>(info.size);
        Element w = info.rep;
        do {
            out[w] = each;
            w = perm.successor(w);
        } while (w != info.rep);
    }
    return out;
}

void MassProfile::update_on_effect(const TranspositionEffect& effect,
                                   const CyclePermutation& perm_after) {
    if (effect.merged()) {
        const Merged& m = effect.as_merged();
        if (!perm_after.has_cycle(m.new_cycle) || perm_after.cycle(m.new_cycle).size != m.new_size) {
            throw ConsistencyError("merge effect does not match the permutation");
        }
        apply(m);
        return;
    }

    const Split& s = effect.as_split();
    if (!perm_after.has_cycle(s.frag_a.label) || !perm_after.has_cycle(s.frag_b.label) ||
        perm_after.cycle(s.frag_a.label).size != s.frag_a.size ||
        perm_after.cycle(s.frag_b.label).size != s.frag_b.size) {
        throw ConsistencyError("split effect does not match the permutation");
    }
    apply(s);
}

void MassProfile::apply(const Merged& m) {
    const CycleLabel gone = m.new_cycle == m.left_cycle ? m.right_cycle : m.left_cycle;
    auto it = mass_.find(gone);
    if (it == mass_.end()) return;
    const double moved = it->second;
    mass_.erase(it);
    mass_[m.new_cycle] += moved;
}

void MassProfile::apply(const Split& s) {
    auto it = mass_.find(s.old_cycle);
    if (it == mass_.end()) return;
    const double m = it->second;
    mass_.erase(it);

    const std::size_t old_size = s.frag_a.size + s.frag_b.size;
    const bool a_small = s.frag_a.size <= s.frag_b.size;
    const Fragment& small = a_small ? s.frag_a : s.frag_b;
    const Fragment& large = a_small ? s.frag_b : s.frag_a;
    // The larger share is the remainder, so the two shares add up to m exactly.
    const double m_small = m * static_cast<double>(small.size) / static_cast<double>(old_size);
    const double m_large = m - m_small;
    if (m_small != 0.0) mass_[small.label] = m_small;
    if (m_large != 0.0) mass_[large.label] = m_large;
}

double worst_case_local_tv(double M, double delta, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
    if (!(M >= 1.0)) throw DomainError("M must be at least 1");
    if (!(delta >= 0.0)) throw DomainError("delta must be non-negative");
    if (eps * eps * M + delta > eps * M) {
        throw DomainError("eps^2 M + delta exceeds eps M: no mass left for the largest cycle");
    }
    const double grown = M + delta;
    return eps + delta / (eps * M) - eps * eps * (M / grown) - delta / grown;
}

PermTrajectory make_cfdp_trajectory(Rng& rng, std::size_t n, std::size_t steps) {
    PermTrajectory traj;
    traj.start.resize(n);
    for (std::size_t v = 0; v < n; ++v) traj.start[v] = static_cast<Element>(v);
    traj.moves.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) traj.moves.push_back(sample_uniform_transposition(rng, n));
    return traj;
}

FiniteSpeedWalker::FiniteSpeedWalker(Element start, std::size_t rho) : position_(start), rho_(rho) {
    if (rho == 0) throw std::invalid_argument("speed ratio must be at least 1");
}

void FiniteSpeedWalker::step(Rng& rng, std::span<const Element> succ, std::span<const Element> pred) {
    const Element s = succ[position_];
    if (s == position_) return;
    if (succ[s] == position_) {
        position_ = s;
        return;
    }
    position_ = fair_bit(rng) ? s : pred[position_];
}

void FiniteSpeedWalker::advance(Rng& rng, const CyclePermutation& perm) {
    const auto succ = perm.successors();
    std::vector<Element> pred(succ.size());
    for (std::size_t v = 0; v < succ.size(); ++v) pred[succ[v]] = static_cast<Element>(v);
    for (std::size_t i = 0; i < rho_; ++i) step(rng, succ, pred);
}

std::vector<double> walk_distribution_step(const std::vector<double>& dist,
                                           std::span<const Element> succ,
                                           std::span<const Element> pred, WalkKernel kernel) {
    const std::size_t n = dist.size();
    std::vector<double> next(n, 0.0);
    const double move = kernel == WalkKernel::Lazy ? 0.5 : 1.0;
    for (std::size_t v = 0; v < n; ++v) {
        const double p = dist[v];
        if (p == 0.0) continue;
        const Element s = succ[v];
        if (s == v) {
            next[v] += p;
            continue;
        }
        next[v] += (1.0 - move) * p;
        if (succ[s] == v) {
            next[s] += move * p;
        } else {
            next[s] += 0.5 * move * p;
            next[pred[v]] += 0.5 * move * p;
        }
    }
    return next;
}

namespace {

void check_trajectory(const PermTrajectory& traj, Element v0, std::size_t rho) {
    if (traj.moves.empty()) throw std::invalid_argument("trajectory has no moves");
    if (rho == 0) throw std::invalid_argument("speed ratio must be at least 1");
    if (v0 >= traj.start.size()) throw ElementOutOfRange("start element outside the permutation");
}

std::vector<Element> inverse_of(std::span<const Element> succ) {
    std::vector<Element> pred(succ.size());
    for (std::size_t v = 0; v < succ.size(); ++v) pred[succ[v]] = static_cast<Element>(v);
    return pred;
}

// Advances `dist` by rho steps on `perm`.
void run_block(std::vector<double>& dist, const CyclePermutation& perm, std::size_t rho,
               WalkKernel kernel) {
    const auto succ = perm.successors();
    const auto pred = inverse_of(succ);
    for (std::size_t k = 0; k < rho; ++k) dist = walk_distribution_step(dist, succ, pred, kernel);
}

}  // namespace

std::vector<double> finite_speed_run(const PermTrajectory& traj, Element v0, std::size_t rho,
                                     WalkKernel kernel) {
    check_trajectory(traj, v0, rho);
    auto perm = CyclePermutation::from_successors(traj.start);
    std::vector<double> dist(perm.size(), 0.0);
    dist[v0] = 1.0;
    for (const auto& [a, b] : traj.moves) {
        perm.apply_transposition(a, b);
        run_block(dist, perm, rho, kernel);
    }
    return dist;
}

std::vector<double> compare_finite_vs_infinite(const PermTrajectory& traj, Element v0,
                                               std::size_t rho, WalkKernel kernel) {
    check_trajectory(traj, v0, rho);
    auto perm = CyclePermutation::from_successors(traj.start);
    MassProfile mass = MassProfile::init(perm, v0);
    std::vector<double> dist(perm.size(), 0.0);
    dist[v0] = 1.0;
    std::vector<double> out;
    out.reserve(traj.moves.size());
    for (const auto& [a, b] : traj.moves) {
        const auto effect = perm.apply_transposition(a, b);
        mass.update_on_effect(effect, perm);
        run_block(dist, perm, rho, kernel);
        out.push_back(total_variation(mass.expand(perm), dist));
    }
    return out;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::invalid_argument("distributions differ in length");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

}  // namespace dynperm
