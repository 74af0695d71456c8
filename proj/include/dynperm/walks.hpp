#ifndef DYNPERM_WALKS_HPP
#define DYNPERM_WALKS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dynperm/perm_core.hpp"
#include "dynperm/rng.hpp"

namespace dynperm {

/// Infinite-speed walk distribution stored per cycle. The walk is uniform
/// inside each cycle it occupies, so a cycle label and its total mass describe
/// it completely. Only strictly positive masses are stored.
class MassProfile {
public:
    using MassMap = std::unordered_map<CycleLabel, double>;

    // All mass on the cycle of v0. Throws ElementOutOfRange.
    static MassProfile init(const CyclePermutation& perm, Element v0);
    // All mass on the given label.
    static MassProfile on_cycle(CycleLabel label, Element v0);

    // Moves mass along with the cycle surgery described by `effect`. Merge: the
    // masses add. Split: the mass is shared proportionally to fragment sizes.
    // Throws ConsistencyError if the effect does not match `perm_after`.
    void update_on_effect(const TranspositionEffect& effect, const CyclePermutation& perm_after);

    // The same updates without the registry check.
    void apply(const Merged& m);
    void apply(const Split& s);

    Element origin() const noexcept { return origin_; }
    const MassMap& masses() const noexcept { return mass_; }
    double mass_of(CycleLabel label) const;
    double total() const;

    // Element-level probability vector.
    std::vector<double> expand(const CyclePermutation& perm) const;

private:
    MassMap mass_;
    Element origin_ = 0;
};

inline MassProfile init_mass(const CyclePermutation& perm, Element v0) {
    return MassProfile::init(perm, v0);
}

// d_TV(mu, Unif([n])) = sum over occupied cycles c of max(0, m_c - |c|/n).
// `cycles` is anything with size() and cycle(label) -> CycleInfo.
template <class CycleStructure>
double tv_to_uniform(const MassProfile& mass, const CycleStructure& cycles) {
    const double n = static_cast<double>(cycles.size());
    double tv = 0.0;
    for (const auto& [label, m] : mass.masses()) {
        const double excess = m - static_cast<double>(cycles.cycle(label).size) / n;
        if (excess > 0.0) tv += excess;
    }
    return tv;
}

// Number of elements with positive probability.
template <class CycleStructure>
std::size_t support_size(const MassProfile& mass, const CycleStructure& cycles) {
    std::size_t s = 0;
    for (const auto& [label, m] : mass.masses()) s += cycles.cycle(label).size;
    return s;
}

// d_TV(mu, Unif(component)). `in_component` is asked about cycle
// representatives only, which is enough when every cycle lies inside a single
// component. Throws std::invalid_argument for component_size == 0.
template <class CycleStructure>
double tv_to_uniform_on_component(const MassProfile& mass, const CycleStructure& cycles,
                                  const std::function<bool(Element)>& in_component,
                                  std::size_t component_size) {
    if (component_size == 0) throw std::invalid_argument("component size must be positive");
    // Both laws have total mass 1, so the distance is the total positive part
    // of mu - uniform, to which only occupied cycles contribute.
    const double M = static_cast<double>(component_size);
    double tv = 0.0;
    for (const auto& [label, m] : mass.masses()) {
        const CycleInfo& info = cycles.cycle(label);
        const double target = in_component(info.rep) ? static_cast<double>(info.size) / M : 0.0;
        if (m > target) tv += m - target;
    }
    return tv;
}

// Total variation between the worst-case post-dropdown measure and the uniform
// law on a component that has grown from M to M + delta elements:
//   eps + delta/(eps M) - eps^2 M/(M + delta) - delta/(M + delta).
// Requires 0 < eps < 1, M >= 1 and eps^2 M + delta <= eps M; throws DomainError.
double worst_case_local_tv(double M, double delta, double eps);

/// A permutation trajectory: a starting permutation and the transpositions
/// applied to it, one per time step.
struct PermTrajectory {
    std::vector<Element> start;  // successor array of the state at time 0
    std::vector<std::pair<Element, Element>> moves;
};

// Uniform-transposition trajectory of `steps` moves from the identity.
PermTrajectory make_cfdp_trajectory(Rng& rng, std::size_t n, std::size_t steps);

enum class WalkKernel {
    Simple,  // the walk of the finite-speed definition
    Lazy,    // holds with probability 1/2, otherwise moves as Simple
};

/// Sampled finite-speed walker. Each step on a fixed permutation: stay on a
/// fixed point, hop across a 2-cycle, otherwise move to the successor or the
/// predecessor with probability 1/2 each.
class FiniteSpeedWalker {
public:
    FiniteSpeedWalker(Element start, std::size_t rho);

    Element position() const noexcept { return position_; }
    std::size_t speed_ratio() const noexcept { return rho_; }

    void step(Rng& rng, std::span<const Element> succ, std::span<const Element> pred);
    // rho steps on one permutation.
    void advance(Rng& rng, const CyclePermutation& perm);

private:
    Element position_;
    std::size_t rho_;
};

// One exact step of the walk's distribution on a fixed permutation.
std::vector<double> walk_distribution_step(const std::vector<double>& dist,
                                           std::span<const Element> succ,
                                           std::span<const Element> pred,
                                           WalkKernel kernel = WalkKernel::Simple);

// Exact law of the finite-speed walk from v0 after rho * T steps, where the
// i-th block of rho steps (i = 1..T) runs on the permutation after move i.
// Throws std::invalid_argument on an empty trajectory or rho == 0.
std::vector<double> finite_speed_run(const PermTrajectory& traj, Element v0, std::size_t rho,
                                     WalkKernel kernel = WalkKernel::Simple);

// For i = 1..T: d_TV between the infinite-speed walk after i moves and the
// finite-speed walk after rho * i steps, both started at v0.
std::vector<double> compare_finite_vs_infinite(const PermTrajectory& traj, Element v0,
                                               std::size_t rho,
                                               WalkKernel kernel = WalkKernel::Simple);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace dynperm

#endif  // DYNPERM_WALKS_HPP
