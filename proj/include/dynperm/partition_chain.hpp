#ifndef DYNPERM_PARTITION_CHAIN_HPP
#define DYNPERM_PARTITION_CHAIN_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "dynperm/perm_core.hpp"
#include "dynperm/rng.hpp"

namespace dynperm {

/// Partition of [0, L] into blocks of positive length, kept in descending
/// order of length.
class IntervalPartition {
public:
    IntervalPartition() = default;
    // Sorts `blocks`; L is their sum. Throws DomainError on non-positive
    // blocks or an empty list.
    explicit IntervalPartition(std::vector<double> blocks);

    const std::vector<double>& blocks() const noexcept { return blocks_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    double length() const noexcept { return length_; }
    double largest() const noexcept { return blocks_.empty() ? 0.0 : blocks_.front(); }
    double block_sum() const;

    // Index of the block containing x under the size-ordered layout.
    std::size_t locate(double x) const;

    // Replace block i by two pieces / blocks i and j by their union.
    void split_block(std::size_t i, double first_piece);
    void merge_blocks(std::size_t i, std::size_t j);

private:
    void resort();

    std::vector<double> blocks_;
    double length_ = 0.0;
};

// Stick-breaking sample of PoiDir(theta) on [0, 1]: fractions 1 - U^{1/theta}
// (Beta(1, theta)) until the remainder drops below 1e-12, which becomes the
// last block. Throws DomainError for theta <= 0.
IntervalPartition sample_poidir(Rng& rng, double theta);

enum class ChainEvent { Merge, Split, Noop };

// Split-merge step: U, U' uniform on [0, L]. Different blocks merge. If both
// land in one block it splits at U' with probability theta, otherwise nothing
// happens.
ChainEvent split_merge_step(IntervalPartition& partition, Rng& rng, double theta = 1.0);

// Cycle lengths divided by cmax_size, so L = n / cmax_size.
IntervalPartition extract_cycle_partition(const CyclePermutation& perm, std::size_t cmax_size);

// Max over ranks of the difference between i-th largest blocks; missing
// entries count as 0.
double sup_norm_discrepancy(const IntervalPartition& left, const IntervalPartition& right);

/// A pair of partitions driven by shared markers. Left has length >= 1, right
/// has length 1. Blocks whose lengths agree within match_tol are matched,
/// greedily in descending order of size.
///
/// Layout before each move. Matched blocks sit side by side ending at 1,
/// longest first, in both partitions. Right's unmatched blocks fill
/// [0, 1 - Q_R) longest first. Left's unmatched blocks fill [0, 1 - Q_L) and
/// continue past 1 up to L, so one block may straddle the matched region.
/// Markers are drawn on [0, L]; the right partition only moves when both land
/// in [0, 1].
class CouplingState {
public:
    CouplingState(IntervalPartition left, IntervalPartition right, double match_tol,
                  double theta = 1.0);

    const IntervalPartition& left() const noexcept { return left_; }
    const IntervalPartition& right() const noexcept { return right_; }
    double match_tol() const noexcept { return tol_; }
    double theta() const noexcept { return theta_; }

    // Matched pairs as (left block index, right block index).
    const std::vector<std::pair<std::size_t, std::size_t>>& matches() const noexcept {
        return matches_;
    }
    double matched_mass_left() const;
    double matched_mass_right() const;

    struct StepResult {
        ChainEvent left = ChainEvent::Noop;
        ChainEvent right = ChainEvent::Noop;
        bool right_moved = false;
    };
    StepResult step(Rng& rng);
    // Step with given markers and split coin (for tests).
    StepResult step_with(double u, double u_prime, bool split_coin);

    double sup_norm() const { return sup_norm_discrepancy(left_, right_); }

private:
    void rematch();

    IntervalPartition left_;
    IntervalPartition right_;
    double tol_;
    double theta_;
    std::vector<std::pair<std::size_t, std::size_t>> matches_;
};

// Number of k with series[k-1] < 1 - eps <= series[k].
std::size_t count_upcrossings(const std::vector<double>& series, double eps);

struct ReturnTimeStats {
    double mean_return_time = 0.0;  // mean gap between visits to {P1 > 1 - eps}
    double occupation = 0.0;        // fraction of steps spent there
    std::size_t visits = 0;
};

// Runs the split-merge chain from a PoiDir(theta) sample. Throws
// InsufficientData with fewer than two visits, DomainError unless 0 < eps < 1/2.
ReturnTimeStats mean_return_time(Rng& rng, double eps, std::uint64_t steps, double theta = 1.0);

}  // namespace dynperm

#endif  // DYNPERM_PARTITION_CHAIN_HPP
