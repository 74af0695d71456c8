#ifndef DYNPERM_HARNESS_HPP
#define DYNPERM_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynperm/rng.hpp"

namespace dynperm {

enum class Dynamics { Cdp, Cfdp, Deg2 };

Dynamics parse_dynamics(const std::string& name);
std::string to_string(Dynamics d);

struct ExperimentConfig {
    Dynamics dynamics = Dynamics::Cfdp;
    std::size_t n = 1000;
    std::size_t trials = 10;
    std::uint64_t master_seed = 1;
    // In units of n. Non-positive picks the default: (n-1)/n for cdp, 3 otherwise.
    double horizon = 0.0;
    double grid_step = 0.05;
    double eps_exponent = -0.25;
    double alt_eps_exponent = -0.2;  // second drop-down gate, reported alongside
    double local_eps = 0.05;         // local mixing threshold
    bool pin_v0 = false;             // primary walker starts at element 1
    unsigned threads = 0;            // 0: hardware concurrency
    std::string out_dir;             // empty: nothing written

    double resolved_horizon() const;
    // Time steps at which rows are recorded, t = round(s n) for s on the grid.
    std::vector<std::uint64_t> sample_times() const;
    // Throws std::invalid_argument.
    void validate() const;
};

struct GridSample {
    std::uint64_t t = 0;
    double tv = 0.0;
    double cmax_frac = 0.0;
    double largest_cycle_frac = 0.0;
    std::size_t support_size = 0;
    bool dropped = false;
};

struct TrialRecord {
    std::size_t trial = 0;
    std::uint32_t v0 = 0;  // 0-indexed
    std::optional<std::uint64_t> dropdown_time;
    std::optional<std::uint64_t> dropdown_time_alt;     // alt_eps_exponent gate
    std::optional<std::uint64_t> pinned_dropdown_time;  // second walker, the other v0 choice
    std::optional<std::uint64_t> local_mixing_time;
    std::size_t upcrossings = 0;  // of the largest-cycle fraction in the window after drop-down
    std::vector<GridSample> samples;
};

// Window length ceil(log^2 n) used for the post-drop-down diagnostics.
std::uint64_t diagnostic_window(std::size_t n);

// One trial; a pure function of (config, trial id).
TrialRecord run_trial(const ExperimentConfig& config, std::size_t trial);

struct ProfileDeviation {
    double s = 0.0;
    std::optional<double> pre_median;   // median |tv - 1| over trials not yet dropped at s
    std::optional<double> post_median;  // median |tv - (1 - limit(s))| over dropped trials
    std::size_t pre_count = 0;
    std::size_t post_count = 0;
};

// Per grid point deviations from 1 - limit(s) [s > T/n]. Without
// dropdown_aware every trial is compared with 1 - limit(s). Throws
// std::invalid_argument if the records have different grids.
std::vector<ProfileDeviation> compare_profile(const std::vector<TrialRecord>& records,
                                              const std::function<double(double)>& limit,
                                              std::size_t n, bool dropdown_aware = true);

// Drop-down times divided by n; +inf for trials that never dropped.
std::vector<double> scaled_dropdown_samples(const std::vector<TrialRecord>& records, std::size_t n,
                                            bool pinned = false, bool alt = false);

// eta for cdp, zeta for the other two.
std::function<double(double)> limit_function(Dynamics d);

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<TrialRecord> records;
    double ks_vs_limit = 0.0;
    double ks_vs_limit_pinned = 0.0;
    double ks_vs_limit_alt_eps = 0.0;
    std::vector<ProfileDeviation> deviations;
};

// Runs all trials on a thread pool and aggregates. Writes trials.csv and
// summary.json into config.out_dir when it is set.
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_trials_csv(std::ostream& out, const ExperimentResult& result);
std::string summary_json(const ExperimentResult& result);

// "%.9g"
std::string format_double(double x);

}  // namespace dynperm

#endif  // DYNPERM_HARNESS_HPP
