#include "dynperm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "dynperm/deg2_rewire.hpp"
#include "dynperm/graph_track.hpp"
#include "dynperm/limits.hpp"
#include "dynperm/partition_chain.hpp"
#include "dynperm/perm_core.hpp"
#include "dynperm/stats.hpp"
#include "dynperm/walks.hpp"

namespace dynperm {

Dynamics parse_dynamics(const std::string& name) {
    if (name == "cdp") return Dynamics::Cdp;
    if (name == "cfdp") return Dynamics::Cfdp;
    if (name == "deg2") return Dynamics::Deg2;
    throw std::invalid_argument("unknown dynamics '" + name + "' (expected cdp, cfdp or deg2)");
}

std::string to_string(Dynamics d) {
    switch (d) {
        case Dynamics::Cdp: return "cdp";
        case Dynamics::Cfdp: return "cfdp";
        case Dynamics::Deg2: return "deg2";
    }
    return "?";
}

double ExperimentConfig::resolved_horizon() const {
    if (horizon > 0.0) return horizon;
    if (dynamics == Dynamics::Cdp) {
        return static_cast<double>(n - 1) / static_cast<double>(n);
    }
    return 3.0;
}

namespace {

std::uint64_t total_steps(const ExperimentConfig& c) {
    return static_cast<std::uint64_t>(std::llround(c.resolved_horizon() * static_cast<double>(c.n)));
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (trials < 1) throw std::invalid_argument("at least one trial is needed");
    if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (!(local_eps > 0.0 && local_eps < 1.0)) throw std::invalid_argument("local eps must lie in (0, 1)");
    if (!(eps_exponent < 0.0) || !(alt_eps_exponent < 0.0)) {
        throw std::invalid_argument("eps exponents must be negative");
    }
    if (!std::isfinite(resolved_horizon())) throw std::invalid_argument("horizon must be finite");
    if (dynamics == Dynamics::Cdp && total_steps(*this) > n - 1) {
        throw std::invalid_argument("cdp horizon cannot exceed n - 1 steps");
    }
    if (grid_step > resolved_horizon()) throw std::invalid_argument("grid step exceeds the horizon");
}

std::vector<std::uint64_t> ExperimentConfig::sample_times() const {
    const double dn = static_cast<double>(n);
    const std::uint64_t last = total_steps(*this);
    std::vector<std::uint64_t> times;
    for (std::size_t k = 1;; ++k) {
        const double s = static_cast<double>(k) * grid_step;
        if (s > resolved_horizon() + 1e-12) break;
        const auto t = std::min<std::uint64_t>(static_cast<std::uint64_t>(std::llround(s * dn)), last);
        if (t == 0 || (!times.empty() && times.back() == t)) continue;
        times.push_back(t);
    }
    return times;
}

std::uint64_t diagnostic_window(std::size_t n) {
    const double l = std::log(static_cast<double>(n));
    return static_cast<std::uint64_t>(std::ceil(l * l));
}

namespace {

struct PermModel {
    CyclePermutation perm;
    CrossCycleSampler sampler;
    bool coagulative;

    PermModel(std::size_t n, bool cdp) : perm(CyclePermutation::identity(n)), coagulative(cdp) {}

    const CyclePermutation& cycles() const { return perm; }
    CycleLabel component_of(Element v) const { return perm.cycle_of(v); }
    std::size_t largest_cycle_size() const { return largest_cycle(perm).second; }

    template <class OnMerge, class OnSplit>
    void step(Rng& rng, ComponentForest& forest, OnMerge&& on_merge, OnSplit&& on_split) {
        const auto [a, b] = coagulative ? sampler.sample(rng, perm)
                                        : sample_uniform_transposition(rng, perm.size());
        const TranspositionEffect eff = perm.apply_transposition(a, b);
        forest.add_edge(a, b);
        if (eff.merged()) {
            on_merge(eff.as_merged());
        } else {
            on_split(eff.as_split());
        }
    }
};

struct Deg2Model {
    Deg2Graph graph;

    explicit Deg2Model(std::size_t n) : graph(Deg2Graph::init_self_loops(n)) {}

    const Deg2Graph& cycles() const { return graph; }
    CycleLabel component_of(Element v) const { return graph.component_of(v); }
    std::size_t largest_cycle_size() const {
        std::size_t best = 0;
        for (const auto& [label, info] : graph.components()) best = std::max(best, info.size);
        return best;
    }

    template <class OnMerge, class OnSplit>
    void step(Rng& rng, ComponentForest& forest, OnMerge&& on_merge, OnSplit&& on_split) {
        const RewireEffect eff = graph.rewire_step(rng);
        feed_forest(forest, eff, rng);
        if (eff.merged()) {
            on_merge(std::get<Merged>(eff.kind));
        } else if (eff.split()) {
            on_split(std::get<Split>(eff.kind));
        }
    }
};

template <class Model>
TrialRecord run_trial_on(Model& model, const ExperimentConfig& config, std::size_t trial, Rng& rng,
                         Element v0, Element v_other) {
    const std::size_t n = config.n;
    const double dn = static_cast<double>(n);
    const std::uint64_t steps = total_steps(config);
    const std::vector<std::uint64_t> times = config.sample_times();
    const double eps_n = std::pow(dn, config.eps_exponent);
    const double eps_alt = std::pow(dn, config.alt_eps_exponent);
    const std::uint64_t window = diagnostic_window(n);

    TrialRecord rec;
    rec.trial = trial;
    rec.v0 = v0;
    rec.samples.reserve(times.size());

    MassProfile mass = MassProfile::on_cycle(model.component_of(v0), v0);
    MassProfile other = MassProfile::on_cycle(model.component_of(v_other), v_other);
    ComponentForest forest(n);
    std::vector<double> block_series;

    auto on_merge = [&](const Merged& m) {
        mass.apply(m);
        other.apply(m);
    };
    auto on_split = [&](const Split& s) {
        mass.apply(s);
        other.apply(s);
    };

    std::size_t next = 0;
    for (std::uint64_t t = 1; t <= steps; ++t) {
        model.step(rng, forest, on_merge, on_split);
        const auto& cycles = model.cycles();

        if (!rec.dropdown_time && dropdown_check(mass, cycles, forest, eps_n)) rec.dropdown_time = t;
        if (!rec.dropdown_time_alt && dropdown_check(mass, cycles, forest, eps_alt)) {
            rec.dropdown_time_alt = t;
        }
        if (!rec.pinned_dropdown_time && dropdown_check(other, cycles, forest, eps_n)) {
            rec.pinned_dropdown_time = t;
        }

        if (rec.dropdown_time) {
            const std::uint64_t td = *rec.dropdown_time;
            if (!rec.local_mixing_time && t > td && t <= td + n) {
                const Element root = forest.largest_root();
                const double local = tv_to_uniform_on_component(
                    mass, cycles, [&](Element v) { return forest.find(v) == root; },
                    forest.largest_size());
                if (local < config.local_eps) rec.local_mixing_time = t;
            }
            if (t <= td + window) {
                const double frac = static_cast<double>(model.largest_cycle_size()) /
                                    static_cast<double>(forest.largest_size());
                block_series.push_back(std::min(frac, 1.0));
            }
        }

        if (next < times.size() && times[next] == t) {
            GridSample g;
            g.t = t;
            g.tv = tv_to_uniform(mass, cycles);
            g.cmax_frac = static_cast<double>(forest.largest_size()) / dn;
            g.largest_cycle_frac = static_cast<double>(model.largest_cycle_size()) / dn;
            g.support_size = support_size(mass, cycles);
            g.dropped = rec.dropdown_time.has_value();
            rec.samples.push_back(g);
            ++next;
        }
    }
    rec.upcrossings = count_upcrossings(block_series, config.local_eps);
    return rec;
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& config, std::size_t trial) {
    config.validate();
    Rng rng = derive_rng_stream(config.master_seed, trial);
    // Both starting points come from the first draw so the stream layout does
    // not depend on the flag.
    const auto drawn = static_cast<Element>(uniform_index(rng, config.n));
    const Element v0 = config.pin_v0 ? 0 : drawn;
    const Element v_other = config.pin_v0 ? drawn : 0;
    if (config.dynamics == Dynamics::Deg2) {
        Deg2Model model(config.n);
        return run_trial_on(model, config, trial, rng, v0, v_other);
    }
    PermModel model(config.n, config.dynamics == Dynamics::Cdp);
    return run_trial_on(model, config, trial, rng, v0, v_other);
}

std::vector<ProfileDeviation> compare_profile(const std::vector<TrialRecord>& records,
                                              const std::function<double(double)>& limit,
                                              std::size_t n, bool dropdown_aware) {
    if (records.empty()) return {};
    const auto& ref = records.front().samples;
    for (const auto& r : records) {
        if (r.samples.size() != ref.size()) throw std::invalid_argument("records do not share a grid");
        for (std::size_t i = 0; i < ref.size(); ++i) {
            if (r.samples[i].t != ref[i].t) throw std::invalid_argument("records do not share a grid");
        }
    }
    const double dn = static_cast<double>(n);
    std::vector<ProfileDeviation> out;
    out.reserve(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        ProfileDeviation d;
        d.s = static_cast<double>(ref[i].t) / dn;
        const double target_post = 1.0 - limit(d.s);
        std::vector<double> pre;
        std::vector<double> post;
        for (const auto& r : records) {
            const GridSample& g = r.samples[i];
            if (dropdown_aware && !g.dropped) {
                pre.push_back(std::abs(g.tv - 1.0));
            } else {
                post.push_back(std::abs(g.tv - target_post));
            }
        }
        d.pre_count = pre.size();
        d.post_count = post.size();
        if (!pre.empty()) d.pre_median = median(std::move(pre));
        if (!post.empty()) d.post_median = median(std::move(post));
        out.push_back(d);
    }
    return out;
}

std::vector<double> scaled_dropdown_samples(const std::vector<TrialRecord>& records, std::size_t n,
                                            bool pinned, bool alt) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        const auto& t = pinned ? r.pinned_dropdown_time : alt ? r.dropdown_time_alt : r.dropdown_time;
        out.push_back(t ? static_cast<double>(*t) / static_cast<double>(n)
                        : std::numeric_limits<double>::infinity());
    }
    return out;
}

std::function<double(double)> limit_function(Dynamics d) {
    const LimitTables& tables = LimitTables::standard();
    if (d == Dynamics::Cdp) return [&tables](double s) { return tables.eta(s); };
    return [&tables](double u) { return tables.zeta(u); };
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    result.records.resize(config.trials);

    unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
    threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, config.trials));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < config.trials; i = next++) {
            try {
                result.records[i] = run_trial(config, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = config.trials;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    const auto limit = limit_function(config.dynamics);
    result.ks_vs_limit = ks_distance(scaled_dropdown_samples(result.records, config.n), limit);
    result.ks_vs_limit_pinned =
        ks_distance(scaled_dropdown_samples(result.records, config.n, true, false), limit);
    result.ks_vs_limit_alt_eps =
        ks_distance(scaled_dropdown_samples(result.records, config.n, false, true), limit);
    result.deviations = compare_profile(result.records, limit, config.n, true);

    if (!config.out_dir.empty()) {
        const std::filesystem::path dir(config.out_dir);
        std::filesystem::create_directories(dir);
        std::ofstream csv(dir / "trials.csv", std::ios::binary);
        if (!csv) throw std::runtime_error("cannot open " + (dir / "trials.csv").string());
        write_trials_csv(csv, result);
        std::ofstream js(dir / "summary.json", std::ios::binary);
        if (!js) throw std::runtime_error("cannot open " + (dir / "summary.json").string());
        js << summary_json(result) << '\n';
        if (!csv || !js) throw std::runtime_error("write failed in " + dir.string());
    }
    return result;
}

void write_trials_csv(std::ostream& out, const ExperimentResult& result) {
    const double dn = static_cast<double>(result.config.n);
    out << "trial,v0,t,s,tv,cmax_frac,largest_cycle_frac,support_size,dropped\n";
    for (const auto& r : result.records) {
        for (const auto& g : r.samples) {
            out << r.trial << ',' << (r.v0 + 1) << ',' << g.t << ','
                << format_double(static_cast<double>(g.t) / dn) << ',' << format_double(g.tv) << ','
                << format_double(g.cmax_frac) << ',' << format_double(g.largest_cycle_frac) << ','
                << g.support_size << ',' << (g.dropped ? 1 : 0) << '\n';
        }
    }
}

namespace {

using nlohmann::json;

json optional_time(const std::optional<std::uint64_t>& t, double n) {
    return t ? json(static_cast<double>(*t) / n) : json(nullptr);
}

json deviations_json(const std::vector<ProfileDeviation>& devs, bool pre) {
    json arr = json::array();
    for (const auto& d : devs) {
        const auto& m = pre ? d.pre_median : d.post_median;
        arr.push_back({{"s", d.s},
                       {"median", m ? json(*m) : json(nullptr)},
                       {"count", pre ? d.pre_count : d.post_count}});
    }
    return arr;
}

}  // namespace

std::string summary_json(const ExperimentResult& result) {
    const ExperimentConfig& c = result.config;
    const double dn = static_cast<double>(c.n);
    json j;
    j["config"] = {{"dynamics", to_string(c.dynamics)},
                   {"n", c.n},
                   {"trials", c.trials},
                   {"seed", c.master_seed},
                   {"horizon", c.resolved_horizon()},
                   {"grid_step", c.grid_step},
                   {"eps_exponent", c.eps_exponent},
                   {"alt_eps_exponent", c.alt_eps_exponent},
                   {"local_eps", c.local_eps},
                   {"pin_v0", c.pin_v0}};

    json drops = json::array();
    json drops_other = json::array();
    json drops_alt = json::array();
    json upcrossings = json::array();
    std::vector<double> gaps;
    std::size_t eligible = 0;
    std::size_t within = 0;
    const std::uint64_t window = diagnostic_window(c.n);
    for (const auto& r : result.records) {
        drops.push_back(optional_time(r.dropdown_time, dn));
        drops_other.push_back(optional_time(r.pinned_dropdown_time, dn));
        drops_alt.push_back(optional_time(r.dropdown_time_alt, dn));
        if (r.dropdown_time) upcrossings.push_back(r.upcrossings);
        if (r.dropdown_time && static_cast<double>(*r.dropdown_time) >= 0.55 * dn) {
            ++eligible;
            if (r.local_mixing_time) {
                const std::uint64_t gap = *r.local_mixing_time - *r.dropdown_time;
                gaps.push_back(static_cast<double>(gap));
                if (gap <= window) ++within;
            }
        }
    }
    j["dropdown_samples"] = drops;
    j["ks_vs_limit"] = result.ks_vs_limit;
    j["profile_deviation_pre"] = deviations_json(result.deviations, true);
    j["profile_deviation_post"] = deviations_json(result.deviations, false);

    json lm = {{"local_eps", c.local_eps},
               {"eligible_trials", eligible},
               {"observed", gaps.size()},
               {"window", window},
               {"fraction_within_window",
                eligible ? json(static_cast<double>(within) / static_cast<double>(eligible))
                         : json(nullptr)}};
    for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        char key[16];
        std::snprintf(key, sizeof key, "q%02d", static_cast<int>(std::lround(q * 100)));
        lm[key] = gaps.empty() ? json(nullptr) : json(quantile(gaps, q));
    }
    j["local_mixing_gap_quantiles"] = lm;

    // The second walker starts at element 1 when the first is uniform, and the
    // other way round under pin_v0.
    j["dropdown_samples_other_v0"] = drops_other;
    j["ks_vs_limit_other_v0"] = result.ks_vs_limit_pinned;
    j["dropdown_samples_alt_eps"] = drops_alt;
    j["ks_vs_limit_alt_eps"] = result.ks_vs_limit_alt_eps;
    j["upcrossings"] = {{"window", window}, {"level", 1.0 - c.local_eps}, {"counts", upcrossings}};
    return j.dump(2);
}

}  // namespace dynperm
