// Command-line front end: simulate, limits, coupling, fspeed.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynperm/harness.hpp"
#include "dynperm/limits.hpp"
#include "dynperm/partition_chain.hpp"
#include "dynperm/rng.hpp"
#include "dynperm/walks.hpp"

namespace {

using namespace dynperm;

int run_simulate(const ExperimentConfig& config) {
    const ExperimentResult result = run_experiment(config);
    std::size_t dropped = 0;
    for (const auto& r : result.records) dropped += r.dropdown_time ? 1 : 0;
    std::printf("dynamics=%s n=%zu trials=%zu dropped=%zu ks_vs_limit=%s\n",
                to_string(config.dynamics).c_str(), config.n, config.trials, dropped,
                format_double(result.ks_vs_limit).c_str());
    if (config.out_dir.empty()) write_trials_csv(std::cout, result);
    return 0;
}

int run_limits(double umax, double step, const std::string& out) {
    const LimitTables tables(umax, step);
    std::ofstream file;
    if (!out.empty()) {
        file.open(out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + out);
    }
    std::ostream& os = out.empty() ? std::cout : file;
    os << "u,zeta,phi,eta_of_phi\n";
    for (std::size_t i = 0; i < tables.node_count(); ++i) {
        const double p = tables.phi_node(i);
        os << format_double(tables.node(i)) << ',' << format_double(tables.zeta_node(i)) << ','
           << format_double(p) << ',' << format_double(tables.eta(p)) << '\n';
    }
    if (!os) throw std::runtime_error("write failed");
    return 0;
}

struct CouplingArgs {
    double theta = 1.0;
    double eps = 0.1;
    std::uint64_t steps = 10000;
    std::size_t replicas = 1;
    std::uint64_t seed = 1;
    std::uint64_t every = 1;
    std::string out;
};

int run_coupling(const CouplingArgs& a) {
    if (a.replicas == 0 || a.steps == 0) throw std::invalid_argument("steps and replicas must be positive");
    const std::uint64_t every = a.every ? a.every : 1;
    std::filesystem::create_directories(a.out);
    const auto dir = std::filesystem::path(a.out);
    std::ofstream csv(dir / "coupling.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open " + (dir / "coupling.csv").string());
    csv << "replica,step,largest_block,sup_norm\n";

    nlohmann::json reps = nlohmann::json::array();
    for (std::size_t r = 0; r < a.replicas; ++r) {
        Rng rng = derive_rng_stream(a.seed, r);
        CouplingState state(IntervalPartition({1.0}), sample_poidir(rng, a.theta), 1e-12, a.theta);
        std::vector<double> series;
        series.reserve(a.steps + 1);
        series.push_back(state.left().largest());
        csv << r << ",0," << format_double(state.left().largest()) << ','
            << format_double(state.sup_norm()) << '\n';
        for (std::uint64_t t = 1; t <= a.steps; ++t) {
            state.step(rng);
            series.push_back(state.left().largest());
            if (t % every == 0 || t == a.steps) {
                csv << r << ',' << t << ',' << format_double(state.left().largest()) << ','
                    << format_double(state.sup_norm()) << '\n';
            }
        }
        // Kac check on the stationary chain, separate stream.
        Rng kac_rng = derive_rng_stream(a.seed ^ 0x4b4143ULL, r);
        nlohmann::json rep = {{"replica", r},
                              {"upcrossings", count_upcrossings(series, a.eps)},
                              {"final_sup_norm", state.sup_norm()}};
        try {
            const ReturnTimeStats kac = mean_return_time(kac_rng, a.eps, a.steps, a.theta);
            rep["mean_return_time"] = kac.mean_return_time;
            rep["occupation"] = kac.occupation;
            rep["visits"] = kac.visits;
        } catch (const std::exception&) {
            rep["mean_return_time"] = nullptr;
        }
        reps.push_back(rep);
    }
    nlohmann::json summary = {{"theta", a.theta}, {"eps", a.eps}, {"steps", a.steps}, {"replicas", reps}};
    // Stationary mass of {P1 > 1 - eps} under PoiDir(1), eps <= 1/2.
    if (a.theta == 1.0 && a.eps <= 0.5) {
        const double nu = -std::log1p(-a.eps);
        summary["stationary_probability"] = nu;
        summary["kac_mean_return_time"] = 1.0 / nu;
    }
    std::ofstream js(dir / "summary.json", std::ios::binary);
    js << summary.dump(2) << '\n';
    if (!csv || !js) throw std::runtime_error("write failed in " + dir.string());
    return 0;
}

int run_fspeed(std::size_t n, std::size_t rho, std::size_t steps, std::uint64_t seed, bool lazy) {
    Rng rng = derive_rng_stream(seed, 0);
    const PermTrajectory traj = make_cfdp_trajectory(rng, n, steps);
    const auto v0 = static_cast<Element>(uniform_index(rng, n));
    const auto tv = compare_finite_vs_infinite(traj, v0, rho, lazy ? WalkKernel::Lazy : WalkKernel::Simple);
    std::cout << "i,tv\n";
    for (std::size_t i = 0; i < tv.size(); ++i) std::cout << (i + 1) << ',' << format_double(tv[i]) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic random permutations: walks, drop-down times and limit profiles"};
    app.require_subcommand(1);

    ExperimentConfig config;
    std::string dynamics = "cfdp";
    auto* sim = app.add_subcommand("simulate", "Run trials of a dynamics and write CSV/JSON");
    sim->add_option("--dynamics", dynamics, "cdp, cfdp or deg2")->check(CLI::IsMember({"cdp", "cfdp", "deg2"}));
    sim->add_option("--n", config.n, "Number of elements")->required();
    sim->add_option("--trials", config.trials, "Number of trials");
    sim->add_option("--seed", config.master_seed, "Master seed");
    sim->add_option("--horizon", config.horizon, "Run length in units of n (default: cdp (n-1)/n, else 3)");
    sim->add_option("--grid-step", config.grid_step, "Spacing of recorded s = t/n");
    sim->add_option("--eps-exponent", config.eps_exponent, "Drop-down gate eps_n = n^x");
    sim->add_option("--alt-eps-exponent", config.alt_eps_exponent, "Second gate, reported alongside");
    sim->add_option("--local-eps", config.local_eps, "Local mixing threshold");
    sim->add_flag("--pin-v0", config.pin_v0, "Start the walk at element 1");
    sim->add_option("--threads", config.threads, "Worker threads (0: all cores)");
    sim->add_option("--out", config.out_dir, "Output directory (default: CSV to stdout)");

    double umax = 40.0;
    double step = 1e-3;
    std::string limits_out;
    auto* lim = app.add_subcommand("limits", "Tabulate zeta, phi and eta(phi)");
    lim->add_option("--umax", umax, "Largest u");
    lim->add_option("--step", step, "Grid spacing (1/2 must be a grid point)");
    lim->add_option("--out", limits_out, "Output file (default: stdout)");

    CouplingArgs ca;
    auto* cpl = app.add_subcommand("coupling", "Split-merge coupling against PoiDir");
    cpl->add_option("--theta", ca.theta, "Split probability / PoiDir parameter");
    cpl->add_option("--eps", ca.eps, "Level 1 - eps for upcrossings and return times");
    cpl->add_option("--steps", ca.steps, "Steps per replica");
    cpl->add_option("--replicas", ca.replicas, "Independent replicas");
    cpl->add_option("--seed", ca.seed, "Master seed");
    cpl->add_option("--every", ca.every, "Write every k-th step");
    cpl->add_option("--out", ca.out, "Output directory")->required();

    std::size_t fn = 100;
    std::size_t rho = 0;
    std::size_t fsteps = 50;
    std::uint64_t fseed = 1;
    bool lazy = false;
    auto* fsp = app.add_subcommand("fspeed", "Finite-speed versus infinite-speed walk");
    fsp->add_option("--n", fn, "Number of elements");
    fsp->add_option("--rho", rho, "Walk steps per move (default 10 n^2)");
    fsp->add_option("--steps", fsteps, "Transpositions");
    fsp->add_option("--seed", fseed, "Seed");
    fsp->add_flag("--lazy", lazy, "Use the lazy kernel");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            config.dynamics = parse_dynamics(dynamics);
            return run_simulate(config);
        }
        if (*lim) return run_limits(umax, step, limits_out);
        if (*cpl) return run_coupling(ca);
        if (*fsp) return run_fspeed(fn, rho ? rho : 10 * fn * fn, fsteps, fseed, lazy);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
