// Verification battery: every model/simulator/learner/oracle/lower-bound
// property check, each reported as (name, measured value, bound, pass).
// The CLI `verify` subcommand prints these; the acceptance suite reuses the
// same functions with its own pinned tolerances.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "glauber/experiment.hpp"
#include "glauber/graphgen.hpp"
#include "glauber/learner.hpp"
#include "glauber/lowerbound.hpp"
#include "glauber/oracle.hpp"
#include "glauber/parallel.hpp"
#include "glauber/simulate.hpp"

namespace glauber {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::string note;
};

inline CheckResult check_le(std::string name, double value, double bound, std::string note = "") {
    return CheckResult{std::move(name), value, bound, value <= bound, std::move(note)};
}

inline CheckResult check_ge(std::string name, double value, double bound, std::string note = "") {
    return CheckResult{std::move(name), value, bound, value >= bound, std::move(note)};
}

inline void print_checks(std::ostream& out, const std::vector<CheckResult>& checks) {
    for (const auto& c : checks) {
        out << (c.pass ? "PASS" : "FAIL") << ' ' << c.name << " value=" << std::setprecision(10)
            << c.value << " bound=" << c.bound;
        if (!c.note.empty()) out << " (" << c.note << ')';
        out << '\n';
    }
}

inline bool all_pass(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

struct VerifyEffort {
    std::uint64_t stationarity_runs = 100000;
    std::uint64_t lemma2_reps = 1000000;
    std::uint64_t window_freq_count = 100000;
    std::uint64_t ks_gaps = 10000;
    std::uint64_t ad_reps = 20000;
    int seed_trials = 100;
    std::uint64_t seed = 20240817;
};

namespace battery {

/// Shared small-model battery (p <= 8): varied topologies, mixed coupling
/// signs, degrees 1 through 4.
inline std::vector<IsingModel> small_models() {
    std::vector<IsingModel> models;
    models.emplace_back(single_edge_graph(2), CouplingMap{{{0, 1}, 0.5}}, ParamBounds{0.1, 1.0, 1});
    models.emplace_back(single_edge_graph(2), CouplingMap{{{0, 1}, -0.5}}, ParamBounds{0.1, 1.0, 1});
    models.emplace_back(cycle_graph(3), CouplingMap{{{0, 1}, 0.8}, {{1, 2}, 0.8}, {{0, 2}, 0.8}},
                        ParamBounds{0.5, 1.0, 2});
    models.emplace_back(
        Graph(4, {{0, 1}, {0, 2}, {0, 3}}),
        CouplingMap{{{0, 1}, 0.3}, {{0, 2}, -0.3}, {{0, 3}, 0.8}}, ParamBounds{0.3, 1.0, 3});
    {
        CouplingMap theta;
        Graph g = cycle_graph(5);
        int sign = 1;
        for (const auto& e : g.edges()) {
            theta[e] = 0.6 * sign;
            sign = -sign;
        }
        models.emplace_back(std::move(g), std::move(theta), ParamBounds{0.6, 0.6, 2});
    }
    {
        Graph g = path_graph(6);
        CouplingMap theta;
        double mags[] = {0.2, 0.95, 0.4, 0.75, 0.55};
        int k = 0;
        for (const auto& e : g.edges()) theta[e] = (k % 2 ? -1.0 : 1.0) * mags[k % 5], ++k;
        models.emplace_back(std::move(g), std::move(theta), ParamBounds{0.2, 1.0, 2});
    }
    {
        // Two disjoint 4-cliques on p = 8.
        Graph g = clique_ensemble_graph(8, 3);
        CouplingMap theta;
        int k = 0;
        for (const auto& e : g.edges()) theta[e] = (k % 3 == 0 ? -0.9 : 0.4), ++k;
        models.emplace_back(std::move(g), std::move(theta), ParamBounds{0.4, 0.9, 3});
    }
    {
        Graph g = random_regular_graph(8, 3, RngSeed{7, 0});
        CouplingMap theta;
        int k = 0;
        for (const auto& e : g.edges()) theta[e] = (k % 2 ? 0.7 : -0.7), ++k;
        models.emplace_back(std::move(g), std::move(theta), ParamBounds{0.7, 0.7, 3});
    }
    return models;
}

// ---------------------------------------------------------------- ising ----

inline std::vector<CheckResult> ising_checks() {
    std::vector<CheckResult> out;
    const auto models = small_models();

    // Complement rule, Markov property, and neighbor monotonicity, swept
    // exhaustively over all configurations of every battery model.
    double complement_worst = 0.0;
    double markov_worst = 0.0;
    double monotone_worst = 0.0;  // most negative sign(theta) * (P+(sj=+1) - P+(sj=-1))
    for (const auto& model : models) {
        const int p = model.node_count();
        for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
            SpinConfiguration config = config_of_mask(mask, p);
            for (int i = 0; i < p; ++i) {
                const double field = local_field(model, config, i);
                const double plus = update_prob_plus_from_field(field);
                const double minus = update_prob_plus_from_field(-field);
                complement_worst = std::max(complement_worst, std::abs(plus + minus - 1.0));
                for (int u = 0; u < p; ++u) {
                    if (u == i) continue;
                    SpinConfiguration flipped = config;
                    flipped.flip(u);
                    const double after = update_prob_plus(model, flipped, i);
                    if (!model.graph().has_edge(i, u)) {
                        markov_worst = std::max(markov_worst, std::abs(after - plus));
                    } else {
                        const double theta = model.coupling(i, u);
                        const double delta = (flipped[u] == 1 ? after - plus : plus - after);
                        monotone_worst = std::min(monotone_worst, (theta > 0 ? delta : -delta));
                    }
                }
            }
        }
    }
    out.push_back(check_le("ising.prob_complement", complement_worst, 1e-15));
    out.push_back(check_le("ising.markov_nonneighbor", markov_worst, 0.0));
    out.push_back(check_ge("ising.monotone_in_neighbor", monotone_worst, 0.0));

    // Update-probability floor, exhaustive on p <= 10.
    double floor_margin = 1e300;
    auto sweep_floor = [&floor_margin](const IsingModel& model) {
        const auto& b = model.bounds();
        const double floor = min_update_prob(b.beta, b.max_degree);
        for (std::uint32_t mask = 0; mask < (1u << model.node_count()); ++mask) {
            SpinConfiguration config = config_of_mask(mask, model.node_count());
            for (int i = 0; i < model.node_count(); ++i) {
                const double plus = update_prob_plus(model, config, i);
                floor_margin = std::min(floor_margin, std::min(plus, 1.0 - plus) - floor);
            }
        }
    };
    for (const auto& model : models) sweep_floor(model);
    {
        Graph g = cycle_graph(10);
        CouplingMap theta;
        for (const auto& e : g.edges()) theta[e] = 0.9;
        sweep_floor(IsingModel(std::move(g), std::move(theta), ParamBounds{0.9, 0.9, 2}));
    }
    out.push_back(check_ge("ising.eq3_update_floor", floor_margin, 0.0, "min(P+,P-) - e^{-2bd}/2"));
    return out;
}

// ------------------------------------------------------------- simulate ----

inline std::vector<CheckResult> simulate_checks(const VerifyEffort& effort) {
    std::vector<CheckResult> out;
    const RngSeed seed{effort.seed, 1};

    // Bitwise determinism of traces under a fixed seed.
    {
        CouplingMap theta{{{0, 1}, 0.5}};
        IsingModel model(single_edge_graph(2), theta, ParamBounds{0.5, 0.5, 1});
        const auto a = simulate_ct(model, SpinConfiguration::all_plus(2), 50.0, seed);
        const auto b = simulate_ct(model, SpinConfiguration::all_plus(2), 50.0, seed);
        bool same = a.events().size() == b.events().size();
        if (same)
            for (size_t k = 0; k < a.events().size(); ++k)
                same = same && a.events()[k].time == b.events()[k].time &&
                       a.events()[k].node == b.events()[k].node &&
                       a.events()[k].spin == b.events()[k].spin;
        out.push_back(CheckResult{"sim.determinism", same ? 0.0 : 1.0, 0.0, same, ""});
    }

    // Inter-update gaps of one node against Exponential(1); KS at the 0.001
    // level, critical value sqrt(ln(2/a)/2) / sqrt(N).
    {
        IsingModel model(empty_graph(2), {}, ParamBounds{1.0, 1.0, 1});
        const double horizon = static_cast<double>(effort.ks_gaps) * 1.05 + 200.0;
        const Trace trace = simulate_ct(model, SpinConfiguration::all_plus(2), horizon,
                                        substream(seed, 1));
        std::vector<double> gaps;
        double prev = 0.0;
        for (auto idx : trace.node_events(0)) {
            const double t = trace.event(idx).time;
            gaps.push_back(t - prev);
            prev = t;
        }
        gaps.resize(std::min<size_t>(gaps.size(), effort.ks_gaps));
        std::sort(gaps.begin(), gaps.end());
        double ks = 0.0;
        const double n = static_cast<double>(gaps.size());
        for (size_t k = 0; k < gaps.size(); ++k) {
            const double cdf = -std::expm1(-gaps[k]);
            ks = std::max(ks, std::max(std::abs((static_cast<double>(k) + 1.0) / n - cdf),
                                       std::abs(cdf - static_cast<double>(k) / n)));
        }
        const double crit = std::sqrt(std::log(2.0 / 0.001) / 2.0) / std::sqrt(n);
        out.push_back(check_le("sim.ks_gaps_exponential", ks, crit,
                               "N=" + std::to_string(gaps.size())));
    }

    // Empirical per-node update rate on a 9-cycle: Poisson rate 1.
    {
        Graph g = cycle_graph(9);
        CouplingMap theta;
        for (const auto& e : g.edges()) theta[e] = 0.4;
        IsingModel model(std::move(g), std::move(theta), ParamBounds{0.4, 0.4, 2});
        const double T = 1e5;
        const Trace trace = simulate_ct(model, SpinConfiguration::all_plus(9), T, substream(seed, 2));
        double worst = 0.0;
        for (int i = 0; i < 9; ++i)
            worst = std::max(worst,
                             std::abs(static_cast<double>(trace.node_events(i).size()) / T - 1.0));
        out.push_back(check_le("sim.ct_update_rate", worst, 0.02));
    }

    // Discrete chain: uniform node picks and convergence to the Gibbs law.
    {
        IsingModel model(empty_graph(4), {}, ParamBounds{1.0, 1.0, 1});
        const std::int64_t n = 1000000;
        const Trace trace = simulate_dt(model, SpinConfiguration::all_plus(4), n, substream(seed, 3));
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double freq = static_cast<double>(trace.node_events(i).size()) /
                                static_cast<double>(n - 1);
            worst = std::max(worst, std::abs(freq - 0.25));
        }
        out.push_back(check_le("sim.dt_node_pick_uniform", worst, 0.002));
    }
    {
        CouplingMap theta{{{0, 1}, 0.5}};
        IsingModel model(single_edge_graph(2), theta, ParamBounds{0.5, 0.5, 1});
        const auto dist = exact_gibbs(model);
        const std::int64_t n = 1000000;
        const Trace trace = simulate_dt(model, SpinConfiguration::all_plus(2), n, substream(seed, 4));
        // Replay, tallying the state after every step past a short burn-in.
        SpinConfiguration config = trace.initial();
        std::vector<std::int64_t> counts(4, 0);
        std::int64_t tallied = 0;
        const auto& events = trace.events();
        for (size_t k = 0; k < events.size(); ++k) {
            config.set(events[k].node, events[k].spin);
            if (k >= 1000) {
                ++counts[mask_of_config(config)];
                ++tallied;
            }
        }
        double tv = 0.0;
        for (std::uint32_t m = 0; m < 4; ++m)
            tv += std::abs(static_cast<double>(counts[m]) / static_cast<double>(tallied) -
                           dist.prob(m));
        out.push_back(check_le("sim.dt_gibbs_tv", 0.5 * tv, 0.01));
    }

    // Exact detailed balance of the embedded discrete chain, p <= 6.
    {
        double worst = 0.0;
        for (const auto& model : small_models()) {
            const int p = model.node_count();
            if (p > 6) continue;
            const auto dist = exact_gibbs(model);
            for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
                SpinConfiguration config = config_of_mask(mask, p);
                for (int i = 0; i < p; ++i) {
                    const double plus = update_prob_plus(model, config, i);
                    const std::uint32_t other = mask ^ (1u << i);
                    const bool to_plus = (other >> i) & 1u;
                    const double forward = dist.prob(mask) * (to_plus ? plus : 1.0 - plus) /
                                           static_cast<double>(p);
                    SpinConfiguration oconfig = config_of_mask(other, p);
                    const double oplus = update_prob_plus(model, oconfig, i);
                    const double backward = dist.prob(other) *
                                            ((mask >> i) & 1u ? oplus : 1.0 - oplus) /
                                            static_cast<double>(p);
                    worst = std::max(worst, std::abs(forward - backward));
                }
            }
        }
        out.push_back(check_le("sim.detailed_balance_residual", worst, 1e-12));
    }

    // Stationarity: Gibbs-started chains stay Gibbs-distributed.
    {
        Graph g = cycle_graph(4);
        CouplingMap theta;
        for (const auto& e : g.edges()) theta[e] = 0.5;
        IsingModel model(std::move(g), std::move(theta), ParamBounds{0.5, 0.5, 2});
        const double tv = stationarity_tv(model, 2.0, effort.stationarity_runs, substream(seed, 5));
        out.push_back(check_le("sim.stationarity_tv_p4", tv, 0.02));
    }
    {
        Graph g = path_graph(6);
        CouplingMap theta;
        int k = 0;
        for (const auto& e : g.edges()) theta[e] = (k++ % 2 ? -0.6 : 0.8);
        IsingModel model(std::move(g), std::move(theta), ParamBounds{0.6, 0.8, 2});
        const double tv = stationarity_tv(model, 2.0, effort.stationarity_runs, substream(seed, 6));
        out.push_back(check_le("sim.stationarity_tv_p6", tv, 0.02));
    }

    // Free spins started all-plus mix to uniform.
    {
        IsingModel model(empty_graph(4), {}, ParamBounds{1.0, 1.0, 1});
        std::vector<std::int64_t> counts(16, 0);
        const std::uint64_t runs = effort.stationarity_runs;
        for (std::uint64_t r = 0; r < runs; ++r) {
            SpinConfiguration config = SpinConfiguration::all_plus(4);
            RngSeed sub = substream(substream(seed, 7), r);
            Rng clock = clock_rng(sub);
            Rng spins = spin_rng(sub);
            evolve_ct(model, config, 50.0, clock, spins);
            ++counts[mask_of_config(config)];
        }
        double tv = 0.0;
        for (auto c : counts)
            tv += std::abs(static_cast<double>(c) / static_cast<double>(runs) - 1.0 / 16.0);
        out.push_back(check_le("sim.free_spin_mixing_tv", 0.5 * tv, 0.02));
    }

    // state_at(horizon) equals a sequential replay of all events.
    {
        const auto& model = small_models()[5];
        const Trace trace = simulate_ct(model, SpinConfiguration::all_plus(model.node_count()),
                                        200.0, substream(seed, 8));
        SpinConfiguration replay = trace.initial();
        for (const auto& ev : trace.events()) replay.set(ev.node, ev.spin);
        const bool same = replay == trace.state_at(trace.horizon());
        out.push_back(CheckResult{"sim.state_replay", same ? 0.0 : 1.0, 0.0, same, ""});
    }
    return out;
}

// -------------------------------------------------------------- learner ----

inline std::vector<CheckResult> learner_checks(const VerifyEffort& effort) {
    std::vector<CheckResult> out;
    const RngSeed seed{effort.seed, 100};

    // Empirical frequency of the window event A against its closed form,
    // for three window lengths.
    for (const double L : {0.3, 1.0, 3.0}) {
        IsingModel model(empty_graph(2), {}, ParamBounds{1.0, 1.0, 1});
        const double q = window_event_prob(L);
        const std::uint64_t k_max = effort.window_freq_count;
        const Trace trace = simulate_ct(model, SpinConfiguration::all_plus(2),
                                        static_cast<double>(k_max) * L,
                                        substream(seed, static_cast<std::uint64_t>(L * 10)));
        std::uint64_t hits = 0;
        for (std::uint64_t k = 1; k <= k_max; ++k) hits += event_A(trace, 0, 1, k, L);
        const double freq = static_cast<double>(hits) / static_cast<double>(k_max);
        std::ostringstream name;
        name << "learner.window_event_freq_L" << L;
        out.push_back(check_le(name.str(), std::abs(freq - q),
                               4.0 * std::sqrt(q / static_cast<double>(k_max)),
                               "q=" + std::to_string(q)));
    }

    // Statistic range and the A-and-B implication, plus agreement between
    // the paired scan and a direct per-window evaluation.
    {
        const auto& model = small_models()[6];  // two 4-cliques, p = 8
        const double L = 1.0;
        const Trace trace = simulate_ct(model, SpinConfiguration::all_plus(8), 500.0,
                                        substream(seed, 11));
        const auto k_max = window_count(trace.horizon(), L);
        bool range_ok = true, implication_ok = true, agreement_ok = true;
        LearnerParams params;
        params.L = L;
        params.tau = 1.0;
        for (int i = 0; i < 8 && range_ok && implication_ok; ++i) {
            for (int j = i + 1; j < 8; ++j) {
                long long direct = 0;
                for (std::uint64_t k = 1; k <= k_max; ++k) {
                    const int x = edge_statistic(trace, i, j, k, L);
                    if (x != -2 && x != 0 && x != 2) range_ok = false;
                    if (x != 0 && !(event_A(trace, i, j, k, L) && event_B(trace, j, k, L)))
                        implication_ok = false;
                    direct += x;
                }
                const double mean = pair_mean(trace, i, j, params);
                if (mean != static_cast<double>(direct) / static_cast<double>(k_max))
                    agreement_ok = false;
            }
        }
        out.push_back(CheckResult{"learner.statistic_range", range_ok ? 0.0 : 1.0, 0.0, range_ok, ""});
        out.push_back(CheckResult{"learner.nonzero_implies_AB", implication_ok ? 0.0 : 1.0, 0.0,
                                  implication_ok, ""});
        out.push_back(CheckResult{"learner.pair_mean_matches_direct", agreement_ok ? 0.0 : 1.0, 0.0,
                                  agreement_ok, ""});
    }

    // Two-node statistic mean against its exact closed form
    // 2q(2a-1)a(1-a) with a = sigmoid(2 theta): the i-j-i pattern aligns
    // sigma_i with sigma_j w.p. a, the flip event leaves sigma_i(L/3)
    // uniform by Bayes, and the final update re-aligns w.p. a. Monotone in
    // theta over the weak range {0.2, 0.5} (the mean peaks near theta 0.66
    // and declines beyond, so the strong end is excluded on purpose).
    {
        const double L = 1.0, T = 800000.0;
        const double q = window_event_prob(L);
        LearnerParams params;
        params.L = L;
        params.tau = 1.0;
        std::vector<double> means;
        double closed_worst = 0.0;
        for (const double theta : {0.2, 0.5, 1.0}) {
            CouplingMap cm{{{0, 1}, theta}};
            IsingModel model(single_edge_graph(2), cm, ParamBounds{theta, theta, 1});
            const Trace trace = simulate_ct(model, SpinConfiguration::all_plus(2), T,
                                            substream(seed, 20 + static_cast<std::uint64_t>(theta * 10)));
            const double mean = pair_mean(trace, 0, 1, params);
            means.push_back(mean);
            const double a = update_prob_plus_from_field(theta);
            const double predicted = 2.0 * q * (2.0 * a - 1.0) * a * (1.0 - a);
            const double sd = 2.0 * std::sqrt(q / static_cast<double>(window_count(T, L)));
            closed_worst = std::max(closed_worst, std::abs(mean - predicted) / sd);
        }
        out.push_back(check_le("learner.mean_matches_closed_form", closed_worst, 4.0,
                               "|mean - 2q(2a-1)a(1-a)| in sd units"));
        out.push_back(check_ge("learner.signal_monotone_weak_range", means[1] - means[0], 0.0,
                               "mean(0.5) - mean(0.2)"));
    }

    // Seeded batteries: positive signal for an edge, noise band for a
    // non-edge (both p = 2, 100 seeds each).
    {
        const double L = 1.0, T = 60000.0;
        LearnerParams params;
        params.L = L;
        params.tau = 1.0;
        const double q = window_event_prob(L);
        int positive = 0;
        CouplingMap cm{{{0, 1}, 1.0}};
        IsingModel edge_model(single_edge_graph(2), cm, ParamBounds{1.0, 1.0, 1});
        IsingModel free_model(empty_graph(2), {}, ParamBounds{1.0, 1.0, 1});
        int inside = 0;
        const double band = 6.0 * std::sqrt(q / static_cast<double>(window_count(T, L)));
        for (int s = 0; s < effort.seed_trials; ++s) {
            const RngSeed trial = substream(seed, 1000 + static_cast<std::uint64_t>(s));
            Rng init_rng(trial.seed, trial.stream ^ 0xABCDULL);
            const auto init = SpinConfiguration::uniform_random(2, init_rng);
            if (pair_mean(simulate_ct(edge_model, init, T, trial), 0, 1, params) > 0.0) ++positive;
            if (std::abs(pair_mean(simulate_ct(free_model, init, T, substream(trial, 7)), 0, 1,
                                   params)) <= band)
                ++inside;
        }
        out.push_back(check_ge("learner.edge_sign_positive_seeds", positive,
                               0.99 * effort.seed_trials));
        out.push_back(check_ge("learner.nonedge_band_seeds", inside, 0.99 * effort.seed_trials));
    }

    // Shifting a trace by whole windows (with a burn-in that reconstructs
    // the boundary state) leaves every window statistic unchanged.
    {
        const double L = 3.0;
        std::vector<UpdateEvent> base_events = {
            {0.4, 0, 1}, {1.3, 1, -1}, {2.6, 0, -1},   // window 1: A pattern for (0,1)
            {3.2, 1, 1}, {4.1, 0, 1},                   // window 2: no final-third update
            {6.3, 0, -1}, {7.2, 1, 1}, {8.8, 0, 1},     // window 3: A pattern again
        };
        const SpinConfiguration init(std::vector<std::int8_t>{1, 1});
        const Trace trace(2, TraceMode::continuous, init, base_events, 9.0);

        const int shift = 2;
        std::vector<UpdateEvent> shifted = {{0.5, 0, 1}, {0.6, 1, 1}};  // burn-in restores init
        for (const auto& ev : base_events)
            shifted.push_back({ev.time + shift * L, ev.node, ev.spin});
        const Trace shifted_trace(2, TraceMode::continuous,
                                  SpinConfiguration(std::vector<std::int8_t>{-1, -1}), shifted,
                                  9.0 + shift * L);
        bool same = true;
        for (std::uint64_t k = 1; k <= 3; ++k)
            same = same && edge_statistic(trace, 0, 1, k, L) ==
                               edge_statistic(shifted_trace, 0, 1, k + shift, L);
        out.push_back(CheckResult{"learner.window_shift_invariance", same ? 0.0 : 1.0, 0.0, same, ""});
    }
    return out;
}

// --------------------------------------------------------------- oracle ----

inline std::vector<CheckResult> oracle_checks(const VerifyEffort& effort) {
    std::vector<CheckResult> out;
    const auto models = small_models();
    const RngSeed seed{effort.seed, 200};

    // Gibbs table sanity: normalization and global flip symmetry.
    {
        double norm_worst = 0.0, flip_worst = 0.0;
        for (const auto& model : models) {
            const auto dist = exact_gibbs(model);
            double total = 0.0;
            const std::uint32_t n = static_cast<std::uint32_t>(dist.state_count());
            for (std::uint32_t m = 0; m < n; ++m) total += dist.prob(m);
            norm_worst = std::max(norm_worst, std::abs(total - 1.0));
            for (std::uint32_t m = 0; m < n; ++m)
                flip_worst = std::max(flip_worst, std::abs(dist.prob(m) - dist.prob(~m & (n - 1))));
        }
        out.push_back(check_le("oracle.gibbs_normalization", norm_worst, 1e-12));
        out.push_back(check_le("oracle.gibbs_flip_symmetry", flip_worst, 1e-14));
    }

    // Identity, probability floor, squeeze, and route agreement over every
    // ordered pair and every neighborhood assignment of the battery.
    {
        double residual_worst = 0.0;
        double floor_worst = 1e300;
        double route_worst = 0.0;
        bool squeeze_ok = true;
        for (const auto& model : models) {
            const auto& b = model.bounds();
            const double floor = min_update_prob(b.beta, b.max_degree);
            const int p = model.node_count();
            for (int i = 0; i < p; ++i) {
                for (int j = 0; j < p; ++j) {
                    if (i == j) continue;
                    for (const auto& x : enumerate_assignments(model, i, j)) {
                        residual_worst =
                            std::max(residual_worst, edge_identity_residual(model, i, j, x));
                        const auto c = exact_conditionals(model, i, j, x);
                        for (double v : {c.p_plus, c.p_minus}) {
                            floor_worst = std::min(floor_worst, v - floor);
                            floor_worst = std::min(floor_worst, (1.0 - floor) - v);
                        }
                        const auto via_table = exact_conditionals_from_table(model, i, j, x);
                        route_worst = std::max({route_worst,
                                                std::abs(via_table.p_plus - c.p_plus),
                                                std::abs(via_table.p_minus - c.p_minus)});
                        if (model.graph().has_edge(i, j) && !squeeze_check(model, i, j, x))
                            squeeze_ok = false;
                    }
                }
            }
        }
        out.push_back(check_le("oracle.eq5_identity_residual", residual_worst, 1e-10));
        out.push_back(check_ge("oracle.eq3_conditional_floor", floor_worst, 0.0));
        out.push_back(check_le("oracle.conditional_route_agreement", route_worst, 1e-12));
        out.push_back(CheckResult{"oracle.squeeze_all_assignments", squeeze_ok ? 0.0 : 1.0, 0.0,
                                  squeeze_ok, ""});
    }

    // Odds-ratio sandwich on the full (a, b) grid.
    {
        std::int64_t violations = 0;
        std::int64_t cells = 0;
        for (int ia = 1; ia <= 500; ++ia) {
            const double a = ia * 1e-3;
            for (int ib = ia; ib <= 999; ++ib) {
                const double b = ib * 1e-3;
                ++cells;
                if (!lemma1_check(a, b).holds) ++violations;
            }
        }
        out.push_back(check_le("oracle.lemma1_grid", static_cast<double>(violations), 0.0,
                               std::to_string(cells) + " grid cells"));
    }

    // Conditional-expectation envelopes for the window statistic, Monte
    // Carlo with the production simulator. Edges: sign(theta) E_x[X] must
    // beat the closed-form floor. Non-edges: |E_x[X]| must stay under 2qLd.
    {
        struct EnvelopeCase {
            IsingModel model;
            int i, j;
            double L;
            SpinConfiguration x;
            bool is_edge;
        };
        std::vector<EnvelopeCase> cases;
        for (const double theta : {0.5, -0.5, 1.0, -1.0}) {
            CouplingMap cm{{{0, 1}, theta}};
            IsingModel model(single_edge_graph(2), cm,
                             ParamBounds{std::abs(theta), std::abs(theta), 1});
            for (const double L : {0.1, 1.0}) {
                cases.push_back({model, 0, 1, L, SpinConfiguration::all_plus(2), true});
                cases.push_back({model, 0, 1, L,
                                 SpinConfiguration(std::vector<std::int8_t>{1, -1}), true});
            }
        }
        for (const double theta : {0.5, -0.5, 1.0, -1.0}) {
            Graph star(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
            CouplingMap cm;
            for (const auto& e : star.edges()) cm[e] = theta;
            IsingModel model(std::move(star), std::move(cm),
                             ParamBounds{std::abs(theta), std::abs(theta), 4});
            for (const double L : {0.1, 1.0}) {
                cases.push_back({model, 1, 2, L, SpinConfiguration::all_plus(5), false});
                cases.push_back({model, 1, 2, L,
                                 SpinConfiguration(std::vector<std::int8_t>{1, -1, 1, -1, 1}),
                                 false});
            }
        }

        std::vector<double> edge_margin(cases.size(), 0.0);
        std::vector<double> nonedge_margin(cases.size(), 0.0);
        parallel_for(cases.size(), [&](std::uint64_t c) {
            const auto& cs = cases[c];
            const auto est = mc_expected_statistic(cs.model, cs.x, cs.i, cs.j, cs.L,
                                                   effort.lemma2_reps, substream(seed, 10 + c));
            const auto& bd = cs.model.bounds();
            if (cs.is_edge) {
                const double theta = cs.model.coupling(cs.i, cs.j);
                const double lower =
                    lemma2_edge_lower_bound(std::abs(theta), bd.max_degree, bd.beta, cs.L);
                const double sign = theta > 0 ? 1.0 : -1.0;
                edge_margin[c] = sign * est.mean - (lower - 3.0 * est.stderr_);
            } else {
                const double upper = lemma2_nonedge_upper_bound(bd.max_degree, cs.L);
                nonedge_margin[c] = (upper + 3.0 * est.stderr_) - std::abs(est.mean);
            }
        });
        double edge_worst = 1e300, nonedge_worst = 1e300;
        for (size_t c = 0; c < cases.size(); ++c) {
            if (cases[c].is_edge) edge_worst = std::min(edge_worst, edge_margin[c]);
            else nonedge_worst = std::min(nonedge_worst, nonedge_margin[c]);
        }
        out.push_back(check_ge("oracle.lemma2_edge_envelope", edge_worst, 0.0,
                               "sign(theta) mean - (bound - 3 se), worst case"));
        out.push_back(check_ge("oracle.lemma2_nonedge_envelope", nonedge_worst, 0.0,
                               "(2qLd + 3 se) - |mean|, worst case"));
    }

    // Exactly-zero mean sanity case: free two-node model.
    {
        IsingModel model(empty_graph(2), {}, ParamBounds{1.0, 1.0, 1});
        const auto est = mc_expected_statistic(model, SpinConfiguration::all_plus(2), 0, 1, 1.0,
                                               std::max<std::uint64_t>(effort.lemma2_reps / 10, 1000),
                                               substream(seed, 90));
        out.push_back(check_le("oracle.free_pair_mean_zero", std::abs(est.mean),
                               3.0 * est.stderr_));
    }

    // Event D frequency and the A/D independence battery.
    {
        Graph star(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
        CouplingMap cm;
        for (const auto& e : star.edges()) cm[e] = 0.5;
        IsingModel model(std::move(star), std::move(cm), ParamBounds{0.5, 0.5, 4});
        const double L = 0.5;
        const std::uint64_t k_max = 20000;
        const Trace trace = simulate_ct(model, SpinConfiguration::all_plus(5),
                                        static_cast<double>(k_max) * L, substream(seed, 91));
        std::uint64_t hits = 0;
        for (std::uint64_t k = 1; k <= k_max; ++k)
            hits += event_D(trace, model.graph(), 0, 1, k, L);
        const double freq = static_cast<double>(hits) / static_cast<double>(k_max);
        const double expected = std::exp(-L * 3.0);  // three neighbors beside j
        out.push_back(check_le("oracle.event_D_frequency", std::abs(freq - expected),
                               4.0 / std::sqrt(static_cast<double>(k_max))));

        const auto ad = independence_AD_check(model, 0, 1, L, effort.ad_reps, substream(seed, 92));
        out.push_back(check_le("oracle.independence_AD", ad.discrepancy, ad.tolerance));
    }
    {
        CouplingMap cm{{{0, 1}, 0.5}};
        IsingModel model(single_edge_graph(2), cm, ParamBounds{0.5, 0.5, 1});
        const auto ad = independence_AD_check(model, 0, 1, 0.5, effort.ad_reps, substream(seed, 93));
        const bool exact = ad.p_d == 1.0 && ad.p_ad == ad.p_a;
        out.push_back(CheckResult{"oracle.independence_AD_trivial_D", exact ? 0.0 : 1.0, 0.0, exact,
                                  "p=2: D always holds"});
    }
    return out;
}

// ----------------------------------------------------------- lowerbound ----

inline std::vector<CheckResult> lowerbound_checks() {
    std::vector<CheckResult> out;

    double kl_margin_worst = 1e300;       // kl_bound - kl_total
    double c1_margin_worst = 1e300;       // 4 alpha - C1
    double ratio_margin_worst = 1e300;    // e^{2 alpha} - per-update likelihood ratio
    double flip_margin_worst = 1e300;     // e^{-2 beta d/3} - P(sigma_u = -1 | magnetized)
    double mag_margin_worst = 1e300;      // bound - exact, magnetization tail
    double variant_symmetry_worst = 0.0;  // KL spread across variants
    bool construction_ok = true;
    bool fano_consistent = true;

    for (const int d : {3, 9}) {
        for (const double alpha : {0.1, 0.5}) {
            for (const double beta : {alpha, 1.0, 2.0}) {
                if (beta < alpha) continue;
                const int p = 2 * (d + 1);
                const auto ens = build_ensemble(p, d, alpha, beta);

                // Construction invariants.
                const int expected_M = (p / (d + 1)) * ((d + 1) / 2);
                if (ens.M() != expected_M || ens.M() < p / 4) construction_ok = false;
                for (const auto& variant : ens.variants) {
                    if (ens.base.coupling(variant.u, variant.v) != alpha) construction_ok = false;
                    if (variant.model.graph().edges().size() + 1 != ens.base.graph().edges().size())
                        construction_ok = false;
                }

                // Exact KL pieces; all variants agree by symmetry.
                std::vector<double> c1s, cls;
                for (const auto& variant : ens.variants) {
                    const auto base_clique = project_to_clique(ens, ens.base, variant.u);
                    const auto variant_clique = project_to_clique(ens, variant.model, variant.u);
                    c1s.push_back(exact_C1(base_clique, variant_clique));
                    cls.push_back(exact_Cl(base_clique, variant_clique, p));
                }
                for (size_t m = 1; m < c1s.size(); ++m) {
                    variant_symmetry_worst = std::max(variant_symmetry_worst,
                                                      std::abs(c1s[m] - c1s[0]));
                    variant_symmetry_worst = std::max(variant_symmetry_worst,
                                                      std::abs(cls[m] - cls[0]));
                }
                c1_margin_worst = std::min(c1_margin_worst, 4.0 * alpha - c1s[0]);
                for (const std::int64_t ratio : {1, 10, 100}) {
                    const std::int64_t n = ratio * p;
                    kl_margin_worst = std::min(kl_margin_worst,
                                               kl_bound(n, p, alpha, beta, d) -
                                                   kl_total(c1s[0], cls[0], n));
                }

                // Pointwise update-ratio and magnetized flip-probability sweeps
                // on the affected clique.
                const auto& variant = ens.variants[0];
                const auto base_clique = project_to_clique(ens, ens.base, variant.u);
                const auto variant_clique = project_to_clique(ens, variant.model, variant.u);
                const int pc = base_clique.node_count();
                const double ratio_cap = std::exp(2.0 * alpha);
                const double flip_cap = std::exp(-2.0 * beta * static_cast<double>(d) / 3.0);
                for (std::uint32_t mask = 0; mask < (1u << pc); ++mask) {
                    const SpinConfiguration sigma = config_of_mask(mask, pc);
                    const double pv = update_prob_plus(variant_clique, sigma, 0);
                    const double pb = update_prob_plus(base_clique, sigma, 0);
                    for (const double ratio :
                         {pv / pb, pb / pv, (1.0 - pv) / (1.0 - pb), (1.0 - pb) / (1.0 - pv)})
                        ratio_margin_worst = std::min(ratio_margin_worst, ratio_cap - ratio);
                    // Updates away from the removed edge see identical
                    // neighborhoods, so the two laws agree exactly there.
                    if (update_prob_plus(variant_clique, sigma, 2) !=
                        update_prob_plus(base_clique, sigma, 2))
                        construction_ok = false;
                    int magnetization = 0;
                    for (int s = 0; s < pc; ++s) magnetization += sigma[s];
                    if (static_cast<double>(magnetization) >= static_cast<double>(d) / 3.0 + 2.0)
                        flip_margin_worst = std::min(flip_margin_worst, flip_cap - (1.0 - pv));
                }

                // Magnetization tail versus its closed-form bound.
                const auto tail = magnetization_tail(variant_clique, beta);
                mag_margin_worst = std::min(mag_margin_worst, tail.bound - tail.exact);

                // Fano pipeline consistency at half the time floor.
                const double T2 = theorem2_T(p, d, alpha, beta);
                const auto n_half = static_cast<std::int64_t>(
                    std::max(1.0, std::floor(0.5 * T2 * static_cast<double>(p))));
                std::vector<double> kls(static_cast<size_t>(ens.M()),
                                        kl_total(c1s[0], cls[0], n_half));
                const auto fano = fano_bound(kls, ens.M());
                if (fano.gamma < 0.0) fano_consistent = false;
                if (fano.applicable) {
                    const double expected =
                        (std::log(static_cast<double>(ens.M()) + 1.0) - 1.0) /
                            std::log(static_cast<double>(ens.M())) - fano.gamma;
                    if (fano.risk_bound != expected || fano.risk_bound > 1.0)
                        fano_consistent = false;
                }
            }
        }
    }
    out.push_back(CheckResult{"lowerbound.ensemble_construction", construction_ok ? 0.0 : 1.0, 0.0,
                              construction_ok, "M count, removed edges, edge deltas"});
    out.push_back(check_le("lowerbound.variant_symmetry", variant_symmetry_worst, 1e-12));
    out.push_back(check_ge("lowerbound.kl_total_le_bound", kl_margin_worst, 0.0,
                           "worst bound - total over battery"));
    out.push_back(check_ge("lowerbound.c1_le_4alpha", c1_margin_worst, 0.0));
    out.push_back(check_ge("lowerbound.update_ratio_le_e2alpha", ratio_margin_worst, -1e-12));
    out.push_back(check_ge("lowerbound.magnetized_flip_prob", flip_margin_worst, 0.0));
    out.push_back(check_ge("lowerbound.magnetization_tail", mag_margin_worst, 0.0));
    out.push_back(CheckResult{"lowerbound.fano_consistency", fano_consistent ? 0.0 : 1.0, 0.0,
                              fano_consistent, ""});

    // Path-space enumeration against the C1 + (n-1) Cl decomposition on a
    // single 4-node clique (ambient p equals the clique size).
    {
        const auto ens = build_ensemble(4, 3, 0.3, 1.0);
        const auto& variant = ens.variants[0];
        const auto base_clique = project_to_clique(ens, ens.base, variant.u);
        const auto variant_clique = project_to_clique(ens, variant.model, variant.u);
        const double c1 = exact_C1(base_clique, variant_clique);
        const double cl = exact_Cl(base_clique, variant_clique, 4);
        double worst = 0.0;
        for (const std::int64_t n : {2, 3}) {
            const double direct = path_space_kl(base_clique, variant_clique, n);
            worst = std::max(worst, std::abs(direct - kl_total(c1, cl, n)));
        }
        out.push_back(check_le("lowerbound.path_space_kl_match", worst, 1e-10));
    }
    return out;
}

}  // namespace battery

/// Runs every battery whose group name contains `filter` (empty = all).
inline std::vector<CheckResult> run_verification_suite(const std::string& filter = "",
                                                       const VerifyEffort& effort = {}) {
    std::vector<CheckResult> all;
    auto want = [&filter](const std::string& group) {
        return filter.empty() || group.find(filter) != std::string::npos;
    };
    auto append = [&all](std::vector<CheckResult> results) {
        for (auto& r : results) all.push_back(std::move(r));
    };
    if (want("ising")) append(battery::ising_checks());
    if (want("sim")) append(battery::simulate_checks(effort));
    if (want("learner")) append(battery::learner_checks(effort));
    if (want("oracle") || want("eq5") || want("eq3") || want("lemma1") || want("lemma2"))
        append(battery::oracle_checks(effort));
    if (want("lowerbound")) append(battery::lowerbound_checks());

    if (!filter.empty()) {
        std::vector<CheckResult> filtered;
        for (auto& c : all)
            if (c.name.find(filter) != std::string::npos) filtered.push_back(std::move(c));
        if (!filtered.empty()) return filtered;
    }
    return all;
}

}  // namespace glauber
