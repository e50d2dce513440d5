// Reproducible recovery experiments and the learner scaling benchmark.
// Result files are deterministic functions of (config, seed): timings are
// kept in memory only and never written to the CSV or manifest.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "glauber/graphgen.hpp"
#include "glauber/learner.hpp"
#include "glauber/oracle.hpp"
#include "glauber/parallel.hpp"
#include "glauber/simulate.hpp"

namespace glauber {

struct CouplingSpec {
    enum class Kind { constant, random_sign, file };
    Kind kind = Kind::constant;
    double value = 0.0;     // magnitude for constant / random_sign
    std::string path;       // for Kind::file
};

enum class InitialKind { uniform, all_plus, stationary };

struct ExperimentConfig {
    GraphSpec graph;
    CouplingSpec coupling;
    double alpha = 0.0;  // defaulted to |value| when 0
    double beta = 0.0;
    int d = 0;           // defaulted to the generated graph's max degree when 0
    std::string mode = "practical";  // practical | theory
    double L = 0.0;
    std::optional<double> tau;
    double T = 0.0;
    int trials = 1;
    RngSeed seed;
    bool seed_set = false;  // seeds are always explicit
    InitialKind init = InitialKind::uniform;
    bool symmetrize = false;
    std::string out_csv;
    std::string manifest;
};

struct TrialOutcome {
    bool recovered = false;
    int false_positives = 0;
    int false_negatives = 0;
    double wall_ms = 0.0;  // in-memory only
};

struct ExperimentResult {
    std::vector<TrialOutcome> trials;
    double success_rate = 0.0;
    LearnerParams params;
    IsingModel model;
};

/// Instantiates the model for a config: generate the graph, then assign
/// couplings (constant, seeded random signs, or from a model file).
inline IsingModel build_model(const ExperimentConfig& config) {
    if (config.coupling.kind == CouplingSpec::Kind::file)
        return read_model_file(config.coupling.path);

    GraphSpec gspec = config.graph;
    gspec.seed = RngSeed{config.seed.seed, config.seed.stream ^ 0x6772617068ULL};
    Graph graph = generate_graph(gspec);

    const double magnitude = std::abs(config.coupling.value);
    double alpha = config.alpha > 0.0 ? config.alpha : magnitude;
    double beta = config.beta > 0.0 ? config.beta : magnitude;
    if (graph.edges().empty() && alpha <= 0.0) alpha = beta = 1.0;  // bounds unused without edges
    int d = config.d > 0 ? config.d : graph.max_degree();
    if (d == 0) d = 1;

    CouplingMap theta;
    Rng sign_rng(config.seed.seed, config.seed.stream ^ 0x7369676eULL);
    for (const auto& e : graph.edges()) {
        double value = magnitude;
        if (config.coupling.kind == CouplingSpec::Kind::random_sign && sign_rng.bernoulli(0.5))
            value = -magnitude;
        theta[e] = value;
    }
    return IsingModel(std::move(graph), std::move(theta), ParamBounds{alpha, beta, d});
}

inline LearnerParams resolve_params(const ExperimentConfig& config, const IsingModel& model) {
    const auto& b = model.bounds();
    if (config.mode == "theory")
        return theory_params(model.node_count(), b.max_degree, b.alpha, b.beta);
    if (config.mode != "practical")
        throw std::invalid_argument("mode must be 'theory' or 'practical'");
    if (!(config.L > 0.0) || !(config.T > 0.0))
        throw std::invalid_argument("practical mode requires L > 0 and T > 0");
    return practical_params(b.max_degree, b.alpha, b.beta, config.L, config.T, config.tau);
}

inline SpinConfiguration initial_state(const ExperimentConfig& config, const IsingModel& model,
                                       RngSeed trial_seed) {
    switch (config.init) {
        case InitialKind::all_plus:
            return SpinConfiguration::all_plus(model.node_count());
        case InitialKind::stationary: {
            if (model.node_count() > 20)
                throw std::invalid_argument("stationary initial state requires p <= 20");
            Rng rng(trial_seed.seed, trial_seed.stream ^ 0x696e6974ULL);
            return config_of_mask(exact_gibbs(model).sample(rng), model.node_count());
        }
        case InitialKind::uniform:
        default: {
            Rng rng(trial_seed.seed, trial_seed.stream ^ 0x696e6974ULL);
            return SpinConfiguration::uniform_random(model.node_count(), rng);
        }
    }
}

/// Runs `trials` independent simulate-then-learn rounds and scores each
/// against the true edge set. Trials execute in parallel over substreams;
/// outcomes land in trial-index order either way.
inline ExperimentResult run_recovery_experiment(const ExperimentConfig& config) {
    if (!config.seed_set) throw std::invalid_argument("experiment requires an explicit seed");
    if (config.trials < 1) throw std::invalid_argument("trial count must be >= 1");

    const IsingModel model = build_model(config);
    const LearnerParams params = resolve_params(config, model);
    const auto& true_edges = model.graph().edges();

    ExperimentResult result{std::vector<TrialOutcome>(static_cast<size_t>(config.trials)),
                            0.0, params, model};
    parallel_for(static_cast<std::uint64_t>(config.trials), [&](std::uint64_t t) {
        const RngSeed trial_seed{config.seed.seed, config.seed.stream + 1000003ULL * (t + 1)};
        const auto start = std::chrono::steady_clock::now();
        const SpinConfiguration init = initial_state(config, model, trial_seed);
        const Trace trace = simulate_ct(model, init, params.T, trial_seed);
        const EdgeSet learned = glauber_learn(trace, params, config.symmetrize);
        TrialOutcome& outcome = result.trials[t];
        for (const auto& e : learned.edges)
            if (!model.graph().has_edge(e.first, e.second)) ++outcome.false_positives;
        for (const auto& e : true_edges)
            if (!learned.contains(e.first, e.second)) ++outcome.false_negatives;
        outcome.recovered = outcome.false_positives == 0 && outcome.false_negatives == 0;
        outcome.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start).count();
    });
    int recovered = 0;
    for (const auto& t : result.trials) recovered += t.recovered;
    result.success_rate = static_cast<double>(recovered) / static_cast<double>(config.trials);
    return result;
}

// --- persistence -------------------------------------------------------------

inline std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& config, const LearnerParams& params) {
    auto fmt = [](double v) {
        std::ostringstream os;
        os << std::setprecision(17) << v;
        return os.str();
    };
    std::vector<std::pair<std::string, std::string>> kv;
    kv.push_back({"graph", config.graph.name});
    kv.push_back({"p", std::to_string(config.graph.p)});
    kv.push_back({"d", std::to_string(config.d)});
    kv.push_back({"rows", std::to_string(config.graph.rows)});
    kv.push_back({"cols", std::to_string(config.graph.cols)});
    kv.push_back({"coupling",
                  config.coupling.kind == CouplingSpec::Kind::constant ? "constant"
                  : config.coupling.kind == CouplingSpec::Kind::random_sign ? "random-sign"
                                                                            : "file"});
    kv.push_back({"theta", fmt(config.coupling.value)});
    kv.push_back({"alpha", fmt(config.alpha)});
    kv.push_back({"beta", fmt(config.beta)});
    kv.push_back({"mode", config.mode});
    kv.push_back({"L", fmt(params.L)});
    kv.push_back({"tau", fmt(params.tau)});
    kv.push_back({"T", fmt(params.T)});
    kv.push_back({"q", fmt(params.q)});
    kv.push_back({"k_max", std::to_string(params.k_max)});
    kv.push_back({"trials", std::to_string(config.trials)});
    kv.push_back({"seed", std::to_string(config.seed.seed)});
    kv.push_back({"stream", std::to_string(config.seed.stream)});
    kv.push_back({"init", config.init == InitialKind::uniform ? "uniform"
                          : config.init == InitialKind::all_plus ? "all-plus"
                                                                 : "stationary"});
    kv.push_back({"symmetrize", config.symmetrize ? "1" : "0"});
    return kv;
}

/// CSV with the resolved configuration echoed in comment lines, one row per
/// trial, and the aggregate success rate. Byte-identical across reruns.
inline void write_result_csv(std::ostream& out, const ExperimentConfig& config,
                             const ExperimentResult& result) {
    for (const auto& [k, v] : config_echo(config, result.params)) out << "# " << k << '=' << v << '\n';
    out << "trial,recovered,false_positives,false_negatives\n";
    for (size_t t = 0; t < result.trials.size(); ++t) {
        const auto& o = result.trials[t];
        out << t << ',' << (o.recovered ? 1 : 0) << ',' << o.false_positives << ','
            << o.false_negatives << '\n';
    }
    out << "# success_rate=" << std::setprecision(17) << result.success_rate << '\n';
}

inline void write_result_csv_file(const std::string& path, const ExperimentConfig& config,
                                  const ExperimentResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open results file: " + path);
    write_result_csv(out, config, result);
}

// --- scaling benchmark -------------------------------------------------------

struct BenchmarkRow {
    int p = 0;
    double learner_ms = 0.0;     // median over repeats, learner only
    double simulate_ms = 0.0;
    std::int64_t events = 0;
};

struct BenchmarkResult {
    std::vector<BenchmarkRow> rows;
    double exponent = 0.0;          // log-log slope of learner time vs p
    double kmax_doubling_factor = 0.0;  // learner slowdown when L is halved at fixed T
};

/// Measures learner wall-clock (simulation excluded) on empty-graph traces
/// over ascending p, and fits the log-log slope.
inline BenchmarkResult run_scaling_benchmark(const std::vector<int>& p_values, double T, double L,
                                             RngSeed seed, int repeats = 3) {
    if (p_values.size() < 2) throw std::invalid_argument("benchmark needs at least two p values");
    BenchmarkResult result;
    const LearnerParams base_params = practical_params(1, 1.0, 1.0, L, T, 1.0);

    auto learner_time = [&](const Trace& trace, const LearnerParams& params) {
        double best = 1e300;
        for (int r = 0; r < repeats; ++r) {
            const auto start = std::chrono::steady_clock::now();
            const EdgeSet edges = glauber_learn(trace, params);
            const auto elapsed = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - start).count();
            if (!edges.edges.empty()) throw std::runtime_error("benchmark: empty model produced edges");
            best = std::min(best, elapsed);
        }
        return best;
    };

    for (size_t idx = 0; idx < p_values.size(); ++idx) {
        const int p = p_values[idx];
        if (idx > 0 && p <= p_values[idx - 1])
            throw std::invalid_argument("benchmark p values must be ascending");
        const IsingModel model(empty_graph(p), {}, ParamBounds{1.0, 1.0, 1});
        const auto sim_start = std::chrono::steady_clock::now();
        const Trace trace = simulate_ct(model, SpinConfiguration::all_plus(p), T,
                                         substream(seed, idx));
        BenchmarkRow row;
        row.p = p;
        row.simulate_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - sim_start).count();
        row.events = static_cast<std::int64_t>(trace.events().size());
        row.learner_ms = learner_time(trace, base_params);
        result.rows.push_back(row);

        // On the largest instance, also measure the cost of doubling the
        // window count by halving L at fixed T.
        if (idx + 1 == p_values.size()) {
            const LearnerParams dense = practical_params(1, 1.0, 1.0, L / 2.0, T, 1.0);
            result.kmax_doubling_factor = learner_time(trace, dense) / row.learner_ms;
        }
    }

    // Least-squares slope of ln(time) against ln(p).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(result.rows.size());
    for (const auto& row : result.rows) {
        const double x = std::log(static_cast<double>(row.p));
        const double y = std::log(row.learner_ms);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    result.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return result;
}

// --- key-value config files ----------------------------------------------------

/// Parses "key value" (or "key=value") lines; '#' starts a comment.
inline std::map<std::string, std::string> parse_config_file(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (auto& c : line)
            if (c == '=') c = ' ';
        std::istringstream ss(line);
        std::string key, value;
        if (ss >> key >> value) kv[key] = value;
    }
    return kv;
}

}  // namespace glauber
