// Command-line driver: simulate, learn, experiment, benchmark, verify,
// lowerbound. Every stochastic subcommand takes an explicit --seed; there is
// no environment fallback, so runs are reproducible by construction.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "glauber/glauber.hpp"

namespace {

using nlohmann::json;

glauber::GraphSpec make_graph_spec(const std::string& name, int p, int d, int rows, int cols,
                                   const std::string& file, std::uint64_t seed) {
    glauber::GraphSpec spec;
    spec.name = name;
    spec.p = p;
    spec.d = d;
    spec.rows = rows;
    spec.cols = cols;
    spec.path = file;
    spec.seed = glauber::RngSeed{seed, 0xF00DULL};
    return spec;
}

int run_simulate(const std::string& model_file, const std::string& out_file, double T,
                 std::int64_t n, const std::string& mode, const std::string& init,
                 std::uint64_t seed, std::uint64_t stream) {
    const glauber::IsingModel model = glauber::read_model_file(model_file);
    const glauber::RngSeed rng_seed{seed, stream};

    glauber::SpinConfiguration initial = glauber::SpinConfiguration::all_plus(model.node_count());
    if (init == "uniform") {
        glauber::Rng rng(seed, stream ^ 0x696e6974ULL);
        initial = glauber::SpinConfiguration::uniform_random(model.node_count(), rng);
    } else if (init == "stationary") {
        glauber::Rng rng(seed, stream ^ 0x696e6974ULL);
        initial = glauber::config_of_mask(glauber::exact_gibbs(model).sample(rng),
                                          model.node_count());
    } else if (init != "all-plus") {
        throw std::invalid_argument("--init must be uniform, all-plus, or stationary");
    }

    const glauber::Trace trace =
        mode == "dt" ? glauber::simulate_dt(model, initial, n, rng_seed)
                     : glauber::simulate_ct(model, initial, T, rng_seed);
    glauber::write_trace_file(out_file, trace);
    std::cout << "wrote " << trace.events().size() << " events to " << out_file << '\n';
    return 0;
}

int run_learn(const std::string& trace_file, const std::string& out_file, const std::string& mode,
              int d, double alpha, double beta, double L, std::optional<double> tau,
              bool symmetrize) {
    const glauber::Trace trace = glauber::read_trace_file(trace_file);
    glauber::LearnerParams params;
    if (mode == "theory") {
        params = glauber::theory_params(trace.node_count(), d, alpha, beta);
    } else if (mode == "practical") {
        params = glauber::practical_params(d, alpha, beta, L, trace.horizon(), tau);
    } else {
        throw std::invalid_argument("--mode must be theory or practical");
    }
    const glauber::EdgeSet edges = glauber::glauber_learn(trace, params, symmetrize);
    std::ofstream out(out_file);
    if (!out) throw std::runtime_error("cannot open " + out_file);
    glauber::write_edge_set(out, edges);
    std::cout << "L=" << params.L << " tau=" << params.tau << " k_max="
              << glauber::window_count(trace.horizon(), params.L) << " edges=" << edges.size()
              << " -> " << out_file << '\n';
    return 0;
}

void write_manifest(const std::string& path, const glauber::ExperimentConfig& config,
                    const glauber::ExperimentResult& result) {
    json j;
    j["tool"] = "glauber";
    j["format_version"] = 1;
    for (const auto& [k, v] : glauber::config_echo(config, result.params)) j["config"][k] = v;
    j["success_rate"] = result.success_rate;
    j["trials"] = config.trials;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << '\n';
}

int run_experiment(glauber::ExperimentConfig config, const std::string& config_file) {
    if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) throw std::runtime_error("cannot open config file " + config_file);
        const auto kv = glauber::parse_config_file(in);
        auto get = [&kv](const std::string& key, const std::string& fallback) {
            auto it = kv.find(key);
            return it == kv.end() ? fallback : it->second;
        };
        // Flags override file values, so only fill fields still at defaults.
        if (config.graph.name.empty()) config.graph.name = get("graph", "");
        if (config.graph.p == 0) config.graph.p = std::stoi(get("p", "0"));
        if (config.d == 0) config.d = std::stoi(get("d", "0"));
        if (config.graph.rows == 0) config.graph.rows = std::stoi(get("rows", "0"));
        if (config.graph.cols == 0) config.graph.cols = std::stoi(get("cols", "0"));
        if (config.coupling.value == 0.0) config.coupling.value = std::stod(get("theta", "0"));
        if (config.alpha == 0.0) config.alpha = std::stod(get("alpha", "0"));
        if (config.beta == 0.0) config.beta = std::stod(get("beta", "0"));
        if (config.L == 0.0) config.L = std::stod(get("L", "0"));
        if (config.T == 0.0) config.T = std::stod(get("T", "0"));
        if (!config.tau && kv.count("tau")) config.tau = std::stod(kv.at("tau"));
        if (config.trials == 0) config.trials = std::stoi(get("trials", "1"));
        if (!config.seed_set && kv.count("seed")) {
            config.seed.seed = std::stoull(kv.at("seed"));
            config.seed_set = true;
        }
        if (config.out_csv.empty()) config.out_csv = get("out_csv", "");
        if (config.manifest.empty()) config.manifest = get("manifest", "");
        const std::string coupling_kind = get("coupling", "");
        if (coupling_kind == "random-sign")
            config.coupling.kind = glauber::CouplingSpec::Kind::random_sign;
    }
    config.graph.d = config.d;

    const auto result = glauber::run_recovery_experiment(config);
    if (!config.out_csv.empty()) glauber::write_result_csv_file(config.out_csv, config, result);
    if (!config.manifest.empty()) write_manifest(config.manifest, config, result);
    std::cout << "success_rate=" << result.success_rate << " over " << config.trials
              << " trials\n";
    return 0;
}

int run_benchmark(const std::string& p_list, double T, double L, std::uint64_t seed,
                  const std::string& out_file) {
    std::vector<int> ps;
    std::stringstream ss(p_list);
    std::string item;
    while (std::getline(ss, item, ',')) ps.push_back(std::stoi(item));
    const auto result = glauber::run_scaling_benchmark(ps, T, L, glauber::RngSeed{seed, 0});

    std::ostringstream table;
    table << "p,events,simulate_ms,learner_ms\n";
    for (const auto& row : result.rows)
        table << row.p << ',' << row.events << ',' << row.simulate_ms << ',' << row.learner_ms
              << '\n';
    table << "# loglog_exponent=" << result.exponent << '\n';
    table << "# kmax_doubling_factor=" << result.kmax_doubling_factor << '\n';
    std::cout << table.str();
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) throw std::runtime_error("cannot open " + out_file);
        out << table.str();
    }
    return 0;
}

int run_verify(const std::string& only, bool quick) {
    glauber::VerifyEffort effort;
    if (quick) {
        effort.stationarity_runs = 20000;
        effort.lemma2_reps = 100000;
        effort.window_freq_count = 20000;
        effort.ad_reps = 10000;
        effort.seed_trials = 30;
    }
    const auto checks = glauber::run_verification_suite(only, effort);
    glauber::print_checks(std::cout, checks);
    const size_t failures = checks.size() - static_cast<size_t>(std::count_if(
                                checks.begin(), checks.end(),
                                [](const glauber::CheckResult& c) { return c.pass; }));
    std::cout << checks.size() << " checks, " << failures << " failures\n";
    return failures == 0 ? 0 : 1;
}

int run_lowerbound(int p, int d, double alpha, double beta, std::int64_t n,
                   const std::string& out_file) {
    const auto ens = glauber::build_ensemble(p, d, alpha, beta);
    std::ostringstream csv;
    csv << "variant,C1,Cl,total,bound,margin\n";
    csv << std::setprecision(12);
    std::vector<double> kls;
    for (const auto& variant : ens.variants) {
        const auto report = glauber::kl_report(ens, variant, n);
        kls.push_back(report.total);
        csv << report.u << '-' << report.v << ',' << report.C1 << ',' << report.Cl << ','
            << report.total << ',' << report.bound << ',' << report.bound - report.total << '\n';
    }
    const auto fano = glauber::fano_bound(kls, ens.M());
    csv << "# M=" << ens.M() << '\n';
    csv << "# fano_gamma=" << fano.gamma << '\n';
    csv << "# fano_applicable=" << (fano.applicable ? 1 : 0) << '\n';
    if (fano.applicable) csv << "# fano_risk_bound=" << fano.risk_bound << '\n';
    csv << "# theorem2_T=" << glauber::theorem2_T(p, d, alpha, beta) << '\n';
    std::cout << csv.str();
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) throw std::runtime_error("cannot open " + out_file);
        out << csv.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Glauber dynamics simulator, structure learner, and verification suite"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate a dynamics trace from a model file");
    std::string sim_model, sim_out = "trace.txt", sim_mode = "ct", sim_init = "uniform";
    double sim_T = 0.0;
    std::int64_t sim_n = 0;
    std::uint64_t sim_seed = 0, sim_stream = 0;
    sim->add_option("--model", sim_model, "model file")->required();
    sim->add_option("--out", sim_out, "output trace file");
    sim->add_option("--mode", sim_mode, "ct (continuous) or dt (discrete)");
    sim->add_option("--T", sim_T, "observation time (ct mode)");
    sim->add_option("--n", sim_n, "sample count (dt mode)");
    sim->add_option("--init", sim_init, "uniform | all-plus | stationary");
    sim->add_option("--seed", sim_seed, "RNG seed")->required();
    sim->add_option("--stream", sim_stream, "RNG stream id");

    // learn
    auto* learn = app.add_subcommand("learn", "Estimate the edge set from a trace");
    std::string learn_trace, learn_out = "edges.txt", learn_mode = "practical";
    int learn_d = 1;
    double learn_alpha = 0.0, learn_beta = 0.0, learn_L = 0.0, learn_tau = 0.0;
    bool learn_symmetrize = false;
    learn->add_option("--trace", learn_trace, "trace file")->required();
    learn->add_option("--out", learn_out, "output edge list");
    learn->add_option("--mode", learn_mode, "theory | practical");
    learn->add_option("--d", learn_d, "max degree");
    learn->add_option("--alpha", learn_alpha, "coupling lower bound");
    learn->add_option("--beta", learn_beta, "coupling upper bound");
    learn->add_option("--L", learn_L, "window length (practical mode)");
    auto* tau_opt = learn->add_option("--tau", learn_tau, "decision threshold");
    learn->add_flag("--symmetrize", learn_symmetrize, "use max of both pair orientations");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Seeded recovery experiments");
    glauber::ExperimentConfig config;
    std::string exp_config_file, exp_coupling = "constant", exp_init = "uniform";
    std::uint64_t exp_seed = 0;
    exp->add_option("--config", exp_config_file, "key-value config file");
    exp->add_option("--graph", config.graph.name, "graph generator name");
    exp->add_option("--p", config.graph.p, "node count");
    exp->add_option("--d", config.d, "max degree");
    exp->add_option("--rows", config.graph.rows, "grid rows");
    exp->add_option("--cols", config.graph.cols, "grid cols");
    exp->add_option("--coupling", exp_coupling, "constant | random-sign | file");
    exp->add_option("--theta", config.coupling.value, "coupling magnitude");
    exp->add_option("--coupling-file", config.coupling.path, "model file for couplings");
    exp->add_option("--alpha", config.alpha, "coupling lower bound");
    exp->add_option("--beta", config.beta, "coupling upper bound");
    exp->add_option("--mode", config.mode, "theory | practical");
    exp->add_option("--L", config.L, "window length");
    double exp_tau = 0.0;
    auto* exp_tau_opt = exp->add_option("--tau", exp_tau, "decision threshold");
    exp->add_option("--T", config.T, "observation time");
    exp->add_option("--trials", config.trials, "trial count");
    auto* exp_seed_opt = exp->add_option("--seed", exp_seed, "RNG seed");
    exp->add_option("--init", exp_init, "uniform | all-plus | stationary");
    exp->add_flag("--symmetrize", config.symmetrize, "use max of both pair orientations");
    exp->add_option("--out", config.out_csv, "results CSV path");
    exp->add_option("--manifest", config.manifest, "run manifest path (JSON)");

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "Learner runtime scaling");
    std::string bench_ps = "100,200,400", bench_out;
    double bench_T = 200.0, bench_L = 0.5;
    std::uint64_t bench_seed = 0;
    bench->add_option("--p-list", bench_ps, "comma-separated node counts");
    bench->add_option("--T", bench_T, "observation time");
    bench->add_option("--L", bench_L, "window length");
    bench->add_option("--seed", bench_seed, "RNG seed")->required();
    bench->add_option("--out", bench_out, "output CSV path");

    // verify
    auto* verify = app.add_subcommand("verify", "Run the verification battery");
    std::string verify_only;
    bool verify_quick = false;
    verify->add_option("--only", verify_only, "filter checks by substring");
    verify->add_flag("--quick", verify_quick, "reduced Monte Carlo effort");

    // lowerbound
    auto* lb = app.add_subcommand("lowerbound", "Exact KL reports for the clique ensemble");
    int lb_p = 0, lb_d = 0;
    double lb_alpha = 0.0, lb_beta = 0.0;
    std::int64_t lb_n = 0;
    std::string lb_out;
    lb->add_option("--p", lb_p, "node count")->required();
    lb->add_option("--d", lb_d, "clique degree (odd)")->required();
    lb->add_option("--alpha", lb_alpha, "weak coupling")->required();
    lb->add_option("--beta", lb_beta, "strong coupling")->required();
    lb->add_option("--n", lb_n, "sample count")->required();
    lb->add_option("--out", lb_out, "report CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return run_simulate(sim_model, sim_out, sim_T, sim_n, sim_mode, sim_init, sim_seed,
                                sim_stream);
        if (learn->parsed())
            return run_learn(learn_trace, learn_out, learn_mode, learn_d, learn_alpha, learn_beta,
                             learn_L,
                             tau_opt->count() ? std::optional<double>(learn_tau) : std::nullopt,
                             learn_symmetrize);
        if (exp->parsed()) {
            if (exp_coupling == "random-sign")
                config.coupling.kind = glauber::CouplingSpec::Kind::random_sign;
            else if (exp_coupling == "file")
                config.coupling.kind = glauber::CouplingSpec::Kind::file;
            if (exp_init == "all-plus") config.init = glauber::InitialKind::all_plus;
            else if (exp_init == "stationary") config.init = glauber::InitialKind::stationary;
            if (exp_tau_opt->count()) config.tau = exp_tau;
            if (exp_seed_opt->count()) {
                config.seed.seed = exp_seed;
                config.seed_set = true;
            }
            return run_experiment(std::move(config), exp_config_file);
        }
        if (bench->parsed()) return run_benchmark(bench_ps, bench_T, bench_L, bench_seed, bench_out);
        if (verify->parsed()) return run_verify(verify_only, verify_quick);
        if (lb->parsed()) return run_lowerbound(lb_p, lb_d, lb_alpha, lb_beta, lb_n, lb_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
