#include <catch2/catch_amalgamated.hpp>

#include "glauber/experiment.hpp"

#include <sstream>

using namespace glauber;

namespace {

ExperimentConfig base_config() {
    ExperimentConfig config;
    config.graph.name = "cycle";
    config.graph.p = 4;
    config.d = 2;
    config.coupling.kind = CouplingSpec::Kind::constant;
    config.coupling.value = 0.8;
    config.mode = "practical";
    config.L = 1.0;
    config.tau = 0.05;
    config.T = 50.0;
    config.trials = 3;
    config.seed = {2024, 0};
    config.seed_set = true;
    return config;
}

}  // namespace

TEST_CASE("build_model resolves graph and couplings") {
    SECTION("constant couplings with defaulted bounds") {
        const auto model = build_model(base_config());
        REQUIRE(model.node_count() == 4);
        REQUIRE(model.coupling(0, 1) == 0.8);
        REQUIRE(model.bounds().alpha == 0.8);
        REQUIRE(model.bounds().max_degree == 2);
    }
    SECTION("random signs are seeded and mixed") {
        auto config = base_config();
        config.graph.name = "cycle";
        config.graph.p = 12;
        config.coupling.kind = CouplingSpec::Kind::random_sign;
        const auto a = build_model(config);
        const auto b = build_model(config);
        int negatives = 0;
        for (const auto& e : a.graph().edges()) {
            REQUIRE(a.coupling(e.first, e.second) == b.coupling(e.first, e.second));
            if (a.coupling(e.first, e.second) < 0) ++negatives;
        }
        REQUIRE(negatives > 0);
        REQUIRE(negatives < 12);
    }
    SECTION("empty graph carries no couplings") {
        auto config = base_config();
        config.graph.name = "empty";
        config.coupling.value = 0.0;
        const auto model = build_model(config);
        REQUIRE(model.graph().edges().empty());
    }
}

TEST_CASE("recovery experiment scores trials against the true edges") {
    auto config = base_config();
    config.graph.name = "empty";
    config.coupling.value = 0.0;
    config.tau = 0.5;  // far above noise at this horizon
    const auto result = run_recovery_experiment(config);
    REQUIRE(result.trials.size() == 3);
    for (const auto& t : result.trials) {
        REQUIRE(t.recovered);
        REQUIRE(t.false_positives == 0);
        REQUIRE(t.false_negatives == 0);
    }
    REQUIRE(result.success_rate == 1.0);
}

TEST_CASE("experiments require an explicit seed") {
    auto config = base_config();
    config.seed_set = false;
    REQUIRE_THROWS_AS(run_recovery_experiment(config), std::invalid_argument);
}

TEST_CASE("result CSV is deterministic and echoes the resolved config") {
    const auto config = base_config();
    const auto a = run_recovery_experiment(config);
    const auto b = run_recovery_experiment(config);

    std::stringstream csv_a, csv_b;
    write_result_csv(csv_a, config, a);
    write_result_csv(csv_b, config, b);
    REQUIRE(csv_a.str() == csv_b.str());

    const std::string text = csv_a.str();
    for (const char* key : {"# graph=cycle", "# L=1", "# tau=0.05", "# k_max=50", "# q=",
                            "# seed=2024", "trial,recovered"})
        REQUIRE(text.find(key) != std::string::npos);
}

TEST_CASE("per-trial outcomes are independent of execution order") {
    // Forcing a single worker must give the same outcomes as the default.
    auto config = base_config();
    config.trials = 6;
    const auto parallel_result = run_recovery_experiment(config);
    std::vector<TrialOutcome> sequential(static_cast<size_t>(config.trials));
    const auto model = build_model(config);
    const auto params = resolve_params(config, model);
    for (std::uint64_t t = 0; t < 6; ++t) {
        const RngSeed trial_seed{config.seed.seed, config.seed.stream + 1000003ULL * (t + 1)};
        const auto init = initial_state(config, model, trial_seed);
        const Trace trace = simulate_ct(model, init, params.T, trial_seed);
        const EdgeSet learned = glauber_learn(trace, params, config.symmetrize);
        sequential[t].recovered =
            learned.edges == model.graph().edges();
    }
    for (size_t t = 0; t < 6; ++t)
        REQUIRE(parallel_result.trials[t].recovered == sequential[t].recovered);
}

TEST_CASE("config files parse key-value lines with overrides") {
    std::stringstream file("graph cycle\np 8\n# comment\ntheta = 0.8\nseed 99\n");
    const auto kv = parse_config_file(file);
    REQUIRE(kv.at("graph") == "cycle");
    REQUIRE(kv.at("p") == "8");
    REQUIRE(kv.at("theta") == "0.8");
    REQUIRE(kv.at("seed") == "99");
    REQUIRE(kv.count("comment") == 0);
}

TEST_CASE("initial state kinds") {
    const auto config = base_config();
    const auto model = build_model(config);
    auto cfg_plus = config;
    cfg_plus.init = InitialKind::all_plus;
    REQUIRE(initial_state(cfg_plus, model, {1, 1}) == SpinConfiguration::all_plus(4));

    auto cfg_stat = config;
    cfg_stat.init = InitialKind::stationary;
    const auto stat = initial_state(cfg_stat, model, {1, 1});
    REQUIRE(stat.size() == 4);

    auto cfg_uniform = config;
    const auto u1 = initial_state(cfg_uniform, model, {1, 1});
    const auto u2 = initial_state(cfg_uniform, model, {1, 1});
    REQUIRE(u1 == u2);  // same trial seed, same draw
}
