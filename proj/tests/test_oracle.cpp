#include <catch2/catch_amalgamated.hpp>

#include "glauber/graphgen.hpp"
#include "glauber/oracle.hpp"

#include <cmath>

using namespace glauber;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("exact gibbs on a free spin") {
    IsingModel model(empty_graph(1), {}, {1.0, 1.0, 1});
    const auto dist = exact_gibbs(model);
    REQUIRE(dist.prob(0) == 0.5);
    REQUIRE(dist.prob(1) == 0.5);
    REQUIRE(dist.Z() == 2.0);
}

TEST_CASE("exact gibbs on a coupled pair") {
    IsingModel model(single_edge_graph(2), {{{0, 1}, 0.5}}, {0.5, 0.5, 1});
    const auto dist = exact_gibbs(model);
    REQUIRE_THAT(dist.Z(), WithinRel(4.5105038608255231, 1e-14));
    REQUIRE_THAT(dist.prob(0b11), WithinRel(0.36552928931500244, 1e-14));
    REQUIRE_THAT(dist.prob(0b00), WithinRel(0.36552928931500244, 1e-14));
    REQUIRE_THAT(dist.prob(0b01), WithinRel(0.13447071068499756, 1e-14));
    REQUIRE_THAT(dist.prob(0b10), WithinRel(0.13447071068499756, 1e-14));
}

TEST_CASE("gibbs table is symmetric under a global spin flip") {
    Graph g = path_graph(5);
    CouplingMap theta;
    int k = 0;
    for (const auto& e : g.edges()) theta[e] = (k++ % 2 ? -0.9 : 0.4);
    IsingModel model(std::move(g), std::move(theta), {0.4, 0.9, 2});
    const auto dist = exact_gibbs(model);
    for (std::uint32_t mask = 0; mask < 32; ++mask)
        REQUIRE(dist.prob(mask) == dist.prob(~mask & 31));
}

TEST_CASE("exact gibbs guards the enumeration size") {
    REQUIRE_THROWS_AS(exact_gibbs(IsingModel(empty_graph(21), {}, {1.0, 1.0, 1})),
                      std::invalid_argument);
}

TEST_CASE("conditionals: closed form, table route, and independence") {
    SECTION("single edge") {
        IsingModel model(single_edge_graph(2), {{{0, 1}, 0.5}}, {0.5, 0.5, 1});
        const auto c = exact_conditionals(model, 0, 1, {});
        REQUIRE_THAT(c.p_plus, WithinAbs(0.73105857863000488, 1e-15));
        REQUIRE_THAT(c.p_minus, WithinAbs(0.26894142136999512, 1e-15));
        const auto via_table = exact_conditionals_from_table(model, 0, 1, {});
        REQUIRE_THAT(via_table.p_plus, WithinAbs(c.p_plus, 1e-13));
        REQUIRE_THAT(via_table.p_minus, WithinAbs(c.p_minus, 1e-13));
    }
    SECTION("non-neighbor j leaves the conditional unchanged") {
        IsingModel model(single_edge_graph(3), {{{0, 1}, 0.5}}, {0.5, 0.5, 1});
        const auto c = exact_conditionals(model, 0, 2, {{1, std::int8_t{1}}});
        REQUIRE(c.p_plus == c.p_minus);
    }
    SECTION("incomplete assignment is rejected") {
        CouplingMap theta{{{0, 1}, 0.5}, {{0, 2}, 0.5}};
        IsingModel model(Graph(3, {{0, 1}, {0, 2}}), theta, {0.5, 0.5, 2});
        REQUIRE_THROWS_AS(exact_conditionals(model, 0, 1, {}), std::invalid_argument);
    }
}

TEST_CASE("edge identity residual") {
    SECTION("non-edge gives residual zero") {
        IsingModel model(empty_graph(2), {}, {1.0, 1.0, 1});
        REQUIRE(edge_identity_residual(model, 0, 1, {}) == 0.0);
    }
    SECTION("isolated pair at theta = 0.5 reproduces e^2") {
        IsingModel model(single_edge_graph(2), {{{0, 1}, 0.5}}, {0.5, 0.5, 1});
        REQUIRE(edge_identity_residual(model, 0, 1, {}) < 1e-12);
        const auto c = exact_conditionals(model, 0, 1, {});
        REQUIRE_THAT(c.p_plus * (1 - c.p_minus) / (c.p_minus * (1 - c.p_plus)),
                     WithinRel(7.3890560989306502, 1e-13));
    }
    SECTION("negative coupling with an extra neighbor, all assignments") {
        CouplingMap theta{{{0, 1}, -0.3}, {{0, 2}, 0.7}};
        IsingModel model(Graph(3, {{0, 1}, {0, 2}}), theta, {0.3, 0.7, 2});
        for (const auto& x : enumerate_assignments(model, 0, 1))
            REQUIRE(edge_identity_residual(model, 0, 1, x) < 1e-10);
    }
}

TEST_CASE("lemma1 sandwich") {
    SECTION("equality case") {
        const auto r = lemma1_check(0.3, 0.3);
        REQUIRE(r.lower == 0.0);
        REQUIRE(r.middle == 0.0);
        REQUIRE(r.upper == 0.0);
        REQUIRE(r.holds);
    }
    SECTION("interior point") {
        const auto r = lemma1_check(0.25, 0.5);
        REQUIRE_THAT(r.lower, WithinAbs(0.25, 1e-15));
        REQUIRE_THAT(r.middle, WithinAbs(2.0, 1e-14));
        REQUIRE_THAT(r.upper, WithinAbs(4.0, 1e-14));
        REQUIRE(r.holds);
    }
    SECTION("preconditions") {
        REQUIRE_THROWS_AS(lemma1_check(0.0, 0.5), std::invalid_argument);
        REQUIRE_THROWS_AS(lemma1_check(0.6, 0.7), std::invalid_argument);
        REQUIRE_THROWS_AS(lemma1_check(0.3, 1.0), std::invalid_argument);
        REQUIRE_THROWS_AS(lemma1_check(0.3, 0.2), std::invalid_argument);
    }
}

TEST_CASE("squeeze inequality for both coupling signs") {
    SECTION("positive coupling") {
        IsingModel model(single_edge_graph(2), {{{0, 1}, 0.5}}, {0.5, 0.5, 1});
        REQUIRE(squeeze_check(model, 0, 1, {}));
    }
    SECTION("negative coupling has p+ below p-") {
        IsingModel model(single_edge_graph(2), {{{0, 1}, -0.5}}, {0.5, 0.5, 1});
        const auto c = exact_conditionals(model, 0, 1, {});
        REQUIRE(c.p_plus < c.p_minus);
        REQUIRE(squeeze_check(model, 0, 1, {}));
    }
    SECTION("all assignments on a 4-node star") {
        for (const double theta : {0.3, -0.3, 0.8, -0.8}) {
            Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
            CouplingMap cm;
            for (const auto& e : star.edges()) cm[e] = theta;
            IsingModel model(std::move(star), std::move(cm),
                             {std::abs(theta), std::abs(theta), 3});
            for (int j = 1; j <= 3; ++j)
                for (const auto& x : enumerate_assignments(model, 0, j))
                    REQUIRE(squeeze_check(model, 0, j, x));
        }
    }
    SECTION("non-edge pair is rejected") {
        IsingModel model(single_edge_graph(3), {{{0, 1}, 0.5}}, {0.5, 0.5, 1});
        REQUIRE_THROWS_AS(squeeze_check(model, 0, 2, {}), std::invalid_argument);
    }
}

TEST_CASE("monte carlo statistic expectation") {
    SECTION("rep floor enforced") {
        IsingModel model(empty_graph(2), {}, {1.0, 1.0, 1});
        REQUIRE_THROWS_AS(mc_expected_statistic(model, SpinConfiguration::all_plus(2), 0, 1, 1.0,
                                                100, {1, 0}),
                          std::invalid_argument);
    }
    SECTION("free pair has mean zero within noise") {
        IsingModel model(empty_graph(2), {}, {1.0, 1.0, 1});
        const auto est = mc_expected_statistic(model, SpinConfiguration::all_plus(2), 0, 1, 1.0,
                                               20000, {12, 0});
        REQUIRE(est.stderr_ > 0.0);
        REQUIRE(std::abs(est.mean) <= 3.0 * est.stderr_);
    }
    SECTION("coupled pair has a positive mean") {
        IsingModel model(single_edge_graph(2), {{{0, 1}, 1.0}}, {1.0, 1.0, 1});
        const auto est = mc_expected_statistic(model, SpinConfiguration::all_plus(2), 0, 1, 1.0,
                                               200000, {13, 0});
        REQUIRE(est.mean > 3.0 * est.stderr_);
    }
}

TEST_CASE("event D ignores j but watches the other neighbors") {
    Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
    CouplingMap cm;
    for (const auto& e : star.edges()) cm[e] = 0.5;
    IsingModel model(std::move(star), std::move(cm), {0.5, 0.5, 3});

    SECTION("isolated responder: D always holds") {
        std::vector<UpdateEvent> events = {{0.5, 1, 1}};
        const Trace trace(4, TraceMode::continuous, SpinConfiguration::all_plus(4), events, 1.0);
        REQUIRE(event_D(trace, empty_graph(4), 0, 1, 1, 1.0));
    }
    SECTION("j updates are allowed, other neighbors break D") {
        std::vector<UpdateEvent> j_only = {{0.5, 1, -1}};
        const Trace a(4, TraceMode::continuous, SpinConfiguration::all_plus(4), j_only, 1.0);
        REQUIRE(event_D(a, model.graph(), 0, 1, 1, 1.0));

        std::vector<UpdateEvent> with_neighbor = {{0.5, 2, -1}};
        const Trace b(4, TraceMode::continuous, SpinConfiguration::all_plus(4), with_neighbor, 1.0);
        REQUIRE_FALSE(event_D(b, model.graph(), 0, 1, 1, 1.0));
    }
}

TEST_CASE("A and D are empirically independent") {
    Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
    CouplingMap cm;
    for (const auto& e : star.edges()) cm[e] = 0.5;
    IsingModel model(std::move(star), std::move(cm), {0.5, 0.5, 3});
    const auto result = independence_AD_check(model, 0, 1, 0.6, 20000, {14, 0});
    REQUIRE(result.ok);

    IsingModel pair_model(single_edge_graph(2), {{{0, 1}, 0.5}}, {0.5, 0.5, 1});
    const auto trivial = independence_AD_check(pair_model, 0, 1, 0.6, 20000, {14, 1});
    REQUIRE(trivial.p_d == 1.0);
    REQUIRE(trivial.p_ad == trivial.p_a);
    REQUIRE(trivial.ok);
}

TEST_CASE("stationarity TV at zero burn-in is pure sampling error") {
    Graph g = cycle_graph(4);
    CouplingMap theta;
    for (const auto& e : g.edges()) theta[e] = 0.5;
    IsingModel model(std::move(g), std::move(theta), {0.5, 0.5, 2});
    REQUIRE(stationarity_tv(model, 0.0, 100000, {15, 0}) <= 0.02);
    REQUIRE_THROWS_AS(stationarity_tv(IsingModel(empty_graph(11), {}, {1.0, 1.0, 1}), 1.0, 1000,
                                      {15, 1}),
                      std::invalid_argument);
}

TEST_CASE("gibbs sampling matches the table") {
    IsingModel model(single_edge_graph(2), {{{0, 1}, 1.0}}, {1.0, 1.0, 1});
    const auto dist = exact_gibbs(model);
    Rng rng(3, 3);
    std::vector<int> counts(4, 0);
    const int n = 100000;
    for (int k = 0; k < n; ++k) ++counts[dist.sample(rng)];
    for (std::uint32_t m = 0; m < 4; ++m) {
        const double freq = static_cast<double>(counts[m]) / n;
        const double sd = std::sqrt(dist.prob(m) * (1 - dist.prob(m)) / n);
        REQUIRE(std::abs(freq - dist.prob(m)) <= 5.0 * sd + 1e-9);
    }
}
