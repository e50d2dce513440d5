#include <catch2/catch_amalgamated.hpp>

#include "glauber/lowerbound.hpp"

#include <cmath>

using namespace glauber;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("ensemble construction counts and couplings") {
    SECTION("p=100 d=3: 25 cliques, 50 variants") {
        const auto ens = build_ensemble(100, 3, 0.2, 1.0);
        REQUIRE(ens.M() == 50);
        REQUIRE(ens.base.graph().edges().size() == 25 * 6);
    }
    SECTION("p=4 d=3: a single clique, two matching edges") {
        const auto ens = build_ensemble(4, 3, 0.2, 1.0);
        REQUIRE(ens.M() == 2);
        REQUIRE(ens.M() >= 4 / 4);
    }
    SECTION("every removed edge carried the weak coupling") {
        const auto ens = build_ensemble(12, 3, 0.25, 2.0);
        for (const auto& variant : ens.variants) {
            REQUIRE(ens.base.coupling(variant.u, variant.v) == 0.25);
            REQUIRE(variant.model.coupling(variant.u, variant.v) == 0.0);
            REQUIRE(variant.model.graph().edges().size() + 1 ==
                    ens.base.graph().edges().size());
        }
    }
    SECTION("leftover nodes are isolated") {
        const auto ens = build_ensemble(10, 3, 0.2, 1.0);  // 2 cliques + 2 spare nodes
        REQUIRE(ens.base.graph().degree(8) == 0);
        REQUIRE(ens.base.graph().degree(9) == 0);
    }
    SECTION("preconditions") {
        REQUIRE_THROWS_AS(build_ensemble(10, 2, 0.2, 1.0), std::invalid_argument);  // even d
        REQUIRE_THROWS_AS(build_ensemble(3, 3, 0.2, 1.0), std::invalid_argument);   // p < d+1
        REQUIRE_THROWS_AS(build_ensemble(8, 3, 2.0, 1.0), std::invalid_argument);   // alpha > beta
    }
}

TEST_CASE("clique projection keeps the affected clique only") {
    const auto ens = build_ensemble(8, 3, 0.2, 1.0);
    const auto& variant = ens.variants[2];  // second clique
    REQUIRE(variant.u == 4);
    const auto clique = project_to_clique(ens, variant.model, variant.u);
    REQUIRE(clique.node_count() == 4);
    REQUIRE(clique.graph().edges().size() == 5);  // 6 clique edges minus the removed one
    REQUIRE(clique.coupling(0, 1) == 0.0);        // local index of the removed pair
    REQUIRE(clique.coupling(2, 3) == 0.2);
    REQUIRE(clique.coupling(0, 2) == 1.0);
}

TEST_CASE("KL pieces: identity, nonnegativity, bounds") {
    const auto ens = build_ensemble(4, 3, 0.5, 0.5);
    const auto base = project_to_clique(ens, ens.base, 0);
    const auto variant = project_to_clique(ens, ens.variants[0].model, 0);

    SECTION("identical models have zero divergence") {
        REQUIRE(exact_C1(base, base) == 0.0);
        REQUIRE(exact_Cl(base, base, 4) == 0.0);
    }
    SECTION("C1 is nonnegative and below 4 alpha") {
        const double c1 = exact_C1(base, variant);
        REQUIRE(c1 >= 0.0);
        REQUIRE(c1 <= 4.0 * 0.5);
    }
    SECTION("Cl is nonnegative and the per-update log-ratio is below 2 alpha") {
        const double cl = exact_Cl(base, variant, 4);
        REQUIRE(cl >= 0.0);
        for (std::uint32_t mask = 0; mask < 16; ++mask) {
            const auto sigma = config_of_mask(mask, 4);
            const double pv = update_prob_plus(variant, sigma, 0);
            const double pb = update_prob_plus(base, sigma, 0);
            REQUIRE(std::abs(std::log(pv / pb)) <= 2.0 * 0.5 + 1e-12);
            REQUIRE(std::abs(std::log((1 - pv) / (1 - pb))) <= 2.0 * 0.5 + 1e-12);
        }
    }
}

TEST_CASE("kl_total arithmetic") {
    REQUIRE(kl_total(0.125, 99.0, 1) == 0.125);
    REQUIRE_THAT(kl_total(0.1, 0.001, 101), WithinRel(0.2, 1e-14));
    REQUIRE_THROWS_AS(kl_total(0.1, 0.1, 0), std::invalid_argument);
}

TEST_CASE("kl_bound closed form") {
    REQUIRE(kl_bound(0, 10, 0.3, 1.0, 3) == 4.0 * 0.3);
    REQUIRE_THAT(kl_bound(10, 10, 1.0, 1.0, 3), WithinRel(150.78721873678844, 1e-13));
}

TEST_CASE("magnetization tail bound") {
    SECTION("d=3 bound is vacuous but valid") {
        const auto ens = build_ensemble(4, 3, 0.2, 1.0);
        const auto clique = project_to_clique(ens, ens.variants[0].model, 0);
        const auto tail = magnetization_tail(clique, 1.0);
        REQUIRE_THAT(tail.bound, WithinRel(199.50451467112756, 1e-13));
        REQUIRE(tail.exact <= 1.0);
        REQUIRE(tail.exact <= tail.bound);
    }
    SECTION("d=9 beta=1: tight bound still dominates") {
        const auto ens = build_ensemble(10, 9, 0.1, 1.0);
        const auto clique = project_to_clique(ens, ens.variants[0].model, 0);
        const auto tail = magnetization_tail(clique, 1.0);
        REQUIRE_THAT(tail.bound, WithinRel(6.0618443622650099e-4, 1e-12));
        REQUIRE(tail.exact <= tail.bound);
    }
    SECTION("d=9 beta=5: mass concentrates on full alignment") {
        const auto ens = build_ensemble(10, 9, 0.1, 5.0);
        const auto clique = project_to_clique(ens, ens.variants[0].model, 0);
        const auto tail = magnetization_tail(clique, 5.0);
        REQUIRE(tail.exact <= tail.bound);
        REQUIRE(tail.exact < 1e-30);
        const auto dist = exact_gibbs(clique);
        REQUIRE(dist.prob(0) + dist.prob((1u << 10) - 1) > 0.999);
    }
}

TEST_CASE("fano risk bound") {
    SECTION("degenerate zero KL is not applicable") {
        const auto r = fano_bound(std::vector<double>(100, 0.0), 100);
        REQUIRE(r.gamma == 0.0);
        REQUIRE_FALSE(r.applicable);
    }
    SECTION("gamma = 1/16 with M = 100") {
        // Sum chosen so gamma lands exactly on 1/16.
        const double each = (1.0 / 16.0) * 101.0 * std::log(100.0) / 100.0;
        const auto r = fano_bound(std::vector<double>(100, each), 100);
        REQUIRE_THAT(r.gamma, WithinRel(0.0625, 1e-13));
        REQUIRE(r.applicable);
        REQUIRE_THAT(r.risk_bound, WithinAbs(0.72251344593969537, 1e-10));
    }
    SECTION("gamma = 0.124 with M = 1e6") {
        const int M = 1000000;
        const double each = 0.124 * (M + 1.0) * std::log(static_cast<double>(M)) / M;
        const auto r = fano_bound(std::vector<double>(M, each), M);
        REQUIRE(r.applicable);
        const double expected =
            (std::log(M + 1.0) - 1.0) / std::log(static_cast<double>(M)) - 0.124;
        REQUIRE_THAT(r.risk_bound, WithinRel(expected, 1e-12));
    }
    SECTION("preconditions") {
        REQUIRE_THROWS_AS(fano_bound({0.1}, 1), std::invalid_argument);
        REQUIRE_THROWS_AS(fano_bound({0.1, 0.2}, 3), std::invalid_argument);
    }
}

TEST_CASE("theorem2 observation-time floor") {
    REQUIRE_THAT(theorem2_T(1000, 3, 1.0, 1.0), WithinAbs(3.9537484756745018e-3, 1e-9));
    // ln p linearity: squaring p doubles the bound.
    REQUIRE_THAT(theorem2_T(1000000, 3, 1.0, 1.0),
                 WithinRel(2.0 * theorem2_T(1000, 3, 1.0, 1.0), 1e-12));
    // Larger alpha lowers the floor.
    REQUIRE(theorem2_T(1000, 3, 2.0, 2.0) > 0.0);
    REQUIRE(theorem2_T(1000, 3, 0.5, 1.0) > theorem2_T(1000, 3, 1.0, 1.0));
}

TEST_CASE("path-space enumeration matches the chain-rule decomposition") {
    const auto ens = build_ensemble(4, 3, 0.3, 1.0);
    const auto base = project_to_clique(ens, ens.base, 0);
    const auto variant = project_to_clique(ens, ens.variants[0].model, 0);
    const double c1 = exact_C1(base, variant);
    const double cl = exact_Cl(base, variant, 4);
    for (const std::int64_t n : {1, 2, 3}) {
        const double direct = path_space_kl(base, variant, n);
        REQUIRE_THAT(direct, WithinAbs(kl_total(c1, cl, n), 1e-10));
    }
}

TEST_CASE("kl_report fills every column") {
    const auto ens = build_ensemble(8, 3, 0.2, 1.0);
    const auto report = kl_report(ens, ens.variants[0], 80);
    REQUIRE(report.n == 80);
    REQUIRE(report.total >= report.C1);
    REQUIRE(report.total <= report.bound);
    REQUIRE(report.C1 >= 0.0);
    REQUIRE(report.Cl >= 0.0);
}
