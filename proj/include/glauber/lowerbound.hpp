// Hard-instance ensemble and information-theoretic bounds: disjoint
// (d+1)-cliques whose matching edges carry the weak coupling alpha, one
// hypothesis per removed matching edge. KL divergences between the trace
// distributions of base and variant are computed exactly by enumeration
// over the affected clique, and fed into a Fano risk bound.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "glauber/ising.hpp"
#include "glauber/oracle.hpp"

namespace glauber {

struct CliqueEnsemble {
    int p = 0;
    int d = 0;
    double alpha = 0.0;
    double beta = 0.0;
    IsingModel base;

    struct Variant {
        int u = 0;
        int v = 0;
        IsingModel model;
    };
    std::vector<Variant> variants;

    int M() const { return static_cast<int>(variants.size()); }
};

namespace detail {

inline IsingModel make_clique_model(int p, int d, double alpha, double beta,
                                    const NodePair* removed) {
    const int clique = d + 1;
    const int cliques = p / clique;
    std::vector<NodePair> edges;
    CouplingMap theta;
    for (int c = 0; c < cliques; ++c) {
        const int base = c * clique;
        for (int a = 0; a < clique; ++a) {
            for (int b = a + 1; b < clique; ++b) {
                const auto key = make_pair_key(base + a, base + b);
                if (removed && *removed == key) continue;
                // Canonical matching inside each clique: local 2m with 2m+1.
                const bool matched = (a % 2 == 0) && (b == a + 1);
                edges.push_back(key);
                theta[key] = matched ? alpha : beta;
            }
        }
    }
    return IsingModel(Graph(p, std::move(edges)), std::move(theta), ParamBounds{alpha, beta, d});
}

}  // namespace detail

/// Base model: floor(p/(d+1)) cliques of size d+1, matching edges at alpha,
/// all other clique edges at beta; leftover nodes isolated. One variant per
/// matching edge, with just that edge removed.
inline CliqueEnsemble build_ensemble(int p, int d, double alpha, double beta) {
    if (d < 1 || d % 2 == 0) throw std::invalid_argument("build_ensemble: d must be odd and >= 1");
    if (p < d + 1) throw std::invalid_argument("build_ensemble: need p >= d + 1");
    if (!(alpha > 0.0) || alpha > beta) throw std::invalid_argument("build_ensemble: need 0 < alpha <= beta");

    CliqueEnsemble ens{p, d, alpha, beta, detail::make_clique_model(p, d, alpha, beta, nullptr), {}};
    const int clique = d + 1;
    const int cliques = p / clique;
    for (int c = 0; c < cliques; ++c) {
        const int base = c * clique;
        for (int m = 0; m < clique / 2; ++m) {
            const NodePair removed = make_pair_key(base + 2 * m, base + 2 * m + 1);
            ens.variants.push_back({removed.first, removed.second,
                                    detail::make_clique_model(p, d, alpha, beta, &removed)});
        }
    }
    return ens;
}

/// Restriction of `model` to the clique containing `node` (the cliques are
/// disconnected, so the restriction equals the marginal).
inline IsingModel project_to_clique(const CliqueEnsemble& ens, const IsingModel& model, int node) {
    const int clique = ens.d + 1;
    const int base = (node / clique) * clique;
    std::vector<NodePair> edges;
    CouplingMap theta;
    for (const auto& [edge, value] : model.couplings()) {
        if (edge.first >= base && edge.first < base + clique && edge.second >= base &&
            edge.second < base + clique) {
            const auto key = make_pair_key(edge.first - base, edge.second - base);
            edges.push_back(key);
            theta[key] = value;
        }
    }
    return IsingModel(Graph(clique, std::move(edges)), std::move(theta), model.bounds());
}

namespace detail {

// The edge present in `base` but absent in `variant`, if any.
inline std::optional<NodePair> removed_edge(const IsingModel& base, const IsingModel& variant) {
    for (const auto& e : base.graph().edges())
        if (!variant.graph().has_edge(e.first, e.second)) return e;
    return std::nullopt;
}

}  // namespace detail

/// KL divergence of the initial stationary sample, computed over the
/// affected clique: sum_sigma P_variant(sigma) log(P_variant/P_base).
inline double exact_C1(const IsingModel& base_clique, const IsingModel& variant_clique) {
    const int p = base_clique.node_count();
    if (p > 20) throw std::invalid_argument("exact_C1: clique too large");
    if (variant_clique.node_count() != p) throw std::invalid_argument("exact_C1: size mismatch");
    const auto pb = exact_gibbs(base_clique);
    const auto pv = exact_gibbs(variant_clique);
    double kl = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << p); ++mask)
        kl += pv.prob(mask) * std::log(pv.prob(mask) / pb.prob(mask));
    return kl;
}

/// Per-step KL term for l >= 2: (2/p_ambient) times the expected conditional
/// KL of a resampling of u (removed-edge endpoint), with the pre-update
/// configuration drawn from the variant's stationary measure. The factor 2
/// folds in the symmetric v term; 1/p_ambient is the chance of picking u.
inline double exact_Cl(const IsingModel& base_clique, const IsingModel& variant_clique,
                       int p_ambient) {
    const int p = base_clique.node_count();
    if (p > 20) throw std::invalid_argument("exact_Cl: clique too large");
    if (p_ambient < p) throw std::invalid_argument("exact_Cl: ambient p smaller than clique");
    const auto removed = detail::removed_edge(base_clique, variant_clique);
    if (!removed) return 0.0;  // identical models, every per-step ratio is 1
    const int u = removed->first;

    const auto pv = exact_gibbs(variant_clique);
    double expectation = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
        const SpinConfiguration sigma = config_of_mask(mask, p);
        const double pv_plus = update_prob_plus(variant_clique, sigma, u);
        const double pb_plus = update_prob_plus(base_clique, sigma, u);
        const double step_kl = pv_plus * std::log(pv_plus / pb_plus) +
                               (1.0 - pv_plus) * std::log((1.0 - pv_plus) / (1.0 - pb_plus));
        expectation += pv.prob(mask) * step_kl;
    }
    return (2.0 / static_cast<double>(p_ambient)) * expectation;
}

/// Chain-rule total over n samples: C1 + (n-1) Cl. The per-step terms are
/// equal because the initial draw is stationary and the chain homogeneous.
inline double kl_total(double c1, double cl, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("kl_total: n must be >= 1");
    return c1 + static_cast<double>(n - 1) * cl;
}

/// Closed-form upper bound: 4 alpha + (n/p) 18 alpha d e^d e^{-2 beta d / 3}.
inline double kl_bound(std::int64_t n, int p, double alpha, double beta, int d) {
    if (n < 0 || p < 1 || d < 1 || !(alpha > 0.0))
        throw std::invalid_argument("kl_bound: bad parameters");
    return 4.0 * alpha + (static_cast<double>(n) / static_cast<double>(p)) * 18.0 * alpha *
                             static_cast<double>(d) * std::exp(static_cast<double>(d)) *
                             std::exp(-2.0 * beta * static_cast<double>(d) / 3.0);
}

struct MagnetizationTail {
    double exact = 0.0;  // P(|sum sigma| <= d/3 + 1) by enumeration
    double bound = 0.0;  // d (3e)^{d/3+1} e^{-beta d (d-3) / 3}
};

/// Small-magnetization probability of a single-clique model versus its
/// closed-form tail bound; d is the clique size minus one.
inline MagnetizationTail magnetization_tail(const IsingModel& clique_model, double beta) {
    const int p = clique_model.node_count();
    if (p > 20) throw std::invalid_argument("magnetization_tail: clique too large");
    const int d = p - 1;
    const auto dist = exact_gibbs(clique_model);
    const double cutoff = static_cast<double>(d) / 3.0 + 1.0;
    double mass = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
        const int plus = std::popcount(mask);
        const int magnetization = 2 * plus - p;
        if (std::abs(magnetization) <= cutoff) mass += dist.prob(mask);
    }
    MagnetizationTail result;
    result.exact = mass;
    result.bound = static_cast<double>(d) *
                   std::pow(3.0 * std::exp(1.0), static_cast<double>(d) / 3.0 + 1.0) *
                   std::exp(-beta * static_cast<double>(d) * static_cast<double>(d - 3) / 3.0);
    return result;
}

struct FanoResult {
    double gamma = 0.0;
    double risk_bound = 0.0;
    bool applicable = false;  // requires 0 < gamma < 1/8
};

/// Fano risk bound from per-hypothesis KL values (natural logs):
/// gamma = sum(KL) / ((M+1) ln M); if 0 < gamma < 1/8 the minimax risk is
/// at least (ln(M+1) - 1)/ln M - gamma.
inline FanoResult fano_bound(const std::vector<double>& kl_values, int M) {
    if (M < 2) throw std::invalid_argument("fano_bound: M must be >= 2");
    if (static_cast<int>(kl_values.size()) != M)
        throw std::invalid_argument("fano_bound: need exactly M KL values");
    double sum = 0.0;
    for (double v : kl_values) sum += v;
    FanoResult r;
    r.gamma = sum / ((static_cast<double>(M) + 1.0) * std::log(static_cast<double>(M)));
    r.applicable = r.gamma > 0.0 && r.gamma < 0.125;
    if (r.applicable)
        r.risk_bound = (std::log(static_cast<double>(M) + 1.0) - 1.0) /
                           std::log(static_cast<double>(M)) - r.gamma;
    return r;
}

/// Observation-time floor for nontrivial minimax risk:
/// (e^{2 beta d / 3} / (32 e^6 alpha)) ln p.
inline double theorem2_T(int p, int d, double alpha, double beta) {
    if (p < 2 || d < 1 || !(alpha > 0.0)) throw std::invalid_argument("theorem2_T: bad parameters");
    return std::exp(2.0 * beta * static_cast<double>(d) / 3.0) /
           (32.0 * std::exp(6.0) * alpha) * std::log(static_cast<double>(p));
}

/// Brute-force KL between the trace laws of variant and base by summing
/// over all sample paths (sigma^(1..n), I^(2..n)); the ambient node count
/// equals the clique size here, so update indices range over the clique.
/// Validates the C1 + (n-1) Cl decomposition including the cancellation of
/// the uniform node-index factors.
inline double path_space_kl(const IsingModel& base_clique, const IsingModel& variant_clique,
                            std::int64_t n) {
    const int p = base_clique.node_count();
    if (p > 10) throw std::invalid_argument("path_space_kl: clique too large for path enumeration");
    if (n < 1 || n > 4) throw std::invalid_argument("path_space_kl: n must be in [1, 4]");
    const auto pv = exact_gibbs(variant_clique);
    const auto pb = exact_gibbs(base_clique);

    const double node_pick = 1.0 / static_cast<double>(p);
    double kl = 0.0;

    // Depth-first over (current state, step); weight carries Q_variant of the
    // partial path, log_ratio the accumulated log(Q_variant / Q_base). The
    // uniform index factors multiply the weight but cancel in the ratio.
    struct Frame {
        std::uint32_t mask;
        std::int64_t step;
        double weight;
        double log_ratio;
    };
    std::vector<Frame> stack;
    for (std::uint32_t mask = 0; mask < (1u << p); ++mask)
        stack.push_back({mask, 1, pv.prob(mask), std::log(pv.prob(mask) / pb.prob(mask))});

    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.step == n) {
            kl += f.weight * f.log_ratio;
            continue;
        }
        const SpinConfiguration sigma = config_of_mask(f.mask, p);
        for (int node = 0; node < p; ++node) {
            const double pv_plus = update_prob_plus(variant_clique, sigma, node);
            const double pb_plus = update_prob_plus(base_clique, sigma, node);
            for (int s = 0; s < 2; ++s) {
                const bool plus = s == 1;
                const double prob_v = plus ? pv_plus : 1.0 - pv_plus;
                const double prob_b = plus ? pb_plus : 1.0 - pb_plus;
                std::uint32_t next = f.mask;
                if (plus) next |= (1u << node);
                else next &= ~(1u << node);
                stack.push_back({next, f.step + 1, f.weight * node_pick * prob_v,
                                 f.log_ratio + std::log(prob_v / prob_b)});
            }
        }
    }
    return kl;
}

/// Per-variant report row for the ensemble KL computation.
struct KlReport {
    int u = 0;
    int v = 0;
    double C1 = 0.0;
    double Cl = 0.0;
    std::int64_t n = 0;
    double total = 0.0;
    double bound = 0.0;
};

inline KlReport kl_report(const CliqueEnsemble& ens, const CliqueEnsemble::Variant& variant,
                          std::int64_t n) {
    const IsingModel base_clique = project_to_clique(ens, ens.base, variant.u);
    const IsingModel variant_clique = project_to_clique(ens, variant.model, variant.u);
    KlReport r;
    r.u = variant.u;
    r.v = variant.v;
    r.C1 = exact_C1(base_clique, variant_clique);
    r.Cl = exact_Cl(base_clique, variant_clique, ens.p);
    r.n = n;
    r.total = kl_total(r.C1, r.Cl, n);
    r.bound = kl_bound(n, ens.p, ens.alpha, ens.beta, ens.d);
    return r;
}

}  // namespace glauber
