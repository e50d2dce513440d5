// Exact small-instance ground truth: full Gibbs tables by enumeration,
// closed-form single-site conditionals, and the algebraic identities that
// relate them to edge couplings. Everything here is a pure function of
// immutable inputs.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "glauber/ising.hpp"
#include "glauber/learner.hpp"
#include "glauber/simulate.hpp"
#include "glauber/trace.hpp"

namespace glauber {

// Configurations are indexed by bitmask: bit i set means sigma_i = +1.
inline SpinConfiguration config_of_mask(std::uint32_t mask, int p) {
    std::vector<std::int8_t> s(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i) s[static_cast<size_t>(i)] = (mask >> i) & 1u ? 1 : -1;
    return SpinConfiguration(std::move(s));
}

inline std::uint32_t mask_of_config(const SpinConfiguration& config) {
    std::uint32_t mask = 0;
    for (int i = 0; i < config.size(); ++i)
        if (config[i] == 1) mask |= (1u << i);
    return mask;
}

/// Full 2^p Gibbs table. Guarded at p <= 20 (about 8 MB of weights).
class ExactDistribution {
  public:
    ExactDistribution(int p, std::vector<double> weights)
        : p_(p), weights_(std::move(weights)) {
        z_ = 0.0;
        for (double w : weights_) z_ += w;
        if (!(z_ > 0.0) || !std::isfinite(z_)) throw std::runtime_error("partition function not positive and finite");
        probs_.resize(weights_.size());
        for (size_t m = 0; m < weights_.size(); ++m) probs_[m] = weights_[m] / z_;
    }

    int node_count() const { return p_; }
    double Z() const { return z_; }
    double weight(std::uint32_t mask) const { return weights_[mask]; }
    double prob(std::uint32_t mask) const { return probs_[mask]; }
    const std::vector<double>& probabilities() const { return probs_; }
    size_t state_count() const { return probs_.size(); }

    /// Inverse-CDF sample; returns a configuration bitmask.
    std::uint32_t sample(Rng& rng) const {
        if (cdf_.empty()) {
            cdf_.resize(probs_.size());
            double acc = 0.0;
            for (size_t m = 0; m < probs_.size(); ++m) {
                acc += probs_[m];
                cdf_[m] = acc;
            }
            cdf_.back() = 1.0;
        }
        const double u = rng.uniform01();
        auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<std::uint32_t>(it - cdf_.begin());
    }

  private:
    int p_;
    std::vector<double> weights_;
    std::vector<double> probs_;
    double z_ = 0.0;
    mutable std::vector<double> cdf_;
};

/// Enumerates all 2^p configurations; weight(sigma) = exp(sum theta sigma sigma).
inline ExactDistribution exact_gibbs(const IsingModel& model) {
    const int p = model.node_count();
    if (p < 1 || p > 20) throw std::invalid_argument("exact_gibbs: p must be in [1, 20]");
    const auto& edges = model.graph().edges();
    std::vector<double> thetas;
    thetas.reserve(edges.size());
    for (const auto& e : edges) thetas.push_back(model.coupling(e.first, e.second));

    const std::uint32_t n = 1u << p;
    std::vector<double> weights(n);
    for (std::uint32_t mask = 0; mask < n; ++mask) {
        double energy = 0.0;
        for (size_t e = 0; e < edges.size(); ++e) {
            const double si = (mask >> edges[e].first) & 1u ? 1.0 : -1.0;
            const double sj = (mask >> edges[e].second) & 1u ? 1.0 : -1.0;
            energy += thetas[e] * si * sj;
        }
        if (energy > 700.0) throw std::runtime_error("exact_gibbs: energy too large for direct exponentiation");
        weights[mask] = std::exp(energy);
    }
    return ExactDistribution(p, std::move(weights));
}

/// Spin values for the conditioning set, as (node, spin) pairs.
using Assignment = std::vector<std::pair<int, std::int8_t>>;

struct ConditionalPair {
    double p_plus = 0.0;   // P(sigma_i = +1 | neighbors = x, sigma_j = +1)
    double p_minus = 0.0;  // P(sigma_i = +1 | neighbors = x, sigma_j = -1)
};

namespace detail {

// Field contribution of the fixed neighbors (all of the neighborhood of i
// except j); throws unless x assigns each of them exactly.
inline double rest_field(const IsingModel& model, int i, int j, const Assignment& x) {
    double field = 0.0;
    size_t used = 0;
    for (const auto& [u, theta] : model.incident(i)) {
        if (u == j) continue;
        bool found = false;
        for (const auto& [node, spin] : x) {
            if (node == u) {
                field += theta * static_cast<double>(spin);
                found = true;
                ++used;
                break;
            }
        }
        if (!found) throw std::invalid_argument("assignment missing neighbor " + std::to_string(u));
    }
    for (const auto& [node, spin] : x) {
        (void)spin;
        if (node == i || node == j) throw std::invalid_argument("assignment must not include i or j");
    }
    (void)used;
    return field;
}

}  // namespace detail

/// Closed-form conditionals: conditioning on all of i's neighborhood pins
/// the update law, so p+ and p- come straight from the logistic form. When
/// j is not a neighbor of i, sigma_j enters with coupling zero.
inline ConditionalPair exact_conditionals(const IsingModel& model, int i, int j,
                                          const Assignment& x) {
    if (i == j) throw std::invalid_argument("exact_conditionals: i == j");
    const double rest = detail::rest_field(model, i, j, x);
    const double theta_ij = model.coupling(i, j);
    return ConditionalPair{update_prob_plus_from_field(rest + theta_ij),
                           update_prob_plus_from_field(rest - theta_ij)};
}

/// Same conditionals computed by summing the full Gibbs table. Kept as an
/// independent route for cross-checking the closed form (p <= 20).
inline ConditionalPair exact_conditionals_from_table(const IsingModel& model, int i, int j,
                                                     const Assignment& x) {
    if (i == j) throw std::invalid_argument("exact_conditionals_from_table: i == j");
    const auto dist = exact_gibbs(model);
    const int p = model.node_count();

    // Verify the assignment covers the neighborhood (matching the closed form).
    (void)detail::rest_field(model, i, j, x);

    auto conditional = [&](std::int8_t sj) {
        double num = 0.0, den = 0.0;
        for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
            const bool j_plus = (mask >> j) & 1u;
            if ((sj == 1) != j_plus) continue;
            bool consistent = true;
            for (const auto& [node, spin] : x) {
                const bool bit = (mask >> node) & 1u;
                if ((spin == 1) != bit) {
                    consistent = false;
                    break;
                }
            }
            if (!consistent) continue;
            den += dist.prob(mask);
            if ((mask >> i) & 1u) num += dist.prob(mask);
        }
        if (!(den > 0.0)) throw std::runtime_error("conditioning event has zero probability");
        return num / den;
    };
    return ConditionalPair{conditional(1), conditional(-1)};
}

/// | e^{4 theta_ij} - p+(1-p-) / (p-(1-p+)) |. Identically ~0 for every
/// model and assignment, including non-edges (both sides are then 1).
inline double edge_identity_residual(const IsingModel& model, int i, int j, const Assignment& x) {
    const auto c = exact_conditionals(model, i, j, x);
    const double lhs = std::exp(4.0 * model.coupling(i, j));
    const double rhs = (c.p_plus * (1.0 - c.p_minus)) / (c.p_minus * (1.0 - c.p_plus));
    return std::abs(lhs - rhs);
}

struct Lemma1Result {
    double lower = 0.0;   // b - a
    double middle = 0.0;  // b(1-a)/(a(1-b)) - 1
    double upper = 0.0;   // (b-a)/(a(1-b)^2)
    bool holds = false;
};

/// Sandwich of the odds-ratio deviation between b-a and (b-a)/(a(1-b)^2),
/// valid for 0 < a <= b < 1 with a <= 1/2.
inline Lemma1Result lemma1_check(double a, double b) {
    if (!(a > 0.0) || !(a <= b) || !(b < 1.0) || !(a <= 0.5))
        throw std::invalid_argument("lemma1_check: need 0 < a <= b < 1 and a <= 1/2");
    Lemma1Result r;
    r.lower = b - a;
    r.middle = (b * (1.0 - a)) / (a * (1.0 - b)) - 1.0;
    r.upper = (b - a) / (a * (1.0 - b) * (1.0 - b));
    r.holds = r.lower <= r.middle && r.middle <= r.upper;
    return r;
}

/// sign(theta_ij)(p+ - p-) <= e^{4|theta_ij|} - 1 <= 8 e^{8 beta d} sign(theta_ij)(p+ - p-).
/// The upper comparison uses sign(theta)(p+ - p-) on the right for both
/// coupling signs; the negative-coupling display in the source derivation
/// carries an evident typo ((p- - p-) for (p- - p+)), corrected here.
inline bool squeeze_check(const IsingModel& model, int i, int j, const Assignment& x) {
    const double theta = model.coupling(i, j);
    if (theta == 0.0) throw std::invalid_argument("squeeze_check: {i,j} must be an edge");
    const auto c = exact_conditionals(model, i, j, x);
    const double sign = theta > 0.0 ? 1.0 : -1.0;
    const double gap = sign * (c.p_plus - c.p_minus);
    const double mid = std::exp(4.0 * std::abs(theta)) - 1.0;
    const auto& b = model.bounds();
    const double amp = 8.0 * std::exp(8.0 * b.beta * static_cast<double>(b.max_degree));
    return gap <= mid && mid <= amp * gap;
}

/// Every assignment of the conditioning set (all neighbors of i except j).
inline std::vector<Assignment> enumerate_assignments(const IsingModel& model, int i, int j) {
    std::vector<int> rest;
    for (const auto& [u, theta] : model.incident(i)) {
        (void)theta;
        if (u != j) rest.push_back(u);
    }
    std::vector<Assignment> out;
    const size_t n = rest.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        Assignment a;
        a.reserve(n);
        for (size_t b = 0; b < n; ++b)
            a.push_back({rest[b], (mask >> b) & 1u ? std::int8_t{1} : std::int8_t{-1}});
        out.push_back(std::move(a));
    }
    return out;
}

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::uint64_t reps = 0;
};

/// Monte Carlo estimate of E_x[X_ij] over one window of length L, using
/// `reps` independent single-window simulations started from x. Each rep
/// exercises the production simulator and statistic end to end.
inline McEstimate mc_expected_statistic(const IsingModel& model, const SpinConfiguration& x,
                                        int i, int j, double L, std::uint64_t reps, RngSeed seed) {
    if (reps < 1000) throw std::invalid_argument("mc_expected_statistic: reps must be >= 1000");
    long long sum = 0;
    std::uint64_t nonzero = 0;
    for (std::uint64_t r = 0; r < reps; ++r) {
        const Trace trace = simulate_ct(model, x, L, substream(seed, r));
        const int value = edge_statistic(trace, i, j, 1, L);
        sum += value;
        if (value != 0) ++nonzero;
    }
    McEstimate est;
    est.reps = reps;
    est.mean = static_cast<double>(sum) / static_cast<double>(reps);
    // X^2 is 4 on the nonzero outcomes, so the sample variance has a closed form.
    const double n = static_cast<double>(reps);
    const double second_moment = 4.0 * static_cast<double>(nonzero) / n;
    const double var = (second_moment - est.mean * est.mean) * n / (n - 1.0);
    est.stderr_ = std::sqrt(std::max(var, 0.0) / n);
    return est;
}

/// No neighbor of i other than possibly j updates during window k.
/// Diagnostic only; requires the true graph.
inline bool event_D(const Trace& trace, const Graph& graph, int i, int j, std::uint64_t k,
                    double L) {
    detail::check_window(trace, k, L);
    const auto w = detail::window_bounds(k, L);
    for (int u : graph.neighbors(i)) {
        if (u == j) continue;
        if (trace.count_in(u, w.begin, w.end) > 0) return false;
    }
    return true;
}

struct ADIndependence {
    double p_a = 0.0;
    double p_d = 0.0;
    double p_ad = 0.0;
    double discrepancy = 0.0;
    double tolerance = 0.0;
    bool ok = false;
};

/// Empirically verifies that the update-pattern event A and the quiet-
/// neighborhood event D are independent: they are driven by disjoint
/// Poisson clocks ({i,j} versus the other neighbors of i).
inline ADIndependence independence_AD_check(const IsingModel& model, int i, int j, double L,
                                            std::uint64_t reps, RngSeed seed) {
    if (reps < 10000) throw std::invalid_argument("independence_AD_check: reps must be >= 10000");
    // Clock-disjointness at the code level: the sets {i, j} and the
    // remaining neighbors of i never overlap in a simple graph.
    for (int u : model.graph().neighbors(i)) {
        if (u == j) continue;
        if (u == i || u == j) throw std::logic_error("A and D clock sets overlap");
    }

    std::uint64_t count_a = 0, count_d = 0, count_ad = 0;
    SpinConfiguration x = SpinConfiguration::all_plus(model.node_count());
    for (std::uint64_t r = 0; r < reps; ++r) {
        const Trace trace = simulate_ct(model, x, L, substream(seed, r));
        const bool a = event_A(trace, i, j, 1, L);
        const bool d = event_D(trace, model.graph(), i, j, 1, L);
        count_a += a;
        count_d += d;
        count_ad += a && d;
    }
    ADIndependence result;
    const double n = static_cast<double>(reps);
    result.p_a = static_cast<double>(count_a) / n;
    result.p_d = static_cast<double>(count_d) / n;
    result.p_ad = static_cast<double>(count_ad) / n;
    result.discrepancy = std::abs(result.p_ad - result.p_a * result.p_d);
    auto se = [n](double prob) { return std::sqrt(std::max(prob * (1.0 - prob), 0.0) / n); };
    result.tolerance = 4.0 * (se(result.p_ad) + result.p_d * se(result.p_a) + result.p_a * se(result.p_d));
    // Fully deterministic corner: with no other neighbors, D always holds.
    if (model.graph().degree(i) <= 1) result.tolerance = std::max(result.tolerance, 4.0 * se(result.p_a));
    result.ok = result.discrepancy <= result.tolerance;
    return result;
}

/// Total-variation distance between the exact Gibbs table and the empirical
/// end-state distribution of n_runs chains started from exact Gibbs samples
/// and evolved for T_burn time units.
inline double stationarity_tv(const IsingModel& model, double T_burn, std::uint64_t n_runs,
                              RngSeed seed) {
    const int p = model.node_count();
    if (p > 10) throw std::invalid_argument("stationarity_tv: p must be <= 10");
    const auto dist = exact_gibbs(model);
    std::vector<std::uint64_t> counts(dist.state_count(), 0);
    Rng init_rng(seed.seed, seed.stream ^ 0x5A5A5A5AULL);
    for (std::uint64_t r = 0; r < n_runs; ++r) {
        SpinConfiguration config = config_of_mask(dist.sample(init_rng), p);
        if (T_burn > 0.0) {
            RngSeed sub = substream(seed, r + 1);
            Rng clock = clock_rng(sub);
            Rng spins = spin_rng(sub);
            evolve_ct(model, config, T_burn, clock, spins);
        }
        ++counts[mask_of_config(config)];
    }
    double tv = 0.0;
    for (size_t m = 0; m < counts.size(); ++m) {
        const double emp = static_cast<double>(counts[m]) / static_cast<double>(n_runs);
        tv += std::abs(emp - dist.prob(static_cast<std::uint32_t>(m)));
    }
    return 0.5 * tv;
}

}  // namespace glauber
