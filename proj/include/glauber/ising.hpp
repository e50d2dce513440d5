// Zero-field Ising model: graph, per-edge couplings, and the single-site
// conditional update probabilities that drive the Glauber dynamics.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "glauber/graph.hpp"
#include "glauber/rng.hpp"

namespace glauber {

using CouplingMap = std::map<NodePair, double>;

/// Coupling-strength window [alpha, beta] and the declared max degree.
struct ParamBounds {
    double alpha = 0.0;
    double beta = 0.0;
    int max_degree = 0;
};

class SpinConfiguration {
  public:
    SpinConfiguration() = default;

    explicit SpinConfiguration(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
        for (auto s : spins_)
            if (s != 1 && s != -1) throw std::invalid_argument("spin must be +1 or -1");
    }

    static SpinConfiguration all_plus(int p) {
        return SpinConfiguration(std::vector<std::int8_t>(static_cast<size_t>(p), 1));
    }

    static SpinConfiguration uniform_random(int p, Rng& rng) {
        std::vector<std::int8_t> s(static_cast<size_t>(p));
        for (auto& v : s) v = rng.spin(0.5);
        return SpinConfiguration(std::move(s));
    }

    int size() const { return static_cast<int>(spins_.size()); }
    std::int8_t operator[](int i) const { return spins_[static_cast<size_t>(i)]; }

    void set(int i, std::int8_t s) {
        if (s != 1 && s != -1) throw std::invalid_argument("spin must be +1 or -1");
        spins_[static_cast<size_t>(i)] = s;
    }

    void flip(int i) { spins_[static_cast<size_t>(i)] = static_cast<std::int8_t>(-spins_[static_cast<size_t>(i)]); }

    const std::vector<std::int8_t>& raw() const { return spins_; }

    bool operator==(const SpinConfiguration& o) const { return spins_ == o.spins_; }

  private:
    std::vector<std::int8_t> spins_;
};

/// Problems found when checking a (graph, couplings, bounds) triple.
struct ValidationReport {
    std::vector<std::string> issues;
    bool ok() const { return issues.empty(); }
};

/// Reports every violation of the model class: couplings off the edge set,
/// magnitudes outside [alpha, beta], degrees above the declared bound.
inline ValidationReport validate_model(const Graph& graph, const CouplingMap& theta,
                                       const ParamBounds& bounds) {
    ValidationReport report;
    auto add = [&report](const std::string& msg) { report.issues.push_back(msg); };

    if (!(bounds.alpha > 0.0) || bounds.alpha > bounds.beta)
        add("bounds must satisfy 0 < alpha <= beta");

    for (const auto& [edge, value] : theta) {
        std::ostringstream name;
        name << "theta_" << edge.first << "_" << edge.second;
        if (!graph.has_edge(edge.first, edge.second)) {
            if (value != 0.0) add(name.str() + " nonzero on a non-edge");
            continue;
        }
        double mag = std::abs(value);
        if (mag < bounds.alpha) add("|" + name.str() + "| < alpha");
        if (mag > bounds.beta) add("|" + name.str() + "| > beta");
    }
    for (const auto& edge : graph.edges()) {
        if (theta.find(edge) == theta.end()) {
            std::ostringstream name;
            name << "theta_" << edge.first << "_" << edge.second;
            add(name.str() + " missing for an edge");
        }
    }
    for (int i = 0; i < graph.node_count(); ++i) {
        if (graph.degree(i) > bounds.max_degree)
            add("degree of node " + std::to_string(i) + " exceeds d=" + std::to_string(bounds.max_degree));
    }
    return report;
}

/// Immutable Ising model. Construction enforces membership in the declared
/// model class; reads are safe from any number of threads.
class IsingModel {
  public:
    IsingModel(Graph graph, CouplingMap theta, ParamBounds bounds)
        : graph_(std::move(graph)), bounds_(bounds) {
        auto report = validate_model(graph_, theta, bounds_);
        if (!report.ok()) {
            std::string msg = "invalid model:";
            for (const auto& issue : report.issues) msg += " [" + issue + "]";
            throw std::invalid_argument(msg);
        }
        const int p = graph_.node_count();
        incident_.resize(static_cast<size_t>(p));
        for (int i = 0; i < p; ++i) {
            for (int j : graph_.neighbors(i)) {
                incident_[static_cast<size_t>(i)].push_back({j, theta.at(make_pair_key(i, j))});
            }
        }
        couplings_ = std::move(theta);
    }

    const Graph& graph() const { return graph_; }
    const ParamBounds& bounds() const { return bounds_; }
    int node_count() const { return graph_.node_count(); }

    /// theta_ij, or 0 when {i,j} is not an edge.
    double coupling(int i, int j) const {
        auto it = couplings_.find(make_pair_key(i, j));
        return it == couplings_.end() ? 0.0 : it->second;
    }

    const CouplingMap& couplings() const { return couplings_; }

    /// Neighbors of i with attached coupling values, sorted by neighbor id.
    const std::vector<std::pair<int, double>>& incident(int i) const {
        graph_.check_node(i);
        return incident_[static_cast<size_t>(i)];
    }

  private:
    Graph graph_;
    CouplingMap couplings_;
    ParamBounds bounds_;
    std::vector<std::vector<std::pair<int, double>>> incident_;
};

/// Sum of theta_ij * sigma_j over the neighbors of i (zero when isolated).
inline double local_field(const IsingModel& model, const SpinConfiguration& config, int i) {
    double field = 0.0;
    for (const auto& [j, theta] : model.incident(i))
        field += theta * static_cast<double>(config[j]);
    return field;
}

/// exp(2S)/(1+exp(2S)) evaluated without overflow for any field S.
inline double update_prob_plus_from_field(double field) {
    if (field >= 0.0) return 1.0 / (1.0 + std::exp(-2.0 * field));
    const double e = std::exp(2.0 * field);
    return e / (1.0 + e);
}

/// Probability that a resampling of spin i lands on +1.
inline double update_prob_plus(const IsingModel& model, const SpinConfiguration& config, int i) {
    return update_prob_plus_from_field(local_field(model, config, i));
}

/// Floor on either update outcome: (1/2) exp(-2 beta d).
inline double min_update_prob(double beta, int d) {
    if (beta < 0.0 || d < 0) throw std::invalid_argument("min_update_prob: beta and d must be nonnegative");
    return 0.5 * std::exp(-2.0 * beta * static_cast<double>(d));
}

}  // namespace glauber
