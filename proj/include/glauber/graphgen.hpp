// Graph generators for experiments.
#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "glauber/graph.hpp"
#include "glauber/model_io.hpp"
#include "glauber/rng.hpp"

namespace glauber {

inline Graph empty_graph(int p) { return Graph(p, {}); }

inline Graph single_edge_graph(int p) {
    if (p < 2) throw std::invalid_argument("single_edge_graph: need p >= 2");
    return Graph(p, {{0, 1}});
}

inline Graph path_graph(int p) {
    std::vector<NodePair> edges;
    for (int i = 0; i + 1 < p; ++i) edges.push_back({i, i + 1});
    return Graph(p, std::move(edges));
}

inline Graph cycle_graph(int p) {
    if (p < 3) throw std::invalid_argument("cycle_graph: need p >= 3");
    std::vector<NodePair> edges;
    for (int i = 0; i + 1 < p; ++i) edges.push_back({i, i + 1});
    edges.push_back({0, p - 1});
    return Graph(p, std::move(edges));
}

inline Graph grid_graph(int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("grid_graph: need rows, cols >= 1");
    std::vector<NodePair> edges;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
            if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
        }
    }
    return Graph(rows * cols, std::move(edges));
}

/// Random d-regular graph via the pairing (configuration) model: d stubs
/// per node, shuffled and paired; a pairing containing a self-loop or a
/// repeated edge is rejected wholesale and redrawn.
inline Graph random_regular_graph(int p, int d, RngSeed seed) {
    if (p < 1 || d < 0) throw std::invalid_argument("random_regular_graph: bad p or d");
    if (d >= p) throw std::invalid_argument("random_regular_graph: need d < p");
    if ((static_cast<long long>(p) * d) % 2 != 0)
        throw std::invalid_argument("random_regular_graph: p*d must be even");

    Rng rng(seed);
    std::vector<int> stubs(static_cast<size_t>(p) * static_cast<size_t>(d));
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < d; ++k) stubs[static_cast<size_t>(i) * d + k] = i;

    const int max_attempts = 10000;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        // Fisher-Yates with our own uniform draws, for cross-platform determinism.
        for (size_t k = stubs.size(); k > 1; --k) {
            const size_t pick = rng.below(static_cast<std::uint32_t>(k));
            std::swap(stubs[k - 1], stubs[pick]);
        }
        std::vector<NodePair> edges;
        std::set<NodePair> seen;
        bool ok = true;
        for (size_t k = 0; k + 1 < stubs.size(); k += 2) {
            const int a = stubs[k], b = stubs[k + 1];
            if (a == b || !seen.insert(make_pair_key(a, b)).second) {
                ok = false;
                break;
            }
            edges.push_back(make_pair_key(a, b));
        }
        if (ok) return Graph(p, std::move(edges));
    }
    throw std::runtime_error("random_regular_graph: pairing rejected too many times");
}

/// Disjoint (d+1)-cliques, the graph part of the hard ensemble.
inline Graph clique_ensemble_graph(int p, int d) {
    if (d < 1 || p < d + 1) throw std::invalid_argument("clique_ensemble_graph: need p >= d+1 >= 2");
    const int clique = d + 1;
    std::vector<NodePair> edges;
    for (int c = 0; c < p / clique; ++c) {
        const int base = c * clique;
        for (int a = 0; a < clique; ++a)
            for (int b = a + 1; b < clique; ++b) edges.push_back({base + a, base + b});
    }
    return Graph(p, std::move(edges));
}

struct GraphSpec {
    std::string name;  // empty | single-edge | path | cycle | grid | random-d-regular | clique-ensemble | file
    int p = 0;
    int d = 0;
    int rows = 0;
    int cols = 0;
    std::string path;  // for name == "file"
    RngSeed seed;
};

inline Graph generate_graph(const GraphSpec& spec) {
    if (spec.name == "empty") return empty_graph(spec.p);
    if (spec.name == "single-edge") return single_edge_graph(spec.p);
    if (spec.name == "path") return path_graph(spec.p);
    if (spec.name == "cycle") return cycle_graph(spec.p);
    if (spec.name == "grid") return grid_graph(spec.rows, spec.cols);
    if (spec.name == "random-d-regular") return random_regular_graph(spec.p, spec.d, spec.seed);
    if (spec.name == "clique-ensemble") return clique_ensemble_graph(spec.p, spec.d);
    if (spec.name == "file") return read_model_file(spec.path).graph();
    throw std::invalid_argument("unknown graph spec '" + spec.name + "'");
}

}  // namespace glauber
