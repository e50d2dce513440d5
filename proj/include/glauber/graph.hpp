// Undirected simple graph with bounded degree, stored as adjacency lists.
#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace glauber {

using NodePair = std::pair<int, int>;

/// Normalizes an unordered node pair to (min, max).
inline NodePair make_pair_key(int i, int j) {
    return i < j ? NodePair{i, j} : NodePair{j, i};
}

class Graph {
  public:
    Graph() = default;

    Graph(int p, std::vector<NodePair> edges) : p_(p), adjacency_(static_cast<size_t>(p)) {
        if (p < 0) throw std::invalid_argument("Graph: negative node count");
        std::set<NodePair> seen;
        for (auto [i, j] : edges) {
            if (i == j) throw std::invalid_argument("Graph: self-loop at node " + std::to_string(i));
            if (i < 0 || i >= p || j < 0 || j >= p)
                throw std::invalid_argument("Graph: node index out of range");
            auto key = make_pair_key(i, j);
            if (!seen.insert(key).second)
                throw std::invalid_argument("Graph: duplicate edge");
            edges_.push_back(key);
            adjacency_[static_cast<size_t>(key.first)].push_back(key.second);
            adjacency_[static_cast<size_t>(key.second)].push_back(key.first);
        }
        std::sort(edges_.begin(), edges_.end());
        for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
    }

    int node_count() const { return p_; }
    const std::vector<NodePair>& edges() const { return edges_; }

    const std::vector<int>& neighbors(int i) const {
        check_node(i);
        return adjacency_[static_cast<size_t>(i)];
    }

    int degree(int i) const { return static_cast<int>(neighbors(i).size()); }

    int max_degree() const {
        int d = 0;
        for (const auto& nbrs : adjacency_) d = std::max(d, static_cast<int>(nbrs.size()));
        return d;
    }

    bool has_edge(int i, int j) const {
        if (i == j) return false;
        check_node(i);
        check_node(j);
        const auto& nbrs = adjacency_[static_cast<size_t>(i)];
        return std::binary_search(nbrs.begin(), nbrs.end(), j);
    }

    void check_node(int i) const {
        if (i < 0 || i >= p_) throw std::out_of_range("node index " + std::to_string(i) + " out of range");
    }

  private:
    int p_ = 0;
    std::vector<NodePair> edges_;
    std::vector<std::vector<int>> adjacency_;
};

}  // namespace glauber
