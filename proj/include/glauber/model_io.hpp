// Model file format: header "p d alpha beta", then one "i j theta" line per edge.
#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include "glauber/ising.hpp"

namespace glauber {

inline void write_model(std::ostream& out, const IsingModel& model) {
    const auto& b = model.bounds();
    out << std::setprecision(17);
    out << model.node_count() << ' ' << b.max_degree << ' ' << b.alpha << ' ' << b.beta << '\n';
    for (const auto& [edge, theta] : model.couplings())
        out << edge.first << ' ' << edge.second << ' ' << theta << '\n';
}

inline void write_model_file(const std::string& path, const IsingModel& model) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    write_model(out, model);
}

inline IsingModel read_model(std::istream& in) {
    int p = 0, d = 0;
    double alpha = 0.0, beta = 0.0;
    if (!(in >> p >> d >> alpha >> beta))
        throw std::runtime_error("model file: malformed header (want 'p d alpha beta')");
    std::vector<NodePair> edges;
    CouplingMap theta;
    int i = 0, j = 0;
    double value = 0.0;
    while (in >> i >> j >> value) {
        edges.push_back(make_pair_key(i, j));
        theta[make_pair_key(i, j)] = value;
    }
    if (!in.eof() && in.fail()) {
        in.clear();
        std::string tail;
        std::getline(in, tail);
        throw std::runtime_error("model file: malformed edge line near '" + tail + "'");
    }
    return IsingModel(Graph(p, std::move(edges)), std::move(theta), ParamBounds{alpha, beta, d});
}

inline IsingModel read_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return read_model(in);
}

}  // namespace glauber
