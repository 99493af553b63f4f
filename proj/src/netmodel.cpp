#include "lapflow/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace lapflow {

namespace {

std::string edge_name(Index from, Index to) {
    return "(" + std::to_string(from) + ", " + std::to_string(to) + ")";
}

}  // namespace

bool is_unsigned_weight(Complex w) { return w.real() >= 0.0 && w.imag() >= 0.0; }

ComplexGraph build_graph(Index n, bool directed, std::vector<Edge> edges,
                         std::vector<std::string> labels) {
    if (n < 1) throw ContractError("build_graph: node count must be at least 1");
    if (!labels.empty() && static_cast<Index>(labels.size()) != n)
        throw ContractError("build_graph: expected " + std::to_string(n) + " labels, got " +
                            std::to_string(labels.size()));

    std::map<std::pair<Index, Index>, Complex> given;
    for (const auto& e : edges) {
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
            throw ContractError("build_graph: edge " + edge_name(e.from, e.to) +
                                " has a node index outside [0, " + std::to_string(n) + ")");
        if (e.from == e.to) throw ContractError("build_graph: self-loop at node " + std::to_string(e.from));
        if (!std::isfinite(e.weight.real()) || !std::isfinite(e.weight.imag()))
            throw ContractError("build_graph: edge " + edge_name(e.from, e.to) + " has a non-finite weight");
        if (e.weight == Complex(0.0, 0.0))
            throw ContractError("build_graph: edge " + edge_name(e.from, e.to) + " has zero weight");
        if (!given.emplace(std::pair{e.from, e.to}, e.weight).second)
            throw ContractError("build_graph: duplicate edge " + edge_name(e.from, e.to));
    }

    if (!directed) {
        for (const auto& [key, w] : given) {
            const auto mirror = given.find({key.second, key.first});
            if (mirror != given.end() && mirror->second != w)
                throw ContractError("build_graph: undirected edge " + edge_name(key.first, key.second) +
                                    " has asymmetric weights");
        }
        std::vector<std::pair<std::pair<Index, Index>, Complex>> closure;
        for (const auto& [key, w] : given)
            if (!given.contains({key.second, key.first})) closure.push_back({{key.second, key.first}, w});
        for (auto& [key, w] : closure) given.emplace(key, w);
    }

    ComplexGraph g;
    g.n_ = n;
    g.directed_ = directed;
    g.labels_ = std::move(labels);
    g.edges_.reserve(given.size());
    for (const auto& [key, w] : given) g.edges_.push_back({key.first, key.second, w});
    return g;
}

ComplexMatrix adjacency(const ComplexGraph& g) {
    ComplexMatrix a = ComplexMatrix::Zero(g.size(), g.size());
    for (const auto& e : g.edges()) a(e.from, e.to) = e.weight;
    return a;
}

ComplexMatrix out_degree_matrix(const ComplexGraph& g) {
    const ComplexMatrix a = adjacency(g);
    ComplexMatrix d = ComplexMatrix::Zero(g.size(), g.size());
    for (Index i = 0; i < g.size(); ++i) {
        Complex sum = 0.0;
        for (Index j = 0; j < g.size(); ++j)
            if (j != i) sum += a(i, j);
        d(i, i) = sum;
    }
    return d;
}

std::string_view to_string(GraphClass c) {
    switch (c) {
        case GraphClass::UnsignedUndirected: return "UnsignedUndirected";
        case GraphClass::SignedUndirected: return "SignedUndirected";
        case GraphClass::UnsignedDigraph: return "UnsignedDigraph";
        case GraphClass::SignedDigraph: return "SignedDigraph";
    }
    return "?";
}

std::vector<Index> strong_components(const ComplexGraph& g) {
    const Index n = g.size();
    std::vector<std::vector<Index>> succ(static_cast<std::size_t>(n));
    for (const auto& e : g.edges())
        if (std::abs(e.weight) > 0.0) succ[static_cast<std::size_t>(e.from)].push_back(e.to);

    // Iterative Tarjan.
    constexpr Index kUnvisited = -1;
    std::vector<Index> index(static_cast<std::size_t>(n), kUnvisited), low(static_cast<std::size_t>(n), 0),
        comp(static_cast<std::size_t>(n), kUnvisited);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<Index> stack;
    std::vector<std::pair<Index, std::size_t>> call;
    Index counter = 0, next_comp = 0;

    for (Index root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != kUnvisited) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& [v, child] = call.back();
            const auto vs = static_cast<std::size_t>(v);
            if (child == 0) {
                index[vs] = low[vs] = counter++;
                stack.push_back(v);
                on_stack[vs] = true;
            }
            if (child < succ[vs].size()) {
                const Index w = succ[vs][child++];
                const auto ws = static_cast<std::size_t>(w);
                if (index[ws] == kUnvisited) {
                    call.push_back({w, 0});
                } else if (on_stack[ws]) {
                    low[vs] = std::min(low[vs], index[ws]);
                }
                continue;
            }
            if (low[vs] == index[vs]) {
                Index w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    comp[static_cast<std::size_t>(w)] = next_comp;
                } while (w != v);
                ++next_comp;
            }
            const Index done = v;
            call.pop_back();
            if (!call.empty()) {
                const auto parent = static_cast<std::size_t>(call.back().first);
                low[parent] = std::min(low[parent], low[static_cast<std::size_t>(done)]);
            }
        }
    }
    return comp;
}

StructureReport classify(const ComplexGraph& g) {
    StructureReport r;
    r.directed = g.directed();
    const bool unsigned_weights = std::all_of(g.edges().begin(), g.edges().end(),
                                              [](const Edge& e) { return is_unsigned_weight(e.weight); });
    if (g.directed())
        r.graph_class = unsigned_weights ? GraphClass::UnsignedDigraph : GraphClass::SignedDigraph;
    else
        r.graph_class = unsigned_weights ? GraphClass::UnsignedUndirected : GraphClass::SignedUndirected;

    const auto comp = strong_components(g);
    r.component_count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    r.connected = r.component_count == 1;

    if (g.directed()) {
        const auto n = static_cast<std::size_t>(g.size());
        std::vector<Complex> imbalance(n);
        std::vector<double> abs_row(n, 0.0);
        for (const auto& e : g.edges()) {
            imbalance[static_cast<std::size_t>(e.from)] += e.weight;
            imbalance[static_cast<std::size_t>(e.to)] -= e.weight;
            abs_row[static_cast<std::size_t>(e.from)] += std::abs(e.weight);
        }
        double worst = 0.0;
        for (const Complex v : imbalance) worst = std::max(worst, std::abs(v));
        const double a_inf = *std::max_element(abs_row.begin(), abs_row.end());
        r.weight_balanced = worst <= kBalanceTol * std::max(1.0, a_inf);
    }
    return r;
}

}  // namespace lapflow
