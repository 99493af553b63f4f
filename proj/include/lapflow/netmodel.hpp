#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lapflow/numkernel.hpp"

namespace lapflow {

/// Directed edge from -> to. a_ij is the weight of edge i -> j.
struct Edge {
    Index from = 0;
    Index to = 0;
    Complex weight;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable weighted graph. Edges are sorted by (from, to); undirected
/// graphs store both orientations of every edge with identical weights.
class ComplexGraph {
public:
    Index size() const { return n_; }
    bool directed() const { return directed_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::string>& labels() const { return labels_; }

    friend bool operator==(const ComplexGraph&, const ComplexGraph&) = default;

private:
    friend ComplexGraph build_graph(Index, bool, std::vector<Edge>, std::vector<std::string>);

    Index n_ = 0;
    bool directed_ = false;
    std::vector<Edge> edges_;
    std::vector<std::string> labels_;
};

/// Validates and canonicalizes an edge list. For undirected graphs either
/// orientation (or both, with equal weights) may be supplied. Throws
/// ContractError on out-of-range indices, self-loops, duplicate ordered
/// pairs, zero or non-finite weights, and asymmetric undirected weights.
/// `labels` must be empty or have exactly n entries.
ComplexGraph build_graph(Index n, bool directed, std::vector<Edge> edges,
                         std::vector<std::string> labels = {});

ComplexMatrix adjacency(const ComplexGraph& g);

/// diag(A 1): entry i is the sum of row i of A taken in ascending column order.
ComplexMatrix out_degree_matrix(const ComplexGraph& g);

enum class GraphClass { UnsignedUndirected, SignedUndirected, UnsignedDigraph, SignedDigraph };

std::string_view to_string(GraphClass c);

/// Balance tolerance, relative to max(1, |A|_inf).
inline constexpr double kBalanceTol = 1e-9;

struct StructureReport {
    GraphClass graph_class = GraphClass::UnsignedUndirected;
    bool directed = false;
    /// Connected (undirected) or strongly connected (directed).
    bool connected = false;
    /// Always true for undirected graphs.
    bool weight_balanced = true;
    /// Connected components (undirected) or strongly connected components (directed).
    Index component_count = 0;

    bool is_signed() const {
        return graph_class == GraphClass::SignedUndirected || graph_class == GraphClass::SignedDigraph;
    }
};

StructureReport classify(const ComplexGraph& g);

/// Labels of the strongly connected components on the support graph;
/// component ids are dense, in order of first completion (Tarjan).
std::vector<Index> strong_components(const ComplexGraph& g);

/// True iff every weight has Re >= 0 and Im >= 0.
bool is_unsigned_weight(Complex w);

}  // namespace lapflow
