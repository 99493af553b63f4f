#include <gtest/gtest.h>

#include "generators.hpp"
#include "lapflow/errors.hpp"
#include "lapflow/netmodel.hpp"

using namespace lapflow;
using lapflow::testkit::Rng;

TEST(BuildGraph, UndirectedStoresBothOrientations) {
    const auto g = build_graph(3, false, {{0, 1, Complex(1, 1)}, {2, 1, Complex(2, 0)}});
    ASSERT_EQ(g.edges().size(), 4u);
    const ComplexMatrix a = adjacency(g);
    EXPECT_EQ(a, a.transpose());
    EXPECT_EQ(a(1, 2), Complex(2, 0));
    EXPECT_EQ(a(0, 0), Complex(0, 0));
}

TEST(BuildGraph, EdgesAreSorted) {
    const auto g = build_graph(3, true, {{2, 0, 1.0}, {0, 2, 1.0}, {1, 0, 1.0}});
    for (std::size_t i = 1; i < g.edges().size(); ++i) {
        const auto& p = g.edges()[i - 1];
        const auto& q = g.edges()[i];
        EXPECT_TRUE(p.from < q.from || (p.from == q.from && p.to < q.to));
    }
}

TEST(BuildGraph, RejectsInvalidInput) {
    EXPECT_THROW(build_graph(0, false, {}), ContractError);
    EXPECT_THROW(build_graph(2, false, {{0, 0, 1.0}}), ContractError);
    EXPECT_THROW(build_graph(2, false, {{0, 2, 1.0}}), ContractError);
    EXPECT_THROW(build_graph(2, false, {{-1, 1, 1.0}}), ContractError);
    EXPECT_THROW(build_graph(2, false, {{0, 1, 0.0}}), ContractError);
    EXPECT_THROW(build_graph(2, false, {{0, 1, Complex(std::nan(""), 0)}}), ContractError);
    EXPECT_THROW(build_graph(2, true, {{0, 1, 1.0}, {0, 1, 2.0}}), ContractError);
    EXPECT_THROW(build_graph(2, false, {{0, 1, 1.0}, {1, 0, 2.0}}), ContractError);
    EXPECT_THROW(build_graph(2, false, {}, {"only one"}), ContractError);
    EXPECT_NO_THROW(build_graph(2, false, {{0, 1, 1.0}, {1, 0, 1.0}}));
}

TEST(OutDegree, IsRowSumOfAdjacency) {
    const auto g = build_graph(3, true, {{0, 1, Complex(1, 2)}, {0, 2, Complex(3, -1)}, {2, 1, 0.5}});
    const ComplexMatrix d = out_degree_matrix(g);
    EXPECT_EQ(d(0, 0), Complex(4, 1));
    EXPECT_EQ(d(1, 1), Complex(0, 0));
    EXPECT_EQ(d(2, 2), Complex(0.5, 0));
}

TEST(Classify, GraphClasses) {
    EXPECT_EQ(classify(build_graph(2, false, {{0, 1, Complex(1, 1)}})).graph_class, GraphClass::UnsignedUndirected);
    EXPECT_EQ(classify(build_graph(2, false, {{0, 1, Complex(1, -1)}})).graph_class, GraphClass::SignedUndirected);
    EXPECT_EQ(classify(build_graph(2, false, {{0, 1, -1.0}})).graph_class, GraphClass::SignedUndirected);
    EXPECT_EQ(classify(build_graph(2, true, {{0, 1, 1.0}})).graph_class, GraphClass::UnsignedDigraph);
    EXPECT_EQ(classify(build_graph(2, true, {{0, 1, -1.0}})).graph_class, GraphClass::SignedDigraph);
    EXPECT_EQ(to_string(GraphClass::SignedDigraph), "SignedDigraph");
}

TEST(Classify, CycleIsBalancedAndStronglyConnected) {
    const auto s = classify(build_graph(3, true, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}));
    EXPECT_TRUE(s.directed);
    EXPECT_TRUE(s.connected);
    EXPECT_TRUE(s.weight_balanced);
    EXPECT_EQ(s.component_count, 1);
}

TEST(Classify, DirectedPathIsWeaklyConnectedOnly) {
    const auto s = classify(build_graph(3, true, {{0, 1, 1.0}, {1, 2, 1.0}}));
    EXPECT_FALSE(s.connected);
    EXPECT_FALSE(s.weight_balanced);
    EXPECT_EQ(s.component_count, 3);
}

TEST(Classify, IsolatedNodeDisconnects) {
    const auto s = classify(build_graph(3, false, {{0, 1, 1.0}}));
    EXPECT_FALSE(s.connected);
    EXPECT_EQ(s.component_count, 2);
    EXPECT_TRUE(s.weight_balanced);
}

TEST(ClassifyProperty, ConnectivityMatchesTransitiveClosure) {
    Rng rng(21);
    for (int k = 0; k < 300; ++k) {
        const Index n = 1 + rng.index(10);
        const bool directed = k % 2 == 1;
        std::vector<Edge> edges;
        for (Index i = 0; i < n; ++i)
            for (Index j = directed ? 0 : i + 1; j < n; ++j)
                if (i != j && rng.chance(directed ? 0.2 : 0.25)) edges.push_back({i, j, rng.complex()});
        const auto g = build_graph(n, directed, edges);
        const auto s = classify(g);
        EXPECT_EQ(s.connected, testkit::strongly_connected_oracle(g));
        EXPECT_EQ(s.component_count, testkit::component_count_oracle(g));
        const auto labels = strong_components(g);
        const auto reach = testkit::transitive_closure(g);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) {
                const bool mutual = reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] &&
                                    reach[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
                EXPECT_EQ(labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)], mutual);
            }
    }
}

TEST(ClassifyProperty, GeneratedFamiliesHaveTheirClass) {
    Rng rng(22);
    for (int k = 0; k < 100; ++k) {
        const Index n = 2 + rng.index(9);
        EXPECT_EQ(classify(testkit::random_unsigned_undirected(rng, n)).graph_class, GraphClass::UnsignedUndirected);
        EXPECT_EQ(classify(testkit::random_signed_undirected(rng, n)).graph_class, GraphClass::SignedUndirected);
        const auto s = classify(testkit::random_balanced_digraph(rng, n));
        EXPECT_EQ(s.graph_class, GraphClass::UnsignedDigraph);
        EXPECT_TRUE(s.connected);
        EXPECT_TRUE(s.weight_balanced);
    }
}

TEST(Classify, LongPathDoesNotOverflowTheStack) {
    const Index n = 20000;
    std::vector<Edge> edges;
    for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    edges.push_back({n - 1, 0, 1.0});
    const auto s = classify(build_graph(n, true, edges));
    EXPECT_TRUE(s.connected);
    EXPECT_TRUE(s.weight_balanced);
}
