#pragma once

// Random inputs and independent reference computations shared by the unit
// and acceptance tests. Nothing here calls into the library's numerics.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "lapflow/netmodel.hpp"

namespace lapflow::testkit {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    Index index(Index n) { return static_cast<Index>(engine_() % static_cast<std::uint64_t>(n)); }
    bool chance(double p) { return uniform() < p; }
    Complex complex(double lo = -1.0, double hi = 1.0) { return {uniform(lo, hi), uniform(lo, hi)}; }

    std::vector<Index> permutation(Index n) {
        std::vector<Index> p(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
        for (Index i = n - 1; i > 0; --i) std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(index(i + 1))]);
        return p;
    }

private:
    std::mt19937_64 engine_;
};

inline ComplexMatrix random_matrix(Rng& rng, Index rows, Index cols) {
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.complex();
    return m;
}

/// rows x cols of rank `rank` (almost surely), as a product of thin factors.
inline ComplexMatrix low_rank_matrix(Rng& rng, Index rows, Index cols, Index rank) {
    return random_matrix(rng, rows, rank) * random_matrix(rng, rank, cols);
}

namespace detail {

inline void add_undirected(std::vector<std::vector<Complex>>& w, Index i, Index j, Complex v) {
    w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += v;
    w[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] += v;
}

inline ComplexGraph from_dense(const std::vector<std::vector<Complex>>& w, bool directed) {
    const auto n = static_cast<Index>(w.size());
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            const Complex v = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (i != j && v != Complex(0.0) && (directed || i < j)) edges.push_back({i, j, v});
        }
    return build_graph(n, directed, std::move(edges));
}

/// Spanning tree over `nodes` plus extra random edges, weights from `draw`.
template <class Draw>
void tree_plus_edges(Rng& rng, std::vector<std::vector<Complex>>& w, const std::vector<Index>& nodes, double extra,
                     Draw&& draw) {
    const auto k = static_cast<Index>(nodes.size());
    for (Index i = 1; i < k; ++i)
        add_undirected(w, nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(rng.index(i))], draw());
    for (Index i = 0; i < k; ++i)
        for (Index j = i + 1; j < k; ++j) {
            const Index a = nodes[static_cast<std::size_t>(i)], b = nodes[static_cast<std::size_t>(j)];
            if (w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] == Complex(0.0) && rng.chance(extra))
                add_undirected(w, a, b, draw());
        }
}

/// Node sets of the components: one set, or two when `split`.
inline std::vector<std::vector<Index>> partition(Rng& rng, Index n, bool split) {
    auto perm = rng.permutation(n);
    if (!split || n < 4) return {perm};
    const Index cut = 2 + rng.index(n - 3);
    return {std::vector<Index>(perm.begin(), perm.begin() + cut), std::vector<Index>(perm.begin() + cut, perm.end())};
}

}  // namespace detail

/// Share of generated graphs that are deliberately disconnected.
inline constexpr double kDisconnectedShare = 0.1;

/// Unsigned undirected: Re in [0.1, 2], Im in [0, 2].
inline ComplexGraph random_unsigned_undirected(Rng& rng, Index n) {
    std::vector<std::vector<Complex>> w(static_cast<std::size_t>(n), std::vector<Complex>(static_cast<std::size_t>(n)));
    for (const auto& part : detail::partition(rng, n, rng.chance(kDisconnectedShare)))
        detail::tree_plus_edges(rng, w, part, 0.3, [&] { return Complex(rng.uniform(0.1, 2.0), rng.uniform(0.0, 2.0)); });
    return detail::from_dense(w, false);
}

/// Signed undirected (complex-symmetric L). Edges are either power-line
/// admittances 1/(r + jx) (Re > 0, Im < 0) or arbitrary weights whose real
/// part may be negative; at least one weight is signed.
inline ComplexGraph random_signed_undirected(Rng& rng, Index n) {
    std::vector<std::vector<Complex>> w(static_cast<std::size_t>(n), std::vector<Complex>(static_cast<std::size_t>(n)));
    const double negative_share = rng.uniform(0.0, 0.4);
    const auto draw = [&] {
        if (rng.chance(negative_share)) return Complex(rng.uniform(-1.0, 0.5), rng.uniform(-1.0, 1.0));
        return 1.0 / Complex(rng.uniform(0.01, 0.5), rng.uniform(0.05, 1.0));
    };
    for (const auto& part : detail::partition(rng, n, rng.chance(kDisconnectedShare)))
        detail::tree_plus_edges(rng, w, part, 0.3, draw);
    bool is_signed = false;
    for (const auto& row : w)
        for (const Complex v : row) is_signed = is_signed || (v != Complex(0.0) && !is_unsigned_weight(v));
    if (!is_signed) {
        for (Index i = 0; i < n && !is_signed; ++i)
            for (Index j = i + 1; j < n && !is_signed; ++j)
                if (w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != Complex(0.0)) {
                    w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Complex(0.8, -1.5);
                    w[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = Complex(0.8, -1.5);
                    is_signed = true;
                }
    }
    return detail::from_dense(w, false);
}

/// Largest Im/Re of a digraph edge weight in the balanced family.
inline constexpr double kDigraphPhaseRatio = 0.25;

/// Unsigned weight-balanced digraph: a superposition of directed cycles with
/// one weight per cycle, always including a Hamiltonian cycle (so the graph
/// is strongly connected). Weights have Re in [0.2, 2], 0 <= Im <= phase_ratio Re.
inline ComplexGraph random_balanced_digraph(Rng& rng, Index n, double phase_ratio = kDigraphPhaseRatio) {
    std::vector<std::vector<Complex>> w(static_cast<std::size_t>(n), std::vector<Complex>(static_cast<std::size_t>(n)));
    const auto weight = [&] {
        const double re = rng.uniform(0.2, 2.0);
        return Complex(re, rng.uniform(0.0, phase_ratio) * re);
    };
    const auto add_cycle = [&](const std::vector<Index>& nodes) {
        const Complex c = weight();
        for (std::size_t k = 0; k < nodes.size(); ++k)
            w[static_cast<std::size_t>(nodes[k])][static_cast<std::size_t>(nodes[(k + 1) % nodes.size()])] += c;
    };
    add_cycle(rng.permutation(n));
    const Index extra = rng.index(n + 1);
    for (Index c = 0; c < extra; ++c) {
        auto perm = rng.permutation(n);
        perm.resize(static_cast<std::size_t>(2 + rng.index(n - 1)));
        add_cycle(perm);
    }
    return detail::from_dense(w, true);
}

/// e^M by Taylor series on M / 2^s with |M / 2^s|_1 <= 1/2, then s squarings.
inline ComplexMatrix taylor_expm(const ComplexMatrix& m) {
    double norm1 = 0.0;
    for (Index j = 0; j < m.cols(); ++j) norm1 = std::max(norm1, m.col(j).cwiseAbs().sum());
    int s = 0;
    while (norm1 / std::ldexp(1.0, s) > 0.5) ++s;
    const ComplexMatrix a = m / std::ldexp(1.0, s);
    ComplexMatrix term = ComplexMatrix::Identity(m.rows(), m.cols());
    ComplexMatrix sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    for (int k = 0; k < s; ++k) sum = sum * sum;
    return sum;
}

/// Reachability matrix of the support graph by Warshall's algorithm.
inline std::vector<std::vector<bool>> transitive_closure(const ComplexGraph& g) {
    const auto n = static_cast<std::size_t>(g.size());
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
    for (const auto& e : g.edges()) r[static_cast<std::size_t>(e.from)][static_cast<std::size_t>(e.to)] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (r[i][k])
                for (std::size_t j = 0; j < n; ++j) r[i][j] = r[i][j] || r[k][j];
    return r;
}

/// Every node reaches every other node.
inline bool strongly_connected_oracle(const ComplexGraph& g) {
    for (const auto& row : transitive_closure(g))
        for (const bool b : row)
            if (!b) return false;
    return true;
}

/// Number of strong components: classes of mutual reachability.
inline Index component_count_oracle(const ComplexGraph& g) {
    const auto r = transitive_closure(g);
    const std::size_t n = r.size();
    std::vector<bool> seen(n, false);
    Index count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        ++count;
        for (std::size_t j = 0; j < n; ++j)
            if (r[i][j] && r[j][i]) seen[j] = true;
    }
    return count;
}

}  // namespace lapflow::testkit
