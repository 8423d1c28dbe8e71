#pragma once

#include "a2mt/common.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace a2mt {

using Edge = std::pair<Vertex, Vertex>;

/// A finite algebraic tree stored as a connected acyclic graph.
///
/// The branch point map is derived from the adjacency on demand. Instances
/// are immutable after construction; every query is const and thread-safe.
/// Internally the vertices are indexed in ascending id order and the graph is
/// rooted at the smallest id so that path queries are parent walks.
class AlgebraicTree {
public:
    /// Throws InvalidArgument unless the edges form a spanning tree on the
    /// (duplicate-free, nonempty) vertex list.
    AlgebraicTree(std::vector<Vertex> vertices, const std::vector<Edge>& edges);

    /// Convenience: vertices 0..n-1.
    static AlgebraicTree from_edges(std::size_t n, const std::vector<Edge>& edges);

    std::size_t size() const { return vertices_.size(); }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    /// Edges as (smaller id, larger id), sorted.
    std::vector<Edge> edges() const;

    bool contains(Vertex v) const { return index_.count(v) != 0; }
    /// Position of `v` in vertices(); throws UnknownVertex.
    std::size_t index_of(Vertex v) const;
    Vertex vertex_at(std::size_t i) const { return vertices_[i]; }

    const std::vector<std::size_t>& adjacent(std::size_t i) const { return adj_[i]; }
    std::vector<Vertex> neighbours(Vertex v) const;
    std::size_t degree(Vertex v) const { return adj_[index_of(v)].size(); }
    bool is_binary() const;

    /// c(x, y, z): the unique vertex on all three pairwise paths.
    Vertex branch_point(Vertex x, Vertex y, Vertex z) const;
    std::size_t branch_point_index(std::size_t i, std::size_t j, std::size_t k) const;

    /// Vertex indices on the path from i to j, both inclusive, in order.
    std::vector<std::size_t> path_indices(std::size_t i, std::size_t j) const;

    // Rooted view at index 0, used by bulk algorithms.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t parent_index(std::size_t i) const { return parent_[i]; }
    std::size_t depth_index(std::size_t i) const { return depth_[i]; }
    /// Indices in breadth-first order from index 0 (parents before children).
    const std::vector<std::size_t>& bfs_order() const { return order_; }

private:
    std::size_t lca(std::size_t i, std::size_t j) const;

    std::vector<Vertex> vertices_;
    std::unordered_map<Vertex, std::size_t> index_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> depth_;
    std::vector<std::size_t> order_;
};

/// Free-function spelling of AlgebraicTree::branch_point.
inline Vertex branch_point(const AlgebraicTree& t, Vertex x, Vertex y, Vertex z) {
    return t.branch_point(x, y, z);
}

/// [x, y] = {z : c(x, y, z) = z}, sorted by id.
std::vector<Vertex> interval(const AlgebraicTree& t, Vertex x, Vertex y);

/// S_x(y): the component of T \ {x} containing y, sorted by id.
/// component(x, x) = {x}.
std::vector<Vertex> component(const AlgebraicTree& t, Vertex x, Vertex y);

/// All components of T \ {x}; their count is deg(x).
std::vector<std::vector<Vertex>> components_at(const AlgebraicTree& t, Vertex x);

struct TreeStats {
    std::map<Vertex, std::size_t> degrees;
    std::vector<Vertex> leaves;         // degree 1
    std::vector<Vertex> branch_points;  // degree >= 3
    std::size_t edges = 0;
};

TreeStats tree_stats(const AlgebraicTree& t);

// ---------------------------------------------------------------------------
// Branch point tables and axiom validation
// ---------------------------------------------------------------------------

/// An explicit (externally supplied or derived) branch point map, keyed by
/// the sorted triple so that symmetry holds by construction.
class BranchPointTable {
public:
    BranchPointTable() = default;
    explicit BranchPointTable(std::vector<Vertex> vertices);

    const std::vector<Vertex>& vertices() const { return vertices_; }
    void set(Vertex x, Vertex y, Vertex z, Vertex value);
    std::optional<Vertex> find(Vertex x, Vertex y, Vertex z) const;
    /// Throws InvalidArgument when the triple is missing.
    Vertex at(Vertex x, Vertex y, Vertex z) const;
    std::size_t entries() const { return table_.size(); }
    /// Stored values keyed by sorted triples.
    const std::map<std::array<Vertex, 3>, Vertex>& rows() const { return table_; }

    bool operator==(const BranchPointTable& other) const {
        return vertices_ == other.vertices_ && table_ == other.table_;
    }

private:
    static std::array<Vertex, 3> key(Vertex x, Vertex y, Vertex z);
    std::vector<Vertex> vertices_;
    std::map<std::array<Vertex, 3>, Vertex> table_;
};

BranchPointTable branch_point_table(const AlgebraicTree& t);

struct Violation {
    std::string rule;            // e.g. "2pc", "4pc", "M3", "non-crossing"
    std::vector<Vertex> args;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::size_t checks = 0;
    bool ok() const { return violations.empty(); }
    /// Number of violations of one rule.
    std::size_t count(const std::string& rule) const;
};

/// Checks (2pc), (3pc) and (4pc) on every triple and quadruple.
/// Throws InvalidArgument when the table is not total on the vertex set.
ValidationReport validate_branch_point_map(const std::vector<Vertex>& vertices,
                                           const BranchPointTable& table);

/// Rebuilds the adjacency of a finite tree from a valid branch point map:
/// {x, y} is an edge iff [x, y] = {x, y}.
AlgebraicTree tree_from_branch_point_map(const BranchPointTable& table);

// ---------------------------------------------------------------------------
// Rooted trees
// ---------------------------------------------------------------------------

/// Explicit minimum map c_wedge, keyed by the sorted pair.
class MinimumTable {
public:
    MinimumTable() = default;
    explicit MinimumTable(std::vector<Vertex> vertices);
    const std::vector<Vertex>& vertices() const { return vertices_; }
    void set(Vertex x, Vertex y, Vertex value);
    Vertex at(Vertex x, Vertex y) const;
    bool has(Vertex x, Vertex y) const;

private:
    std::vector<Vertex> vertices_;
    std::map<std::pair<Vertex, Vertex>, Vertex> table_;
};

/// Checks (M1)-(M3) and the existence of a root.
ValidationReport validate_minimum_map(const MinimumTable& table);

class RootedTree {
public:
    /// Throws InvalidArgument (rule listed) when (M1)-(M3) or rootedness fail.
    explicit RootedTree(MinimumTable table);

    Vertex root() const { return root_; }
    const std::vector<Vertex>& vertices() const { return table_.vertices(); }
    Vertex minimum(Vertex x, Vertex y) const { return table_.at(x, y); }
    /// x <= y iff c_wedge(x, y) = x.
    bool precedes(Vertex x, Vertex y) const { return minimum(x, y) == x; }
    const MinimumTable& table() const { return table_; }

private:
    MinimumTable table_;
    Vertex root_ = 0;
};

/// c_wedge(x, y) = c(x, y, rho).
RootedTree root_tree(const AlgebraicTree& t, Vertex rho);

/// c(x, y, z) = max{c_wedge(x,y), c_wedge(x,z), c_wedge(y,z)}, then the
/// adjacency is recovered from the branch point map.
BranchPointTable unrooted_branch_point_map(const RootedTree& rooted);
AlgebraicTree unroot(const RootedTree& rooted);

// ---------------------------------------------------------------------------
// Metric side
// ---------------------------------------------------------------------------

/// Dense symmetric matrix indexed 0..n-1.
template <class T>
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<T> data;

    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t size) : n(size), data(size * size, T(0)) {}

    T& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// Graph distance with unit edge lengths, indexed like t.vertices().
template <class T>
DistanceMatrix<T> tree_distance_matrix(const AlgebraicTree& t) {
    DistanceMatrix<T> d(t.size());
    for (std::size_t s = 0; s < t.size(); ++s) {
        std::vector<std::size_t> dist(t.size(), AlgebraicTree::npos);
        std::vector<std::size_t> queue{s};
        dist[s] = 0;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            for (std::size_t w : t.adjacent(queue[q])) {
                if (dist[w] == AlgebraicTree::npos) {
                    dist[w] = dist[queue[q]] + 1;
                    queue.push_back(w);
                }
            }
        }
        for (std::size_t j = 0; j < t.size(); ++j) {
            d(s, j) = T(static_cast<long long>(dist[j]));
        }
    }
    return d;
}

/// Gromov product (x_j | x_k)_{x_i} = (d(i,j) + d(i,k) - d(j,k)) / 2.
template <class T>
T gromov_product(const DistanceMatrix<T>& d, std::size_t i, std::size_t j, std::size_t k) {
    return (d(i, j) + d(i, k) - d(j, k)) / 2;
}

/// The unique index w with d(a,w) + d(w,b) = d(a,b) for all three pairs of
/// {i, j, k}. Throws NoBranchPoint when the point set lacks that median.
template <class T>
std::size_t branch_point_from_metric(const DistanceMatrix<T>& d, std::size_t i, std::size_t j,
                                     std::size_t k) {
    if (i >= d.n || j >= d.n || k >= d.n) {
        throw InvalidArgument("metric index out of range");
    }
    auto between = [&](std::size_t a, std::size_t w, std::size_t b) {
        return nearly_equal(T(d(a, w) + d(w, b)), d(a, b));
    };
    for (std::size_t w = 0; w < d.n; ++w) {
        if (between(i, w, j) && between(i, w, k) && between(j, w, k)) {
            return w;
        }
    }
    throw NoBranchPoint("no point of the metric space is a median of (" + std::to_string(i) +
                        ", " + std::to_string(j) + ", " + std::to_string(k) + ")");
}

/// Number of quadruples violating d12 + d34 <= max(d13 + d24, d14 + d23).
template <class T>
std::size_t four_point_violations(const DistanceMatrix<T>& d) {
    std::size_t bad = 0;
    for (std::size_t a = 0; a < d.n; ++a)
        for (std::size_t b = 0; b < d.n; ++b)
            for (std::size_t c = 0; c < d.n; ++c)
                for (std::size_t e = 0; e < d.n; ++e) {
                    const T lhs = d(a, b) + d(c, e);
                    const T r1 = d(a, c) + d(b, e);
                    const T r2 = d(a, e) + d(b, c);
                    const T rhs = r1 < r2 ? r2 : r1;
                    if (lhs > rhs && !nearly_equal(lhs, rhs)) {
                        ++bad;
                    }
                }
    return bad;
}

template <class T>
std::size_t triangle_violations(const DistanceMatrix<T>& d) {
    std::size_t bad = 0;
    for (std::size_t a = 0; a < d.n; ++a)
        for (std::size_t b = 0; b < d.n; ++b)
            for (std::size_t c = 0; c < d.n; ++c) {
                const T lhs = d(a, c);
                const T rhs = d(a, b) + d(b, c);
                if (lhs > rhs && !nearly_equal(lhs, rhs)) {
                    ++bad;
                }
            }
    return bad;
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

/// Canonical string of an unrooted tree whose vertices carry string labels.
/// Two labelled trees get the same string iff there is a label-preserving
/// isomorphism. Computed as the minimum over all roots of the rooted
/// AHU encoding "(label child child ...)" with children sorted.
/// Labels must not contain parentheses.
std::string canonical_form(const AlgebraicTree& t, const std::function<std::string(Vertex)>& label);

}  // namespace a2mt
