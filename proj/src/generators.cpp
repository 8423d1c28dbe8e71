#include "a2mt/generators.hpp"

#include <set>

namespace a2mt {

namespace {

std::string shape_key(const AlgebraicTree& t) {
    return canonical_form(t, [](Vertex) { return std::string(); });
}

std::vector<AlgebraicTree> dedupe(std::vector<AlgebraicTree> trees) {
    std::set<std::string> seen;
    std::vector<AlgebraicTree> out;
    for (auto& t : trees)
        if (seen.insert(shape_key(t)).second) out.push_back(std::move(t));
    return out;
}

}  // namespace

std::vector<AlgebraicTree> free_trees(std::size_t n) {
    if (n == 0) throw InvalidArgument("free_trees needs n >= 1");
    std::vector<AlgebraicTree> level{AlgebraicTree::from_edges(1, {})};
    for (std::size_t k = 2; k <= n; ++k) {
        std::vector<AlgebraicTree> grown;
        for (const auto& t : level) {
            for (std::size_t v = 0; v < t.size(); ++v) {
                auto edges = t.edges();
                edges.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(k - 1));
                grown.push_back(AlgebraicTree::from_edges(k, edges));
            }
        }
        level = dedupe(std::move(grown));
    }
    return level;
}

std::vector<AlgebraicTree> binary_trees(std::size_t leaves) {
    if (leaves == 0) throw InvalidArgument("binary_trees needs at least one leaf");
    if (leaves == 1) return {AlgebraicTree::from_edges(1, {})};
    if (leaves == 2) return {AlgebraicTree::from_edges(2, {{0, 1}})};
    std::vector<AlgebraicTree> level{star_tree(3)};
    for (std::size_t k = 4; k <= leaves; ++k) {
        std::vector<AlgebraicTree> grown;
        for (const auto& t : level) {
            const auto n = static_cast<Vertex>(t.size());
            for (const auto& [a, b] : t.edges()) {
                // Subdivide (a, b) with n and hang the new leaf n + 1 there.
                std::vector<Edge> edges;
                for (const auto& e : t.edges())
                    if (e != Edge{a, b}) edges.push_back(e);
                edges.insert(edges.end(), {{a, n}, {n, b}, {n, n + 1}});
                grown.push_back(AlgebraicTree::from_edges(t.size() + 2, edges));
            }
        }
        level = dedupe(std::move(grown));
    }
    return level;
}

AlgebraicTree star_tree(std::size_t leaves) {
    std::vector<Edge> edges;
    for (std::size_t i = 1; i <= leaves; ++i) edges.emplace_back(0, static_cast<Vertex>(i));
    return AlgebraicTree::from_edges(leaves + 1, edges);
}

AlgebraicTree path_tree(std::size_t n) {
    if (n == 0) throw InvalidArgument("path_tree needs n >= 1");
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < n; ++i) edges.emplace_back(static_cast<Vertex>(i - 1), static_cast<Vertex>(i));
    return AlgebraicTree::from_edges(n, edges);
}

AlgebraicTree caterpillar_tree(std::size_t leaves) {
    if (leaves < 2) throw InvalidArgument("caterpillar needs at least two leaves");
    if (leaves == 2) return path_tree(2);
    // Spine 0..leaves-3, leaves hang off it; the two ends get two leaves each.
    const std::size_t spine = leaves - 2;
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < spine; ++i) edges.emplace_back(static_cast<Vertex>(i - 1), static_cast<Vertex>(i));
    Vertex next = static_cast<Vertex>(spine);
    edges.emplace_back(0, next++);
    for (std::size_t i = 0; i < spine; ++i) edges.emplace_back(static_cast<Vertex>(i), next++);
    edges.emplace_back(static_cast<Vertex>(spine - 1), next++);
    return AlgebraicTree::from_edges(static_cast<std::size_t>(next), edges);
}

AlgebraicTree random_tree(std::size_t n, Rng& rng) {
    if (n == 0) throw InvalidArgument("random_tree needs n >= 1");
    if (n == 1) return AlgebraicTree::from_edges(1, {});
    if (n == 2) return path_tree(2);
    std::vector<std::size_t> code(n - 2);
    for (auto& c : code) c = rng.below(n);
    std::vector<std::size_t> degree(n, 1);
    for (std::size_t c : code) ++degree[c];
    std::vector<Edge> edges;
    std::set<std::size_t> leaves;
    for (std::size_t v = 0; v < n; ++v)
        if (degree[v] == 1) leaves.insert(v);
    for (std::size_t c : code) {
        const std::size_t leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.emplace_back(static_cast<Vertex>(leaf), static_cast<Vertex>(c));
        if (--degree[c] == 1) leaves.insert(c);
    }
    edges.emplace_back(static_cast<Vertex>(*leaves.begin()), static_cast<Vertex>(*leaves.rbegin()));
    return AlgebraicTree::from_edges(n, edges);
}

AlgebraicTree random_binary_tree(std::size_t leaves, Rng& rng) {
    if (leaves == 0) throw InvalidArgument("random_binary_tree needs at least one leaf");
    if (leaves == 1) return AlgebraicTree::from_edges(1, {});
    if (leaves == 2) return path_tree(2);
    std::vector<Edge> edges{{0, 1}, {0, 2}, {0, 3}};
    Vertex n = 4;
    for (std::size_t k = 4; k <= leaves; ++k) {
        const std::size_t pick = rng.below(edges.size());
        const auto [a, b] = edges[pick];
        edges[pick] = {a, n};
        edges.emplace_back(n, b);
        edges.emplace_back(n, n + 1);
        n += 2;
    }
    return AlgebraicTree::from_edges(static_cast<std::size_t>(n), edges);
}

std::vector<Vertex> leaves_of(const AlgebraicTree& t) {
    std::vector<Vertex> out;
    for (Vertex v : t.vertices())
        if (t.size() == 1 || t.degree(v) == 1) out.push_back(v);
    return out;
}

Measure<Rational> uniform_measure(const std::vector<Vertex>& support) {
    if (support.empty()) throw InvalidArgument("uniform measure on an empty set");
    Measure<Rational> mu;
    for (Vertex v : support) mu.mass[v] = Rational(1, static_cast<long>(support.size()));
    return mu;
}

Measure<Rational> random_measure(const std::vector<Vertex>& support, int max_weight, Rng& rng) {
    if (support.empty() || max_weight < 1) throw InvalidArgument("random_measure needs support and max_weight >= 1");
    std::vector<long> w(support.size());
    long total = 0;
    while (total == 0) {
        total = 0;
        for (auto& x : w) {
            x = static_cast<long>(rng.below(static_cast<std::uint64_t>(max_weight) + 1));
            total += x;
        }
    }
    Measure<Rational> mu;
    for (std::size_t i = 0; i < support.size(); ++i)
        if (w[i] > 0) mu.mass[support[i]] = Rational(w[i], total);
    return mu;
}

}  // namespace a2mt
