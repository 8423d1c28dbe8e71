#pragma once

#include "a2mt/common.hpp"
#include "a2mt/tree.hpp"

#include <map>
#include <string>
#include <vector>

namespace a2mt {

/// Finite measure on tree vertices. Zero masses may be stored; they are
/// ignored by support().
template <class T>
struct Measure {
    std::map<Vertex, T> mass;

    T operator()(Vertex v) const {
        const auto it = mass.find(v);
        return it == mass.end() ? T(0) : it->second;
    }
    T total() const {
        T s(0);
        for (const auto& [v, m] : mass) s += m;
        return s;
    }
    std::vector<Vertex> support() const {
        std::vector<Vertex> out;
        for (const auto& [v, m] : mass)
            if (m > 0) out.push_back(v);
        return out;
    }
    bool operator==(const Measure& other) const { return mass == other.mass; }
};

template <class T>
Measure<T> dirac(Vertex v) {
    Measure<T> m;
    m.mass[v] = T(1);
    return m;
}

/// Drops zero entries so that equal measures compare equal.
template <class T>
Measure<T> normalized(const Measure<T>& m) {
    Measure<T> out;
    for (const auto& [v, x] : m.mass)
        if (x != 0) out.mass[v] = x;
    return out;
}

template <class T>
struct WeightedMeasure {
    T weight;
    Measure<T> measure;
};

/// Finitely supported probability measure on probability measures:
/// nu = sum_i weight_i * delta_{measure_i}.
template <class T>
struct TwoLevelMeasure {
    std::vector<WeightedMeasure<T>> components;
};

template <class T>
TwoLevelMeasure<T> one_level(const Measure<T>& mu) {
    return TwoLevelMeasure<T>{{{T(1), mu}}};
}

namespace detail {
template <class T>
bool is_unit(const T& total) {
    if constexpr (std::is_same_v<T, Rational>) {
        return total == 1;
    } else {
        return std::abs(total - 1.0) <= 1e-12;
    }
}
}  // namespace detail

/// Throws InvalidArgument for negative mass, vertices outside the tree, or
/// total mass different from 1 (exact for rationals, 1e-12 for doubles).
template <class T>
void validate_measure(const AlgebraicTree& t, const Measure<T>& mu) {
    for (const auto& [v, m] : mu.mass) {
        if (!t.contains(v)) throw UnknownVertex(v);
        if (m < 0) throw InvalidArgument("negative mass at vertex " + std::to_string(v));
    }
    if (!detail::is_unit(mu.total())) {
        throw InvalidArgument("measure total mass is not 1");
    }
}

template <class T>
void validate_two_level(const AlgebraicTree& t, const TwoLevelMeasure<T>& nu) {
    if (nu.components.empty()) throw InvalidArgument("empty two-level measure");
    T total(0);
    for (const auto& c : nu.components) {
        if (c.weight < 0) throw InvalidArgument("negative two-level weight");
        total += c.weight;
        validate_measure(t, c.measure);
    }
    if (!detail::is_unit(total)) throw InvalidArgument("two-level weights do not sum to 1");
}

/// M_nu = sum_i w_i mu_i.
template <class T>
Measure<T> intensity(const TwoLevelMeasure<T>& nu) {
    if (nu.components.empty()) throw InvalidArgument("empty two-level measure");
    Measure<T> out;
    for (const auto& c : nu.components)
        for (const auto& [v, m] : c.measure.mass) out.mass[v] += c.weight * m;
    return out;
}

/// True when every component measure charges leaves only and the tree has
/// degrees at most 3 (membership condition for binary a2m trees).
template <class T>
bool atoms_on_leaves(const AlgebraicTree& t, const TwoLevelMeasure<T>& nu) {
    if (!t.is_binary()) return false;
    for (const auto& c : nu.components)
        for (const auto& [v, m] : c.measure.mass)
            if (m > 0 && t.size() > 1 && t.degree(v) != 1) return false;
    return true;
}

/// Branch point distribution xi{v} = P(c(X1, X2, X3) = v), X_i iid mu.
///
/// c(X1,X2,X3) = v iff no component of T \ {v} holds two of the points. With
/// a = mu{v} and power sums S_k of the component masses:
///   xi{v} = a^3 + 3a^2 S1 + 3a (S1^2 - S2) + S1^3 - 3 S1 S2 + 2 S3.
template <class T>
Measure<T> branch_point_distribution(const AlgebraicTree& t, const Measure<T>& mu) {
    validate_measure(t, mu);
    const std::size_t n = t.size();
    std::vector<T> atom(n, T(0)), below(n, T(0));
    for (const auto& [v, m] : mu.mass) atom[t.index_of(v)] = m;
    const auto& order = t.bfs_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t v = *it;
        below[v] += atom[v];
        if (t.parent_index(v) != AlgebraicTree::npos) below[t.parent_index(v)] += below[v];
    }
    const T total = below[order.front()];
    Measure<T> xi;
    for (std::size_t v = 0; v < n; ++v) {
        T s1(0), s2(0), s3(0);
        for (std::size_t w : t.adjacent(v)) {
            const T m = (w == t.parent_index(v)) ? T(total - below[v]) : below[w];
            s1 += m;
            s2 += m * m;
            s3 += m * m * m;
        }
        const T& a = atom[v];
        T p = a * a * a + 3 * a * a * s1 + 3 * a * (s1 * s1 - s2) + s1 * s1 * s1 - 3 * s1 * s2 +
              2 * s3;
        if (p != 0) xi.mass[t.vertex_at(v)] = p;
    }
    return xi;
}

/// O(|supp mu|^3) oracle: sums mu(x)mu(y)mu(z) over ordered support triples.
template <class T>
Measure<T> branch_point_distribution_bruteforce(const AlgebraicTree& t, const Measure<T>& mu) {
    validate_measure(t, mu);
    const auto supp = mu.support();
    Measure<T> xi;
    for (Vertex x : supp)
        for (Vertex y : supp)
            for (Vertex z : supp) xi.mass[t.branch_point(x, y, z)] += mu(x) * mu(y) * mu(z);
    return normalized(xi);
}

/// xi([x, y]).
template <class T>
T interval_mass(const AlgebraicTree& t, const Measure<T>& xi, Vertex x, Vertex y) {
    T s(0);
    for (std::size_t i : t.path_indices(t.index_of(x), t.index_of(y))) s += xi(t.vertex_at(i));
    return s;
}

/// r_xi(x, y) = xi([x, y]) - xi{x}/2 - xi{y}/2.
template <class T>
T r_xi(const AlgebraicTree& t, const Measure<T>& xi, Vertex x, Vertex y) {
    if (x == y) return T(0);
    return interval_mass(t, xi, x, y) - xi(x) / 2 - xi(y) / 2;
}

/// The metric tree (T_xi, r_xi) with the projection pi_xi.
template <class T>
struct QuotientMetric {
    /// Class index of every vertex, indexed like tree.vertices().
    std::vector<std::size_t> class_of;
    /// Smallest vertex id of each class.
    std::vector<Vertex> representatives;
    DistanceMatrix<T> distances;
};

/// Classes are the r_xi-distance-zero sets: connected groups of xi-null
/// vertices. Charged vertices are always singletons.
template <class T>
QuotientMetric<T> quotient_metric(const AlgebraicTree& t, const Measure<T>& xi) {
    const std::size_t n = t.size();
    std::vector<T> w(n, T(0));
    for (const auto& [v, m] : xi.mass) w[t.index_of(v)] = m;

    QuotientMetric<T> q;
    q.class_of.assign(n, AlgebraicTree::npos);
    for (std::size_t s = 0; s < n; ++s) {
        if (q.class_of[s] != AlgebraicTree::npos) continue;
        const std::size_t cls = q.representatives.size();
        q.representatives.push_back(t.vertex_at(s));
        q.class_of[s] = cls;
        if (w[s] != 0) continue;
        std::vector<std::size_t> queue{s};
        for (std::size_t k = 0; k < queue.size(); ++k)
            for (std::size_t u : t.adjacent(queue[k]))
                if (w[u] == 0 && q.class_of[u] == AlgebraicTree::npos) {
                    q.class_of[u] = cls;
                    queue.push_back(u);
                }
    }

    const std::size_t k = q.representatives.size();
    q.distances = DistanceMatrix<T>(k);
    for (std::size_t a = 0; a < k; ++a) {
        const std::size_t src = t.index_of(q.representatives[a]);
        // Path mass from src, both endpoints included.
        std::vector<T> acc(n, T(0));
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> queue{src};
        seen[src] = true;
        acc[src] = w[src];
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (std::size_t u : t.adjacent(queue[h]))
                if (!seen[u]) {
                    seen[u] = true;
                    acc[u] = acc[queue[h]] + w[u];
                    queue.push_back(u);
                }
        for (std::size_t b = 0; b < k; ++b) {
            if (a == b) continue;
            const std::size_t dst = t.index_of(q.representatives[b]);
            q.distances(a, b) = acc[dst] - w[src] / 2 - w[dst] / 2;
        }
    }
    return q;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// u[i][j] for (i, j) in N_{m, n}, zero-based.
using SampleMatrix = std::vector<std::vector<Vertex>>;

/// Precomputed floating cumulative tables for two-level sampling.
class TwoLevelSampler {
public:
    template <class T>
    explicit TwoLevelSampler(const TwoLevelMeasure<T>& nu) {
        if (nu.components.empty()) throw InvalidArgument("empty two-level measure");
        std::vector<double> ws;
        for (const auto& c : nu.components) {
            ws.push_back(to_double(c.weight));
            Row row;
            std::vector<double> ms;
            for (const auto& [v, m] : c.measure.mass) {
                if (m > 0) {
                    row.support.push_back(v);
                    ms.push_back(to_double(m));
                }
            }
            row.cumulative = cumulative_weights(ms);
            rows_.push_back(std::move(row));
        }
        weights_ = cumulative_weights(ws);
    }

    /// Picks mu ~ nu, then n points iid mu.
    std::vector<Vertex> sample_row(std::size_t n, Rng& rng) const;
    SampleMatrix sample(const std::vector<std::size_t>& n, Rng& rng) const;

private:
    struct Row {
        std::vector<Vertex> support;
        std::vector<double> cumulative;
    };
    std::vector<double> weights_;
    std::vector<Row> rows_;
};

/// Two-level sample of m rows with n[i] points each; deterministic in seed.
template <class T>
SampleMatrix sample_two_level(const AlgebraicTree& t, const TwoLevelMeasure<T>& nu, std::size_t m,
                              const std::vector<std::size_t>& n, std::uint64_t seed) {
    if (m < 1 || n.size() != m) throw InvalidArgument("need m >= 1 and one count per row");
    for (std::size_t k : n)
        if (k < 1) throw InvalidArgument("row sizes must be >= 1");
    validate_two_level(t, nu);
    Rng rng(seed);
    return TwoLevelSampler(nu).sample(n, rng);
}

// ---------------------------------------------------------------------------
// a2m trees
// ---------------------------------------------------------------------------

/// Finite algebraic two-level measure tree with exact masses.
struct A2mTree {
    AlgebraicTree tree;
    TwoLevelMeasure<Rational> nu;
};

TwoLevelMeasure<double> to_float(const TwoLevelMeasure<Rational>& nu);
Measure<double> to_float(const Measure<Rational>& mu);

/// The subtree c(supp(M_nu)^3) with degree-2 vertices of zero intensity
/// suppressed and zero-intensity leaves pruned (repeatedly). Measures are
/// carried over unchanged (all their mass sits on retained vertices).
A2mTree reduce_a2m(const A2mTree& chi);

/// Canonical-form equality after reduce_a2m: a label-preserving tree
/// isomorphism where each vertex is labelled by its mass vector across the
/// mixture components, tried under every weight-preserving permutation of
/// (merged) components.
bool a2m_isomorphic(const A2mTree& a, const A2mTree& b);

}  // namespace a2mt
