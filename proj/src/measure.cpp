#include "a2mt/measure.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace a2mt {

std::vector<Vertex> TwoLevelSampler::sample_row(std::size_t n, Rng& rng) const {
    const Row& row = rows_[rng.pick(weights_)];
    std::vector<Vertex> out(n);
    for (auto& u : out) u = row.support[rng.pick(row.cumulative)];
    return out;
}

SampleMatrix TwoLevelSampler::sample(const std::vector<std::size_t>& n, Rng& rng) const {
    SampleMatrix u;
    u.reserve(n.size());
    for (std::size_t k : n) u.push_back(sample_row(k, rng));
    return u;
}

Measure<double> to_float(const Measure<Rational>& mu) {
    Measure<double> out;
    for (const auto& [v, m] : mu.mass) out.mass[v] = to_double(m);
    return out;
}

TwoLevelMeasure<double> to_float(const TwoLevelMeasure<Rational>& nu) {
    TwoLevelMeasure<double> out;
    for (const auto& c : nu.components) out.components.push_back({to_double(c.weight), to_float(c.measure)});
    return out;
}

A2mTree reduce_a2m(const A2mTree& chi) {
    const Measure<Rational> m = intensity(chi.nu);
    std::map<Vertex, std::set<Vertex>> adj;
    for (Vertex v : chi.tree.vertices()) adj[v];
    for (const auto& [a, b] : chi.tree.edges()) {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    auto erase_vertex = [&](Vertex v) {
        for (Vertex w : adj[v]) adj[w].erase(v);
        adj.erase(v);
    };

    // Prune null leaves until every leaf is charged.
    std::vector<Vertex> stack;
    for (const auto& [v, nb] : adj)
        if (nb.size() <= 1 && m(v) == 0) stack.push_back(v);
    while (!stack.empty() && adj.size() > 1) {
        const Vertex v = stack.back();
        stack.pop_back();
        if (!adj.count(v) || adj[v].size() > 1 || m(v) != 0) continue;
        const std::set<Vertex> nb = adj[v];
        erase_vertex(v);
        for (Vertex w : nb)
            if (adj[w].size() <= 1 && m(w) == 0) stack.push_back(w);
    }

    // Suppress null vertices of degree 2.
    std::vector<Vertex> twos;
    for (const auto& [v, nb] : adj)
        if (nb.size() == 2 && m(v) == 0) twos.push_back(v);
    for (Vertex v : twos) {
        const Vertex a = *adj[v].begin(), b = *adj[v].rbegin();
        erase_vertex(v);
        adj[a].insert(b);
        adj[b].insert(a);
    }

    std::vector<Vertex> vs;
    std::vector<Edge> edges;
    for (const auto& [v, nb] : adj) {
        vs.push_back(v);
        for (Vertex w : nb)
            if (v < w) edges.emplace_back(v, w);
    }
    return A2mTree{AlgebraicTree(vs, edges), chi.nu};
}

namespace {

std::vector<WeightedMeasure<Rational>> merged_components(const TwoLevelMeasure<Rational>& nu) {
    std::vector<WeightedMeasure<Rational>> out;
    for (const auto& c : nu.components) {
        if (c.weight == 0) continue;
        const Measure<Rational> mu = normalized(c.measure);
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& o) { return o.measure == mu; });
        if (it == out.end()) {
            out.push_back({c.weight, mu});
        } else {
            it->weight += c.weight;
        }
    }
    return out;
}

std::string labelled_form(const AlgebraicTree& t, const std::vector<WeightedMeasure<Rational>>& comps,
                          const std::vector<std::size_t>& perm) {
    return canonical_form(t, [&](Vertex v) {
        std::string s;
        for (std::size_t i : perm) {
            s += format_rational(comps[i].measure(v));
            s += ';';
        }
        return s;
    });
}

}  // namespace

bool a2m_isomorphic(const A2mTree& a, const A2mTree& b) {
    const A2mTree ra = reduce_a2m(a), rb = reduce_a2m(b);
    if (ra.tree.size() != rb.tree.size()) return false;
    const auto ca = merged_components(ra.nu), cb = merged_components(rb.nu);
    if (ca.size() != cb.size()) return false;

    std::vector<std::size_t> identity(cb.size());
    std::iota(identity.begin(), identity.end(), 0);
    const std::string target = labelled_form(rb.tree, cb, identity);

    std::vector<std::size_t> perm = identity;
    if (perm.size() > 8) {
        // Factorial search is out of reach; compare in the given order.
        return labelled_form(ra.tree, ca, perm) == target;
    }
    do {
        bool weights_match = true;
        for (std::size_t i = 0; i < perm.size() && weights_match; ++i) {
            weights_match = ca[perm[i]].weight == cb[i].weight;
        }
        if (weights_match && labelled_form(ra.tree, ca, perm) == target) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace a2mt
