#include "a2mt/cladogram.hpp"

#include <algorithm>

namespace a2mt {

std::string to_string(const Label& l) {
    if (l.is_root()) return "r";
    return std::to_string(l.host) + "." + std::to_string(l.index);
}

std::size_t Cladogram::label_count() const {
    std::size_t n = 0;
    for (const auto& [v, ls] : labels) n += ls.size();
    return n;
}

bool Cladogram::injective() const {
    return std::all_of(labels.begin(), labels.end(), [](const auto& kv) { return kv.second.size() == 1; });
}

std::vector<Label> Cladogram::labels_at(Vertex v) const {
    const auto it = labels.find(v);
    return it == labels.end() ? std::vector<Label>{} : it->second;
}

ValidationReport validate_cladogram(const Cladogram& c) {
    ValidationReport r;
    const bool single = c.tree.size() == 1;
    for (Vertex v : c.tree.vertices()) {
        const std::size_t deg = c.tree.degree(v);
        const bool leaf = single || deg == 1;
        ++r.checks;
        if (deg == 2) r.violations.push_back({"degree-2", {v}, ""});
        if (deg > 3) r.violations.push_back({"non-binary", {v}, ""});
        const auto ls = c.labels_at(v);
        if (leaf && ls.empty()) r.violations.push_back({"unlabelled-leaf", {v}, ""});
        if (!leaf && !ls.empty()) r.violations.push_back({"labelled-interior", {v}, ""});
    }
    for (const auto& [v, ls] : c.labels) {
        if (!c.tree.contains(v)) r.violations.push_back({"unknown-vertex", {v}, ""});
    }
    return r;
}

Cladogram shape(const AlgebraicTree& t, const SampleMatrix& samples, std::optional<Vertex> root) {
    if (!t.is_binary()) throw InvalidArgument("shape() needs a binary tree");

    // Points of the tree with their labels.
    std::map<std::size_t, std::vector<Label>> points;
    auto add_point = [&](Vertex v, Label l) {
        const std::size_t i = t.index_of(v);
        if (t.adjacent(i).size() >= 3) throw SampleOnBranchPoint(v);
        points[i].push_back(l);
    };
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = 0; j < samples[i].size(); ++j)
            add_point(samples[i][j], Label{static_cast<int>(i + 1), static_cast<int>(j + 1)});
    if (root) add_point(*root, root_label);
    if (points.empty()) throw InvalidArgument("shape() needs at least one sample");
    for (auto& [i, ls] : points) std::sort(ls.begin(), ls.end());

    if (points.size() == 1) {
        Cladogram c{AlgebraicTree({0}, {}), {}};
        c.labels[0] = points.begin()->second;
        return c;
    }

    // Spanned subtree: walk from every point towards the first one.
    const std::size_t n = t.size();
    const std::size_t anchor = points.begin()->first;
    std::vector<std::size_t> parent(n, AlgebraicTree::npos);
    {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> queue{anchor};
        seen[anchor] = true;
        for (std::size_t q = 0; q < queue.size(); ++q)
            for (std::size_t w : t.adjacent(queue[q]))
                if (!seen[w]) {
                    seen[w] = true;
                    parent[w] = queue[q];
                    queue.push_back(w);
                }
    }
    std::vector<bool> spanned(n, false);
    spanned[anchor] = true;
    for (const auto& [p, ls] : points)
        for (std::size_t v = p; !spanned[v]; v = parent[v]) spanned[v] = true;

    auto span_degree = [&](std::size_t v) {
        std::size_t d = 0;
        for (std::size_t w : t.adjacent(v)) d += spanned[w];
        return d;
    };

    // Nodes of the cladogram that carry connectivity, in tree-index order.
    std::vector<std::size_t> node_of(n, AlgebraicTree::npos);
    Vertex next_id = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (!spanned[v]) continue;
        if (points.count(v) || span_degree(v) >= 3) node_of[v] = next_id++;
    }

    std::vector<Edge> edges;
    std::map<Vertex, std::vector<Label>> labels;
    std::vector<Vertex> ids;
    for (Vertex id = 0; id < next_id; ++id) ids.push_back(id);

    for (std::size_t v = 0; v < n; ++v) {
        if (node_of[v] == AlgebraicTree::npos) continue;
        for (std::size_t w : t.adjacent(v)) {
            if (!spanned[w]) continue;
            std::size_t prev = v, cur = w;
            while (node_of[cur] == AlgebraicTree::npos) {
                // Suppressed vertex: spanned degree 2, continue through it.
                std::size_t nxt = AlgebraicTree::npos;
                for (std::size_t u : t.adjacent(cur))
                    if (spanned[u] && u != prev) nxt = u;
                prev = cur;
                cur = nxt;
            }
            if (node_of[v] < node_of[cur]) {
                edges.emplace_back(static_cast<Vertex>(node_of[v]), static_cast<Vertex>(node_of[cur]));
            }
        }
    }
    for (const auto& [p, ls] : points) {
        if (span_degree(p) <= 1) {
            labels[static_cast<Vertex>(node_of[p])] = ls;
        } else {
            // Interior sample: the node becomes a branch point with a pendant leaf.
            const Vertex leaf = next_id++;
            ids.push_back(leaf);
            edges.emplace_back(static_cast<Vertex>(node_of[p]), leaf);
            labels[leaf] = ls;
        }
    }
    return Cladogram{AlgebraicTree(ids, edges), std::move(labels)};
}

std::string canonical_code(const Cladogram& c) {
    return canonical_form(c.tree, [&](Vertex v) {
        std::string s;
        for (const Label& l : c.labels_at(v)) {
            if (!s.empty()) s += ',';
            s += to_string(l);
        }
        return s;
    });
}

bool code_has_multilabel(const std::string& code) {
    // Labels are the only place a comma can appear.
    return code.find(',') != std::string::npos;
}

}  // namespace a2mt
