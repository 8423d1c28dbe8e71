#include "a2mt/tree.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace a2mt {

AlgebraicTree::AlgebraicTree(std::vector<Vertex> vertices, const std::vector<Edge>& edges)
    : vertices_(std::move(vertices)) {
    if (vertices_.empty()) {
        throw InvalidArgument("a tree needs at least one vertex");
    }
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
        throw InvalidArgument("duplicate vertex id");
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        index_.emplace(vertices_[i], i);
    }
    if (edges.size() + 1 != vertices_.size()) {
        throw InvalidArgument("a tree on " + std::to_string(vertices_.size()) + " vertices needs " +
                              std::to_string(vertices_.size() - 1) + " edges, got " +
                              std::to_string(edges.size()));
    }
    adj_.resize(vertices_.size());
    for (const auto& [a, b] : edges) {
        if (a == b) {
            throw InvalidArgument("self-loop at vertex " + std::to_string(a));
        }
        const std::size_t ia = index_of(a), ib = index_of(b);
        adj_[ia].push_back(ib);
        adj_[ib].push_back(ia);
    }
    for (auto& nb : adj_) {
        std::sort(nb.begin(), nb.end());
        if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
            throw InvalidArgument("duplicate edge");
        }
    }

    parent_.assign(size(), npos);
    depth_.assign(size(), 0);
    std::vector<bool> seen(size(), false);
    order_.reserve(size());
    order_.push_back(0);
    seen[0] = true;
    for (std::size_t q = 0; q < order_.size(); ++q) {
        const std::size_t v = order_[q];
        for (std::size_t w : adj_[v]) {
            if (!seen[w]) {
                seen[w] = true;
                parent_[w] = v;
                depth_[w] = depth_[v] + 1;
                order_.push_back(w);
            }
        }
    }
    if (order_.size() != size()) {
        // |E| = |V| - 1 and disconnected implies a cycle somewhere.
        throw InvalidArgument("edges do not form a connected acyclic graph");
    }
}

AlgebraicTree AlgebraicTree::from_edges(std::size_t n, const std::vector<Edge>& edges) {
    std::vector<Vertex> vs(n);
    std::iota(vs.begin(), vs.end(), Vertex{0});
    return AlgebraicTree(std::move(vs), edges);
}

std::vector<Edge> AlgebraicTree::edges() const {
    std::vector<Edge> out;
    out.reserve(size() ? size() - 1 : 0);
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j : adj_[i]) {
            if (i < j) {
                out.emplace_back(vertices_[i], vertices_[j]);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t AlgebraicTree::index_of(Vertex v) const {
    const auto it = index_.find(v);
    if (it == index_.end()) {
        throw UnknownVertex(v);
    }
    return it->second;
}

std::vector<Vertex> AlgebraicTree::neighbours(Vertex v) const {
    std::vector<Vertex> out;
    for (std::size_t j : adj_[index_of(v)]) {
        out.push_back(vertices_[j]);
    }
    return out;
}

bool AlgebraicTree::is_binary() const {
    return std::all_of(adj_.begin(), adj_.end(), [](const auto& nb) { return nb.size() <= 3; });
}

std::size_t AlgebraicTree::lca(std::size_t i, std::size_t j) const {
    while (depth_[i] > depth_[j]) i = parent_[i];
    while (depth_[j] > depth_[i]) j = parent_[j];
    while (i != j) {
        i = parent_[i];
        j = parent_[j];
    }
    return i;
}

std::size_t AlgebraicTree::branch_point_index(std::size_t i, std::size_t j, std::size_t k) const {
    // Two of the three pairwise LCAs coincide; the median is the deepest one.
    const std::size_t a = lca(i, j), b = lca(i, k), c = lca(j, k);
    std::size_t best = a;
    if (depth_[b] > depth_[best]) best = b;
    if (depth_[c] > depth_[best]) best = c;
    return best;
}

Vertex AlgebraicTree::branch_point(Vertex x, Vertex y, Vertex z) const {
    return vertices_[branch_point_index(index_of(x), index_of(y), index_of(z))];
}

std::vector<std::size_t> AlgebraicTree::path_indices(std::size_t i, std::size_t j) const {
    const std::size_t top = lca(i, j);
    std::vector<std::size_t> up, down;
    for (std::size_t v = i; v != top; v = parent_[v]) up.push_back(v);
    up.push_back(top);
    for (std::size_t v = j; v != top; v = parent_[v]) down.push_back(v);
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

std::vector<Vertex> interval(const AlgebraicTree& t, Vertex x, Vertex y) {
    std::vector<Vertex> out;
    for (std::size_t i : t.path_indices(t.index_of(x), t.index_of(y))) {
        out.push_back(t.vertex_at(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<Vertex> flood(const AlgebraicTree& t, std::size_t blocked, std::size_t start) {
    std::vector<bool> seen(t.size(), false);
    seen[blocked] = true;
    seen[start] = true;
    std::vector<std::size_t> queue{start};
    for (std::size_t q = 0; q < queue.size(); ++q) {
        for (std::size_t w : t.adjacent(queue[q])) {
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    std::vector<Vertex> out;
    for (std::size_t i : queue) out.push_back(t.vertex_at(i));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<Vertex> component(const AlgebraicTree& t, Vertex x, Vertex y) {
    const std::size_t ix = t.index_of(x), iy = t.index_of(y);
    if (ix == iy) {
        return {x};
    }
    return flood(t, ix, iy);
}

std::vector<std::vector<Vertex>> components_at(const AlgebraicTree& t, Vertex x) {
    const std::size_t ix = t.index_of(x);
    std::vector<std::vector<Vertex>> out;
    for (std::size_t w : t.adjacent(ix)) {
        out.push_back(flood(t, ix, w));
    }
    return out;
}

TreeStats tree_stats(const AlgebraicTree& t) {
    TreeStats s;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const std::size_t deg = t.adjacent(i).size();
        s.degrees[t.vertex_at(i)] = deg;
        if (deg == 1) s.leaves.push_back(t.vertex_at(i));
        if (deg >= 3) s.branch_points.push_back(t.vertex_at(i));
    }
    s.edges = t.size() - 1;
    return s;
}

// ---------------------------------------------------------------------------

BranchPointTable::BranchPointTable(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
}

std::array<Vertex, 3> BranchPointTable::key(Vertex x, Vertex y, Vertex z) {
    std::array<Vertex, 3> k{x, y, z};
    std::sort(k.begin(), k.end());
    return k;
}

void BranchPointTable::set(Vertex x, Vertex y, Vertex z, Vertex value) {
    table_[key(x, y, z)] = value;
}

std::optional<Vertex> BranchPointTable::find(Vertex x, Vertex y, Vertex z) const {
    const auto it = table_.find(key(x, y, z));
    if (it == table_.end()) return std::nullopt;
    return it->second;
}

Vertex BranchPointTable::at(Vertex x, Vertex y, Vertex z) const {
    if (auto v = find(x, y, z)) return *v;
    throw InvalidArgument("branch point table has no entry for (" + std::to_string(x) + ", " +
                          std::to_string(y) + ", " + std::to_string(z) + ")");
}

BranchPointTable branch_point_table(const AlgebraicTree& t) {
    BranchPointTable table(t.vertices());
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            for (std::size_t k = j; k < n; ++k)
                table.set(t.vertex_at(i), t.vertex_at(j), t.vertex_at(k),
                          t.vertex_at(t.branch_point_index(i, j, k)));
    return table;
}

std::size_t ValidationReport::count(const std::string& rule) const {
    return static_cast<std::size_t>(std::count_if(
        violations.begin(), violations.end(), [&](const Violation& v) { return v.rule == rule; }));
}

namespace {

/// Dense n^3 copy of a table in index space, for the O(n^4) axiom loops.
struct DenseTable {
    std::size_t n;
    std::vector<std::size_t> c;
    std::size_t operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return c[(i * n + j) * n + k];
    }
};

DenseTable densify(const std::vector<Vertex>& vs, const BranchPointTable& table) {
    const std::size_t n = vs.size();
    std::unordered_map<Vertex, std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) idx.emplace(vs[i], i);
    DenseTable d{n, std::vector<std::size_t>(n * n * n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const auto v = table.find(vs[i], vs[j], vs[k]);
                if (!v) {
                    throw InvalidArgument("branch point table is not total: missing (" +
                                          std::to_string(vs[i]) + ", " + std::to_string(vs[j]) +
                                          ", " + std::to_string(vs[k]) + ")");
                }
                const auto it = idx.find(*v);
                if (it == idx.end()) {
                    throw InvalidArgument("branch point table maps into unknown vertex " +
                                          std::to_string(*v));
                }
                d.c[(i * n + j) * n + k] = it->second;
            }
    return d;
}

}  // namespace

ValidationReport validate_branch_point_map(const std::vector<Vertex>& vertices,
                                           const BranchPointTable& table) {
    std::vector<Vertex> vs = vertices;
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    const DenseTable c = densify(vs, table);
    const std::size_t n = vs.size();
    ValidationReport report;

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            ++report.checks;
            if (c(a, b, b) != b) {
                report.violations.push_back({"2pc", {vs[a], vs[b]},
                                             "c(x1,x2,x2) = " + std::to_string(vs[c(a, b, b)])});
            }
        }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t e = 0; e < n; ++e) {
                ++report.checks;
                const std::size_t m = c(a, b, e);
                if (c(a, b, m) != m) {
                    report.violations.push_back({"3pc", {vs[a], vs[b], vs[e]}, ""});
                }
            }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t e = 0; e < n; ++e)
                for (std::size_t f = 0; f < n; ++f) {
                    ++report.checks;
                    const std::size_t m = c(a, b, e);
                    if (m != c(a, b, f) && m != c(a, e, f) && m != c(b, e, f)) {
                        report.violations.push_back({"4pc", {vs[a], vs[b], vs[e], vs[f]}, ""});
                    }
                }
    return report;
}

AlgebraicTree tree_from_branch_point_map(const BranchPointTable& table) {
    const auto& vs = table.vertices();
    const DenseTable c = densify(vs, table);
    const std::size_t n = vs.size();
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            bool adjacent = true;
            for (std::size_t z = 0; z < n && adjacent; ++z) {
                if (z != a && z != b && c(a, b, z) == z) adjacent = false;
            }
            if (adjacent) edges.emplace_back(vs[a], vs[b]);
        }
    return AlgebraicTree(vs, edges);
}

// ---------------------------------------------------------------------------

MinimumTable::MinimumTable(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
}

void MinimumTable::set(Vertex x, Vertex y, Vertex value) {
    table_[{std::min(x, y), std::max(x, y)}] = value;
}

bool MinimumTable::has(Vertex x, Vertex y) const {
    return table_.count({std::min(x, y), std::max(x, y)}) != 0;
}

Vertex MinimumTable::at(Vertex x, Vertex y) const {
    const auto it = table_.find({std::min(x, y), std::max(x, y)});
    if (it == table_.end()) {
        throw InvalidArgument("minimum map has no entry for (" + std::to_string(x) + ", " +
                              std::to_string(y) + ")");
    }
    return it->second;
}

ValidationReport validate_minimum_map(const MinimumTable& table) {
    const auto& vs = table.vertices();
    const std::size_t n = vs.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
            if (!table.has(vs[a], vs[b])) {
                throw InvalidArgument("minimum map is not total");
            }
    auto m = [&](Vertex x, Vertex y) { return table.at(x, y); };
    ValidationReport report;
    for (Vertex x : vs) {
        ++report.checks;
        if (m(x, x) != x) report.violations.push_back({"M1", {x}, ""});
    }
    for (Vertex x : vs)
        for (Vertex y : vs)
            for (Vertex z : vs) {
                ++report.checks;
                if (m(x, m(y, z)) != m(m(x, y), z)) {
                    report.violations.push_back({"M2", {x, y, z}, ""});
                }
                ++report.checks;
                const Vertex xy = m(x, y), xz = m(x, z), yz = m(y, z);
                const bool all_distinct = xy != xz && xy != yz && xz != yz;
                if (all_distinct || (xy == xz && xy != m(xy, yz))) {
                    report.violations.push_back({"M3", {x, y, z}, ""});
                }
            }
    bool rooted = false;
    for (Vertex r : vs) {
        bool ok = true;
        for (Vertex x : vs) ok = ok && m(r, x) == r;
        rooted = rooted || ok;
    }
    ++report.checks;
    if (!rooted) report.violations.push_back({"root", {}, "no vertex below all others"});
    return report;
}

RootedTree::RootedTree(MinimumTable table) : table_(std::move(table)) {
    const ValidationReport report = validate_minimum_map(table_);
    if (!report.ok()) {
        throw InvalidArgument("minimum map violates " + report.violations.front().rule);
    }
    for (Vertex r : table_.vertices()) {
        bool ok = true;
        for (Vertex x : table_.vertices()) ok = ok && table_.at(r, x) == r;
        if (ok) {
            root_ = r;
            break;
        }
    }
}

RootedTree root_tree(const AlgebraicTree& t, Vertex rho) {
    const std::size_t r = t.index_of(rho);
    MinimumTable table(t.vertices());
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i; j < t.size(); ++j)
            table.set(t.vertex_at(i), t.vertex_at(j), t.vertex_at(t.branch_point_index(i, j, r)));
    return RootedTree(std::move(table));
}

BranchPointTable unrooted_branch_point_map(const RootedTree& rooted) {
    const auto& vs = rooted.vertices();
    BranchPointTable table(vs);
    auto max2 = [&](Vertex a, Vertex b) { return rooted.precedes(a, b) ? b : a; };
    const std::size_t n = vs.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                const Vertex x = vs[i], y = vs[j], z = vs[k];
                // The three minima lie on one chain, so the pairwise max is total here.
                const Vertex c = max2(max2(rooted.minimum(x, y), rooted.minimum(x, z)),
                                      rooted.minimum(y, z));
                table.set(x, y, z, c);
            }
    return table;
}

AlgebraicTree unroot(const RootedTree& rooted) {
    return tree_from_branch_point_map(unrooted_branch_point_map(rooted));
}

// ---------------------------------------------------------------------------

std::string canonical_form(const AlgebraicTree& t,
                           const std::function<std::string(Vertex)>& label) {
    const std::size_t n = t.size();
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = label(t.vertex_at(i));

    std::string best;
    std::vector<std::size_t> parent(n), order;
    std::vector<std::string> code(n);
    order.reserve(n);
    for (std::size_t root = 0; root < n; ++root) {
        order.clear();
        order.push_back(root);
        parent[root] = AlgebraicTree::npos;
        for (std::size_t q = 0; q < order.size(); ++q) {
            for (std::size_t w : t.adjacent(order[q])) {
                if (w != parent[order[q]]) {
                    parent[w] = order[q];
                    order.push_back(w);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const std::size_t v = *it;
            std::vector<const std::string*> kids;
            for (std::size_t w : t.adjacent(v)) {
                if (w != parent[v]) kids.push_back(&code[w]);
            }
            std::sort(kids.begin(), kids.end(),
                      [](const std::string* a, const std::string* b) { return *a < *b; });
            std::string s = "(" + labels[v];
            for (const std::string* k : kids) s += *k;
            s += ")";
            code[v] = std::move(s);
        }
        if (root == 0 || code[root] < best) best = code[root];
    }
    return best;
}

}  // namespace a2mt
