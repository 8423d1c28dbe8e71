#include "a2mt/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

namespace a2mt {

Triangulation Triangulation::with_unit_arcs(int n, std::vector<std::pair<int, int>> diagonals) {
    if (n < 1) throw InvalidArgument("polygon needs at least one vertex");
    return Triangulation{n, std::move(diagonals), std::vector<Rational>(n, Rational(1, n))};
}

std::vector<Rational> ArcTwoLevelMeasure::intensity(int n) const {
    std::vector<Rational> out(n, Rational(0));
    for (const auto& c : components)
        for (int a = 0; a < n && a < static_cast<int>(c.arcs.size()); ++a) out[a] += c.weight * c.arcs[a];
    return out;
}

namespace {

bool is_side(int n, int a, int b) {
    if (a > b) std::swap(a, b);
    return b - a == 1 || (a == 0 && b == n - 1);
}

/// Arc index of a polygon side.
int side_arc(int n, int a, int b) {
    if (a > b) std::swap(a, b);
    return (a == 0 && b == n - 1 && n > 2) ? n - 1 : a;
}

bool crosses(std::pair<int, int> d, std::pair<int, int> e) {
    const auto [a, b] = d;
    const auto [c, f] = e;
    return (a < c && c < b && b < f) || (c < a && a < f && f < b);
}

/// Polygon vertices of a face given by its dual-tree id.
std::vector<int> face_vertices(int n, const std::vector<std::array<int, 3>>& tris, Vertex f) {
    if (f < n) return {static_cast<int>(f), static_cast<int>((f + 1) % n)};
    const auto& t = tris[static_cast<std::size_t>(f - n)];
    return {t[0], t[1], t[2]};
}

/// Which of the three regions cut off by triangle (a, b, c) holds the face
/// with vertices `f`: 0 for [a, b], 1 for [b, c], 2 for [c, a] (cyclic).
int region_of(const std::array<int, 3>& tri, const std::vector<int>& f) {
    const auto [a, b, c] = tri;
    auto in = [](int v, int lo, int hi) { return lo <= v && v <= hi; };
    const bool r0 = std::all_of(f.begin(), f.end(), [&](int v) { return in(v, a, b); });
    if (r0) return 0;
    const bool r1 = std::all_of(f.begin(), f.end(), [&](int v) { return in(v, b, c); });
    if (r1) return 1;
    return 2;
}

}  // namespace

std::vector<std::array<int, 3>> triangles(const Triangulation& t) {
    const int n = t.n;
    std::vector<std::array<int, 3>> out;
    if (n < 3) return out;
    std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
    for (int a = 0; a < n; ++a) {
        const int b = (a + 1) % n;
        edge[a][b] = edge[b][a] = true;
    }
    for (const auto& [a, b] : t.diagonals) {
        if (a < 0 || b < 0 || a >= n || b >= n) continue;
        edge[a][b] = edge[b][a] = true;
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (!edge[a][b]) continue;
            for (int c = b + 1; c < n; ++c)
                if (edge[a][c] && edge[b][c]) out.push_back({a, b, c});
        }
    return out;
}

ValidationReport validate_triangulation(const Triangulation& t) {
    ValidationReport r;
    const int n = t.n;
    if (n < 1) {
        r.violations.push_back({"range", {n}, "polygon size must be at least 1"});
        return r;
    }

    ++r.checks;
    if (static_cast<int>(t.arc_lengths.size()) != n) {
        r.violations.push_back({"arcs", {}, "expected " + std::to_string(n) + " arc lengths"});
    } else {
        Rational total(0);
        for (int a = 0; a < n; ++a) {
            if (t.arc_lengths[a] < 0) r.violations.push_back({"arcs", {a}, "negative arc length"});
            total += t.arc_lengths[a];
        }
        if (total != 1) r.violations.push_back({"arcs", {}, "arc lengths sum to " + format_rational(total)});
    }

    std::set<std::pair<int, int>> seen;
    std::vector<std::pair<int, int>> good;
    for (auto [a, b] : t.diagonals) {
        ++r.checks;
        if (a > b) std::swap(a, b);
        if (a < 0 || b >= n || a == b) {
            r.violations.push_back({"range", {a, b}, "diagonal endpoints out of range"});
            continue;
        }
        if (is_side(n, a, b)) {
            r.violations.push_back({"side", {a, b}, "diagonal joins adjacent vertices"});
            continue;
        }
        if (!seen.insert({a, b}).second) {
            r.violations.push_back({"duplicate", {a, b}, "diagonal listed twice"});
            continue;
        }
        good.emplace_back(a, b);
    }
    for (std::size_t i = 0; i < good.size(); ++i)
        for (std::size_t j = i + 1; j < good.size(); ++j) {
            ++r.checks;
            if (crosses(good[i], good[j])) {
                r.violations.push_back({"non-crossing",
                                        {good[i].first, good[i].second, good[j].first, good[j].second},
                                        "diagonals cross"});
            }
        }
    const int expected = std::max(0, n - 3);
    ++r.checks;
    if (static_cast<int>(t.diagonals.size()) != expected) {
        r.violations.push_back({"count",
                                {},
                                std::to_string(t.diagonals.size()) + " diagonals, expected " +
                                    std::to_string(expected)});
    }
    if (n < 3 || !r.ok()) return r;

    const auto tris = triangles(t);
    ++r.checks;
    if (static_cast<int>(tris.size()) != n - 2) {
        r.violations.push_back({"face", {}, std::to_string(tris.size()) + " triangles, expected " +
                                                std::to_string(n - 2)});
        return r;
    }

    // Every triple of distinct faces needs exactly one separating triangle.
    const int faces = n + static_cast<int>(tris.size());
    std::vector<std::vector<int>> fv(faces);
    for (int f = 0; f < faces; ++f) fv[f] = face_vertices(n, tris, f);
    // region[t][f]: region of face f relative to triangle t, 3 for f == t.
    std::vector<std::vector<int>> region(tris.size(), std::vector<int>(faces));
    for (std::size_t k = 0; k < tris.size(); ++k)
        for (int f = 0; f < faces; ++f)
            region[k][f] = (f == n + static_cast<int>(k)) ? 3 : region_of(tris[k], fv[f]);
    for (int x = 0; x < faces; ++x)
        for (int y = x + 1; y < faces; ++y)
            for (int z = y + 1; z < faces; ++z) {
                ++r.checks;
                int count = 0;
                for (std::size_t k = 0; k < tris.size(); ++k) {
                    const int rx = region[k][x], ry = region[k][y], rz = region[k][z];
                    if (rx != ry && rx != rz && ry != rz) ++count;
                }
                if (count != 1) {
                    r.violations.push_back({"separation", {x, y, z},
                                            std::to_string(count) + " separating triangles"});
                }
            }
    return r;
}

void validate_arc_measure(const Triangulation& t, const ArcTwoLevelMeasure& k) {
    if (k.components.empty()) throw InvalidArgument("empty arc measure");
    Rational weights(0);
    for (const auto& c : k.components) {
        if (c.weight < 0) throw InvalidArgument("negative arc measure weight");
        if (static_cast<int>(c.arcs.size()) != t.n) throw InvalidArgument("arc mass vector has the wrong length");
        Rational total(0);
        for (const auto& x : c.arcs) {
            if (x < 0) throw InvalidArgument("negative arc mass");
            total += x;
        }
        if (total != 1) throw InvalidArgument("arc mass vector sums to " + format_rational(total));
        weights += c.weight;
    }
    if (weights != 1) throw InvalidArgument("arc measure weights sum to " + format_rational(weights));
    const auto m = k.intensity(t.n);
    for (int a = 0; a < t.n; ++a) {
        if (m[a] != t.arc_lengths[a]) {
            throw InvalidArgument("intensity of arc " + std::to_string(a) + " is " + format_rational(m[a]) +
                                  ", arc length is " + format_rational(t.arc_lengths[a]));
        }
    }
}

A2mTree dual_tree(const Triangulation& t, const ArcTwoLevelMeasure& k) {
    const auto report = validate_triangulation(t);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw InvalidArgument("invalid triangulation (" + v.rule + "): " + v.detail);
    }
    validate_arc_measure(t, k);

    const int n = t.n;
    const auto tris = triangles(t);
    std::vector<Vertex> ids;
    for (Vertex v = 0; v < n + static_cast<Vertex>(tris.size()); ++v) ids.push_back(v);
    std::vector<Edge> edges;
    if (n == 2) edges.emplace_back(0, 1);
    std::map<std::pair<int, int>, std::vector<Vertex>> by_diagonal;
    for (std::size_t i = 0; i < tris.size(); ++i) {
        const Vertex id = n + static_cast<Vertex>(i);
        const auto [a, b, c] = tris[i];
        for (const auto& [p, q] : {std::pair{a, b}, std::pair{b, c}, std::pair{a, c}}) {
            if (is_side(n, p, q)) {
                edges.emplace_back(side_arc(n, p, q), id);
            } else {
                by_diagonal[{p, q}].push_back(id);
            }
        }
    }
    for (const auto& [d, ts] : by_diagonal) {
        if (ts.size() != 2) throw InvalidArgument("diagonal does not separate two triangles");
        edges.emplace_back(ts[0], ts[1]);
    }

    A2mTree chi{AlgebraicTree(ids, edges), {}};
    for (const auto& c : k.components) {
        Measure<Rational> mu;
        for (int a = 0; a < n; ++a)
            if (c.arcs[a] != 0) mu.mass[a] = c.arcs[a];
        chi.nu.components.push_back({c.weight, std::move(mu)});
    }
    return chi;
}

std::vector<int> circle_component_arcs(const Triangulation& t, Vertex x, Vertex y) {
    const int n = t.n;
    const auto tris = triangles(t);
    const Vertex faces = n + static_cast<Vertex>(tris.size());
    if (x < 0 || y < 0 || x >= faces || y >= faces) throw UnknownVertex(x < 0 || x >= faces ? x : y);
    std::vector<int> out;
    if (x == y) {
        if (x < n) out.push_back(static_cast<int>(x));
        return out;
    }
    if (x < n) {
        for (int a = 0; a < n; ++a)
            if (a != x) out.push_back(a);
        return out;
    }
    const auto& tri = tris[static_cast<std::size_t>(x - n)];
    const int r = region_of(tri, face_vertices(n, tris, y));
    const int lo = tri[r], hi = tri[(r + 1) % 3];
    for (int a = lo; a != hi; a = (a + 1) % n) out.push_back(a);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

EncodeResult encode_tree(const A2mTree& input, Vertex rho, const std::set<Vertex>& flips) {
    validate_two_level(input.tree, input.nu);
    if (!input.tree.is_binary()) throw InvalidArgument("encode_tree needs a binary tree");
    if (!atoms_on_leaves(input.tree, input.nu)) throw InvalidArgument("encode_tree needs atoms on leaves only");
    if (!input.tree.contains(rho)) throw UnknownVertex(rho);
    if (input.tree.size() > 1 && input.tree.degree(rho) != 1) throw InvalidArgument("rho must be a leaf");

    const Measure<Rational> mass = intensity(input.nu);
    for (Vertex v : input.tree.vertices()) {
        if ((input.tree.size() == 1 || input.tree.degree(v) == 1) && mass(v) == 0) throw DegenerateArc("leaf " + std::to_string(v) + " carries no intensity mass");
    }
    const A2mTree chi = reduce_a2m(input);
    const AlgebraicTree& t = chi.tree;

    // Depth-first walk from rho; S1 before S2 at every branch point.
    std::vector<Vertex> leaf_order;
    std::vector<std::array<std::size_t, 3>> tri_index;
    std::vector<Vertex> min_leaf(t.size());
    std::function<Vertex(std::size_t, std::size_t)> smallest = [&](std::size_t v, std::size_t parent) {
        Vertex best = t.adjacent(v).size() <= 1 ? t.vertex_at(v) : std::numeric_limits<Vertex>::max();
        for (std::size_t w : t.adjacent(v))
            if (w != parent) best = std::min(best, smallest(w, v));
        return min_leaf[v] = best;
    };
    std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t v, std::size_t parent) {
        std::vector<std::size_t> kids;
        for (std::size_t w : t.adjacent(v))
            if (w != parent) kids.push_back(w);
        if (kids.empty()) {
            leaf_order.push_back(t.vertex_at(v));
            return;
        }
        std::sort(kids.begin(), kids.end(), [&](std::size_t a, std::size_t b) { return min_leaf[a] < min_leaf[b]; });
        if (flips.count(t.vertex_at(v))) std::swap(kids[0], kids[1]);
        const std::size_t first = leaf_order.size();
        walk(kids[0], v);
        const std::size_t second = leaf_order.size();
        walk(kids[1], v);
        tri_index.push_back({first, second, leaf_order.size()});
    };

    EncodeResult out;
    const std::size_t root = t.index_of(rho);
    if (t.size() == 1) {
        leaf_order.push_back(rho);
    } else {
        smallest(root, AlgebraicTree::npos);
        leaf_order.push_back(rho);
        const std::size_t next = t.adjacent(root).front();
        if (t.adjacent(next).size() == 1) {
            leaf_order.push_back(t.vertex_at(next));
        } else {
            walk(next, root);
        }
    }

    const int n = static_cast<int>(leaf_order.size());
    std::set<std::pair<int, int>> diagonals;
    for (const auto& tri : tri_index) {
        const int a = static_cast<int>(tri[0]), b = static_cast<int>(tri[1]), c = static_cast<int>(tri[2]) % n;
        for (auto [p, q] : {std::pair{a, b}, std::pair{b, c}, std::pair{a, c}}) {
            if (p > q) std::swap(p, q);
            if (!is_side(n, p, q)) diagonals.insert({p, q});
        }
    }
    out.triangulation.n = n;
    out.triangulation.diagonals.assign(diagonals.begin(), diagonals.end());
    for (Vertex leaf : leaf_order) out.triangulation.arc_lengths.push_back(mass(leaf));
    out.leaf_of_arc = leaf_order;
    for (const auto& c : chi.nu.components) {
        ArcTwoLevelMeasure::Component k{c.weight, {}};
        for (Vertex leaf : leaf_order) k.arcs.push_back(c.measure(leaf));
        out.measure.components.push_back(std::move(k));
    }
    return out;
}

std::vector<Triangulation> enumerate_triangulations(int n) {
    if (n < 3 || n > 14) throw InvalidArgument("enumerate_triangulations needs 3 <= n <= 14");
    using Diagonals = std::vector<std::pair<int, int>>;
    // memo[len]: triangulations of the polygon 0..len with base edge (0, len).
    std::vector<std::vector<Diagonals>> memo(n);
    memo[1] = {Diagonals{}};
    for (int len = 2; len < n; ++len) {
        for (int k = 1; k < len; ++k) {
            for (const auto& left : memo[k]) {
                for (const auto& right : memo[len - k]) {
                    Diagonals d = left;
                    if (k >= 2) d.emplace_back(0, k);
                    for (const auto& [a, b] : right) d.emplace_back(a + k, b + k);
                    if (len - k >= 2) d.emplace_back(k, len);
                    memo[len].push_back(std::move(d));
                }
            }
        }
    }
    std::vector<Triangulation> out;
    out.reserve(memo[n - 1].size());
    for (auto& d : memo[n - 1]) {
        std::sort(d.begin(), d.end());
        out.push_back(Triangulation::with_unit_arcs(n, std::move(d)));
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_disc(const std::vector<Point2D>& pts) {
    if (pts.empty()) throw InvalidArgument("hausdorff_distance needs nonempty point sets");
    for (const auto& [x, y] : pts)
        if (std::hypot(x, y) > 1.0 + 1e-9) throw InvalidArgument("point outside the unit disc");
}

double directed(const std::vector<Point2D>& a, const std::vector<Point2D>& b) {
    double worst = 0.0;
    for (const auto& p : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : b) best = std::min(best, std::hypot(p.first - q.first, p.second - q.second));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<Point2D>& a, const std::vector<Point2D>& b) {
    check_disc(a);
    check_disc(b);
    return std::max(directed(a, b), directed(b, a));
}

std::vector<Point2D> discretize(const Triangulation& t, int per_chord) {
    if (per_chord < 2) throw InvalidArgument("need at least two points per chord");
    if (t.n < 1 || static_cast<int>(t.arc_lengths.size()) != t.n) throw InvalidArgument("malformed triangulation");
    std::vector<Point2D> corner(t.n);
    double s = 0.0;
    for (int k = 0; k < t.n; ++k) {
        const double angle = 2.0 * std::numbers::pi * s;
        corner[k] = {std::cos(angle), std::sin(angle)};
        s += to_double(t.arc_lengths[k]);
    }
    std::vector<std::pair<int, int>> chords = t.diagonals;
    if (t.n == 2) chords.emplace_back(0, 1);
    if (t.n >= 3)
        for (int k = 0; k < t.n; ++k) chords.emplace_back(k, (k + 1) % t.n);
    std::vector<Point2D> out;
    if (chords.empty()) out.push_back(corner[0]);
    for (const auto& [a, b] : chords) {
        for (int i = 0; i < per_chord; ++i) {
            const double u = static_cast<double>(i) / (per_chord - 1);
            out.emplace_back((1 - u) * corner[a].first + u * corner[b].first,
                             (1 - u) * corner[a].second + u * corner[b].second);
        }
    }
    return out;
}

}  // namespace a2mt
