#pragma once

#include "a2mt/generators.hpp"
#include "a2mt/measure.hpp"
#include "a2mt/tree.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

namespace a2mt::testing {

inline Rational R(long p, long q = 1) { return Rational(p, q); }

/// Path 0-1-...-(n-1).
inline AlgebraicTree path(std::size_t n) { return path_tree(n); }

/// Center 0, leaves 1..k.
inline AlgebraicTree star(std::size_t k) { return star_tree(k); }

/// Two cherries joined by an edge: x1=0, x2=1 at c1=4; x3=2, x4=3 at c2=5.
inline AlgebraicTree four_point_tree() {
    return AlgebraicTree::from_edges(6, {{0, 4}, {1, 4}, {2, 5}, {3, 5}, {4, 5}});
}

/// Tree with two marked points x=2 and y=11 whose component S_x(y) has
/// seven vertices; it has a degree-4 vertex and a degree-2 vertex.
/// Vertices: A=0 C=1 x=2 D=3 I=4 F=5 G=6 H=7 E=8 J=9 B=10 y=11.
inline AlgebraicTree component_fixture() {
    return AlgebraicTree::from_edges(12, {{0, 3}, {1, 3}, {3, 2}, {4, 2}, {2, 5}, {5, 6},
                                          {6, 7}, {6, 8}, {6, 9}, {8, 10}, {8, 11}});
}

/// Binary tree carrying five samples, one of them on an interior vertex.
/// u11=0 (degree 2), u12=1, u21=2, u22=3, u23=4; other vertices 5..10.
inline AlgebraicTree shape_fixture() {
    // D=5 C=6 X=7 G=8 E=9 B=10
    return AlgebraicTree::from_edges(11, {{2, 5}, {6, 5}, {5, 7}, {7, 0}, {7, 3}, {0, 8},
                                          {8, 1}, {8, 9}, {9, 10}, {9, 4}});
}

/// Brute-force unlabelled-or-labelled isomorphism test by permutation search.
template <class Label>
bool brute_isomorphic(const AlgebraicTree& a, const AlgebraicTree& b, Label label_a, Label label_b) {
    if (a.size() != b.size()) return false;
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::set<std::pair<std::size_t, std::size_t>> eb;
    for (const auto& [x, y] : b.edges()) {
        eb.insert({b.index_of(x), b.index_of(y)});
        eb.insert({b.index_of(y), b.index_of(x)});
    }
    const auto ea = a.edges();
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = label_a(a.vertex_at(i)) == label_b(b.vertex_at(perm[i]));
        for (const auto& [x, y] : ea) {
            if (!ok) break;
            ok = eb.count({perm[a.index_of(x)], perm[a.index_of(y)]}) != 0;
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

/// Binary a2m fixtures with atoms on leaves only.
inline std::vector<A2mTree> small_a2m_fixtures() {
    std::vector<A2mTree> out;
    // Star, uniform leaves.
    out.push_back({star(3), one_level(uniform_measure({1, 2, 3}))});
    // Star, two components.
    {
        Measure<Rational> a, b;
        a.mass = {{1, R(1, 2)}, {2, R(1, 2)}};
        b.mass = {{3, R(1)}};
        out.push_back({star(3), {{{R(1, 3), a}, {R(2, 3), b}}}});
    }
    // Four-leaf tree, two components sharing a leaf.
    {
        Measure<Rational> a, b;
        a.mass = {{0, R(1, 4)}, {1, R(3, 4)}};
        b.mass = {{1, R(1, 3)}, {2, R(1, 3)}, {3, R(1, 3)}};
        out.push_back({four_point_tree(), {{{R(1, 2), a}, {R(1, 2), b}}}});
    }
    // Two-vertex tree.
    {
        Measure<Rational> a;
        a.mass = {{0, R(1, 2)}, {1, R(1, 2)}};
        out.push_back({path(2), one_level(a)});
    }
    // Caterpillar with five leaves, skewed measure.
    {
        const AlgebraicTree t = caterpillar_tree(5);
        const auto lv = leaves_of(t);
        Measure<Rational> a, b;
        a.mass = {{lv[0], R(1, 2)}, {lv[1], R(1, 4)}, {lv[4], R(1, 4)}};
        b.mass = {{lv[2], R(1, 2)}, {lv[3], R(1, 2)}};
        out.push_back({t, {{{R(3, 4), a}, {R(1, 4), b}}}});
    }
    return out;
}

}  // namespace a2mt::testing
