#pragma once

#include "a2mt/measure.hpp"
#include "a2mt/tree.hpp"

#include <array>
#include <set>
#include <utility>
#include <vector>

namespace a2mt {

/// Triangulation of a convex n-gon inscribed in the unit-circumference
/// circle. Polygon vertex k sits at position arc_lengths[0] + ... +
/// arc_lengths[k-1]; arc a runs from vertex a to vertex a + 1 (mod n).
/// Vertex indices are zero-based.
///
/// n = 1 (one arc covering the circle) and n = 2 (two arcs cut by a single
/// chord) are accepted as degenerate cases without diagonals.
struct Triangulation {
    int n = 0;
    std::vector<std::pair<int, int>> diagonals;  // (a, b) with a < b
    std::vector<Rational> arc_lengths;

    /// n arcs of length 1/n each.
    static Triangulation with_unit_arcs(int n, std::vector<std::pair<int, int>> diagonals);
};

/// K = sum_i weight_i delta_{kappa_i}, each kappa_i given by its arc masses.
struct ArcTwoLevelMeasure {
    struct Component {
        Rational weight;
        std::vector<Rational> arcs;
    };
    std::vector<Component> components;

    std::vector<Rational> intensity(int n) const;
};

/// Triangles of a triangulation as sorted vertex triples, in lexicographic
/// order. Triangle t has dual-tree id n + t.
std::vector<std::array<int, 3>> triangles(const Triangulation& t);

/// Rules reported: "range", "duplicate", "side" (a diagonal joining adjacent
/// vertices), "non-crossing", "count", "face" (triangle count differs from n-2),
/// "arcs" (arc lengths negative, wrong length or not summing to 1) and
/// "separation" (a face triple without exactly one separating triangle).
ValidationReport validate_triangulation(const Triangulation& t);

/// Throws InvalidArgument unless the weights and each component sum to 1
/// and the intensity matches the arc lengths exactly.
void validate_arc_measure(const Triangulation& t, const ArcTwoLevelMeasure& k);

/// The coded a2m tree: one leaf per arc (id = arc index), one branch point
/// per triangle (id = n + triangle index), mu_i(leaf a) = kappa_i(arc a).
/// Throws InvalidArgument for an invalid triangulation or measure.
A2mTree dual_tree(const Triangulation& t, const ArcTwoLevelMeasure& k);

/// Arcs lying in the component of (disc minus face x) that contains face y,
/// computed from polygon geometry alone. Faces are dual-tree ids; for x == y
/// the result is the arc of x (or nothing for a triangle).
std::vector<int> circle_component_arcs(const Triangulation& t, Vertex x, Vertex y);

struct EncodeResult {
    Triangulation triangulation;
    ArcTwoLevelMeasure measure;
    /// leaf_of_arc[a] is the tree vertex coded by arc a.
    std::vector<Vertex> leaf_of_arc;
};

/// Inverse construction for binary a2m trees whose atoms all sit on leaves
/// and whose leaves all carry intensity mass. Massless degree-2 vertices are
/// suppressed first. The tree is walked depth first from the leaf `rho`;
/// at each branch point the component holding the smallest leaf id comes
/// first unless the branch point is listed in `flips`.
///
/// Throws InvalidArgument when the preconditions fail and DegenerateArc for
/// a leaf without intensity mass.
EncodeResult encode_tree(const A2mTree& chi, Vertex rho, const std::set<Vertex>& flips = {});

/// Every triangulation of the convex n-gon with unit arcs, 3 <= n <= 14.
std::vector<Triangulation> enumerate_triangulations(int n);

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

using Point2D = std::pair<double, double>;

/// Symmetric Hausdorff distance; throws InvalidArgument for empty input or
/// points outside the closed unit disc (tolerance 1e-9).
double hausdorff_distance(const std::vector<Point2D>& a, const std::vector<Point2D>& b);

/// Points on all sides and diagonals, `per_chord` evenly spaced points per
/// chord including both ends, with the circle of circumference 1 mapped to
/// the unit circle.
std::vector<Point2D> discretize(const Triangulation& t, int per_chord);

}  // namespace a2mt
