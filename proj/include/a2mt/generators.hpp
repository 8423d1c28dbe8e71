#pragma once

#include "a2mt/common.hpp"
#include "a2mt/measure.hpp"
#include "a2mt/tree.hpp"

#include <vector>

namespace a2mt {

// Tree families used by tests, the acceptance runner and the CLI. Vertices
// are always 0..n-1.

/// Every tree on n vertices up to isomorphism (1, 1, 1, 2, 3, 6, 11, 23, ...).
std::vector<AlgebraicTree> free_trees(std::size_t n);

/// Every unrooted tree with `leaves` leaves and all other degrees 3, up to
/// isomorphism. leaves = 1 and 2 give the point and the single edge.
std::vector<AlgebraicTree> binary_trees(std::size_t leaves);

AlgebraicTree star_tree(std::size_t leaves);
AlgebraicTree path_tree(std::size_t n);
/// Binary caterpillar with the given number of leaves (at least 2).
AlgebraicTree caterpillar_tree(std::size_t leaves);

/// Uniform labelled tree on n vertices via a random Pruefer sequence.
AlgebraicTree random_tree(std::size_t n, Rng& rng);
/// Binary tree grown by attaching leaves to uniformly chosen edges.
AlgebraicTree random_binary_tree(std::size_t leaves, Rng& rng);

std::vector<Vertex> leaves_of(const AlgebraicTree& t);

/// Uniform probability measure on the given vertices.
Measure<Rational> uniform_measure(const std::vector<Vertex>& support);
/// Random rational measure with integer weights in [0, max_weight] on the
/// given vertices (at least one weight positive).
Measure<Rational> random_measure(const std::vector<Vertex>& support, int max_weight, Rng& rng);

}  // namespace a2mt
