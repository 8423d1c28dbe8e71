#pragma once

#include "a2mt/measure.hpp"
#include "a2mt/tree.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace a2mt {

/// Double index (i, j): the j-th point sampled from the i-th measure.
/// Indices are one-based; (0, 0) is reserved for a distinguished root.
struct Label {
    int host = 0;
    int index = 0;
    auto operator<=>(const Label&) const = default;
    bool is_root() const { return host == 0 && index == 0; }
};

inline constexpr Label root_label{0, 0};

std::string to_string(const Label& l);

/// (m, n)-labelled cladogram: a binary tree of leaves and degree-3 vertices
/// whose leaves carry nonempty, sorted label lists.
struct Cladogram {
    AlgebraicTree tree;
    std::map<Vertex, std::vector<Label>> labels;

    std::size_t label_count() const;
    /// Every leaf carries exactly one label.
    bool injective() const;
    std::vector<Label> labels_at(Vertex v) const;
};

/// Structural checks: no degree-2 vertices, no degree above 3, labels only
/// on leaves and every leaf labelled.
ValidationReport validate_cladogram(const Cladogram& c);

/// The shape of a sample matrix: the subtree spanned by the samples with
/// degree-2 vertices suppressed; sample (i, j) (one-based) labels the leaf
/// it lands on. A sample sitting on the interior of the spanned subtree
/// becomes a pendant leaf. When `root` is given it is included as an extra
/// point labelled (0, 0), which yields rooted shapes.
///
/// Throws InvalidArgument for a non-binary tree and SampleOnBranchPoint when
/// a sample (or the root) is a branch point of the tree.
Cladogram shape(const AlgebraicTree& t, const SampleMatrix& samples,
                std::optional<Vertex> root = std::nullopt);

/// Isomorphism-invariant code: balanced parentheses, leaves written as
/// "(1.1,2.3)" with sorted labels, "r" for the root label.
std::string canonical_code(const Cladogram& c);

/// Whether a code describes a labelled cladogram with a multi-labelled leaf.
bool code_has_multilabel(const std::string& code);

}  // namespace a2mt
