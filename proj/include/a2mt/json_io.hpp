#pragma once

#include "a2mt/kingman.hpp"
#include "a2mt/measure.hpp"
#include "a2mt/shape_stats.hpp"
#include "a2mt/tree.hpp"
#include "a2mt/triangulation.hpp"

#include <json.hpp>

#include <string>

namespace a2mt::io {

using json = nlohmann::json;

/// Rationals are written as "p/q" strings; Float writes JSON numbers.
enum class NumberMode { Rational, Float };

json number(const Rational& r, NumberMode mode);
/// Accepts "p/q" strings, decimal strings and JSON numbers.
Rational read_rational(const json& j);

json tree_to_json(const AlgebraicTree& t);
AlgebraicTree tree_from_json(const json& j);

json two_level_to_json(const TwoLevelMeasure<Rational>& nu, NumberMode mode = NumberMode::Rational);
TwoLevelMeasure<Rational> two_level_from_json(const json& j);

json measure_to_json(const Measure<Rational>& mu, NumberMode mode = NumberMode::Rational);
Measure<Rational> measure_from_json(const json& j);

/// {"vertices", "edges", "nu": {"weights", "measures"}}.
json a2m_to_json(const A2mTree& chi, NumberMode mode = NumberMode::Rational);
A2mTree a2m_from_json(const json& j);

/// {"vertices": [...], "branch_points": [[x, y, z, c], ...]}.
BranchPointTable branch_point_table_from_json(const json& j);
json branch_point_table_to_json(const BranchPointTable& table);

json triangulation_to_json(const Triangulation& t, NumberMode mode = NumberMode::Rational);
Triangulation triangulation_from_json(const json& j);

json arc_measure_to_json(const ArcTwoLevelMeasure& k, NumberMode mode = NumberMode::Rational);
ArcTwoLevelMeasure arc_measure_from_json(const json& j, int n);

json history_to_json(const MergerHistory& h);
MergerHistory history_from_json(const json& j);

json shape_distribution_to_json(const ShapeDistribution& d);
ShapeDistribution shape_distribution_from_json(const json& j);

json report_to_json(const ValidationReport& r);

}  // namespace a2mt::io
