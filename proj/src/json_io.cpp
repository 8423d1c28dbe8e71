#include "a2mt/json_io.hpp"

namespace a2mt::io {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument("malformed JSON: " + what);
}

const json& field(const json& j, const char* key) {
    require(j.is_object() && j.contains(key), std::string("missing \"") + key + "\"");
    return j.at(key);
}

}  // namespace

json number(const Rational& r, NumberMode mode) {
    if (mode == NumberMode::Float) return to_double(r);
    return format_rational(r);
}

Rational read_rational(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    require(j.is_number(), "expected a number or \"p/q\" string");
    return parse_rational(j.dump());
}

json tree_to_json(const AlgebraicTree& t) {
    json edges = json::array();
    for (const auto& [a, b] : t.edges()) edges.push_back({a, b});
    return {{"vertices", t.vertices()}, {"edges", edges}};
}

AlgebraicTree tree_from_json(const json& j) {
    const auto& vs = field(j, "vertices");
    require(vs.is_array(), "\"vertices\" must be an array");
    std::vector<Vertex> vertices = vs.get<std::vector<Vertex>>();
    std::vector<Edge> edges;
    for (const auto& e : field(j, "edges")) {
        require(e.is_array() && e.size() == 2, "edges are [a, b] pairs");
        edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
    }
    return AlgebraicTree(std::move(vertices), edges);
}

json measure_to_json(const Measure<Rational>& mu, NumberMode mode) {
    json out = json::object();
    for (const auto& [v, m] : mu.mass) out[std::to_string(v)] = number(m, mode);
    return out;
}

Measure<Rational> measure_from_json(const json& j) {
    require(j.is_object(), "a measure is an object {\"vertex\": mass}");
    Measure<Rational> mu;
    for (const auto& [key, value] : j.items()) {
        std::size_t used = 0;
        Vertex v = 0;
        try {
            v = std::stoll(key, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == key.size() && !key.empty(), "measure key \"" + key + "\" is not a vertex id");
        mu.mass[v] = read_rational(value);
    }
    return mu;
}

json two_level_to_json(const TwoLevelMeasure<Rational>& nu, NumberMode mode) {
    json weights = json::array(), measures = json::array();
    for (const auto& c : nu.components) {
        weights.push_back(number(c.weight, mode));
        measures.push_back(measure_to_json(c.measure, mode));
    }
    return {{"weights", weights}, {"measures", measures}};
}

TwoLevelMeasure<Rational> two_level_from_json(const json& j) {
    const auto& ws = field(j, "weights");
    const auto& ms = field(j, "measures");
    require(ws.is_array() && ms.is_array() && ws.size() == ms.size(), "weights and measures must align");
    TwoLevelMeasure<Rational> nu;
    for (std::size_t i = 0; i < ws.size(); ++i) nu.components.push_back({read_rational(ws[i]), measure_from_json(ms[i])});
    return nu;
}

json a2m_to_json(const A2mTree& chi, NumberMode mode) {
    json out = tree_to_json(chi.tree);
    out["nu"] = two_level_to_json(chi.nu, mode);
    return out;
}

A2mTree a2m_from_json(const json& j) {
    return A2mTree{tree_from_json(j), two_level_from_json(field(j, "nu"))};
}

BranchPointTable branch_point_table_from_json(const json& j) {
    BranchPointTable table(field(j, "vertices").get<std::vector<Vertex>>());
    for (const auto& row : field(j, "branch_points")) {
        require(row.is_array() && row.size() == 4, "branch point rows are [x, y, z, c]");
        table.set(row[0].get<Vertex>(), row[1].get<Vertex>(), row[2].get<Vertex>(), row[3].get<Vertex>());
    }
    return table;
}

json branch_point_table_to_json(const BranchPointTable& table) {
    json rows = json::array();
    for (const auto& [key, c] : table.rows()) rows.push_back({key[0], key[1], key[2], c});
    return {{"vertices", table.vertices()}, {"branch_points", rows}};
}

json triangulation_to_json(const Triangulation& t, NumberMode mode) {
    json diagonals = json::array(), arcs = json::array();
    for (const auto& [a, b] : t.diagonals) diagonals.push_back({a, b});
    for (const auto& x : t.arc_lengths) arcs.push_back(number(x, mode));
    return {{"n", t.n}, {"diagonals", diagonals}, {"arcs", arcs}};
}

Triangulation triangulation_from_json(const json& j) {
    Triangulation t;
    t.n = field(j, "n").get<int>();
    for (const auto& d : field(j, "diagonals")) {
        require(d.is_array() && d.size() == 2, "diagonals are [a, b] pairs");
        t.diagonals.emplace_back(d[0].get<int>(), d[1].get<int>());
    }
    if (j.contains("arcs")) {
        for (const auto& a : j.at("arcs")) t.arc_lengths.push_back(read_rational(a));
    } else {
        require(t.n >= 1, "\"n\" must be positive");
        t.arc_lengths.assign(t.n, Rational(1, t.n));
    }
    return t;
}

json arc_measure_to_json(const ArcTwoLevelMeasure& k, NumberMode mode) {
    json weights = json::array(), measures = json::array();
    for (const auto& c : k.components) {
        weights.push_back(number(c.weight, mode));
        json m = json::object();
        for (std::size_t a = 0; a < c.arcs.size(); ++a)
            if (c.arcs[a] != 0) m[std::to_string(a)] = number(c.arcs[a], mode);
        measures.push_back(m);
    }
    return {{"weights", weights}, {"measures", measures}};
}

ArcTwoLevelMeasure arc_measure_from_json(const json& j, int n) {
    const TwoLevelMeasure<Rational> nu = two_level_from_json(j);
    ArcTwoLevelMeasure k;
    for (const auto& c : nu.components) {
        ArcTwoLevelMeasure::Component comp{c.weight, std::vector<Rational>(n, Rational(0))};
        for (const auto& [a, m] : c.measure.mass) {
            if (a < 0 || a >= n) throw InvalidArgument("arc index " + std::to_string(a) + " out of range");
            comp.arcs[a] = m;
        }
        k.components.push_back(std::move(comp));
    }
    return k;
}

json history_to_json(const MergerHistory& h) {
    json events = json::array();
    for (const auto& e : h.events) {
        events.push_back({{"t", e.time},
                          {"level", e.level == Level::Host ? "H" : "P"},
                          {"blocks", {e.blocks[0], e.blocks[1]}}});
    }
    return {{"M", h.M}, {"N", h.N}, {"gamma_h", h.gamma_h}, {"gamma_p", h.gamma_p}, {"events", events}};
}

MergerHistory history_from_json(const json& j) {
    MergerHistory h;
    h.M = field(j, "M").get<std::size_t>();
    h.N = field(j, "N").get<std::vector<std::size_t>>();
    h.gamma_h = field(j, "gamma_h").get<double>();
    h.gamma_p = field(j, "gamma_p").get<double>();
    for (const auto& e : field(j, "events")) {
        const std::string level = field(e, "level").get<std::string>();
        require(level == "H" || level == "P", "event level must be \"H\" or \"P\"");
        const auto& b = field(e, "blocks");
        require(b.is_array() && b.size() == 2, "events merge two blocks");
        h.events.push_back({field(e, "t").get<double>(), level == "H" ? Level::Host : Level::Parasite,
                            {b[0].get<std::size_t>(), b[1].get<std::size_t>()}});
    }
    return h;
}

json shape_distribution_to_json(const ShapeDistribution& d) {
    json probs = json::object();
    for (const auto& [code, p] : d.probs) probs[code] = p;
    return {{"m", d.m}, {"n", d.n}, {"mode", to_string(d.mode)}, {"samples", d.samples}, {"probs", probs}};
}

ShapeDistribution shape_distribution_from_json(const json& j) {
    ShapeDistribution d;
    d.m = field(j, "m").get<std::size_t>();
    d.n = field(j, "n").get<std::vector<std::size_t>>();
    const std::string mode = field(j, "mode").get<std::string>();
    require(mode == "exact" || mode == "mc", "mode must be \"exact\" or \"mc\"");
    d.mode = mode == "exact" ? ShapeDistribution::Mode::Exact : ShapeDistribution::Mode::MonteCarlo;
    d.samples = j.value("samples", std::size_t{0});
    for (const auto& [code, p] : field(j, "probs").items()) d.probs[code] = p.get<double>();
    return d;
}

json report_to_json(const ValidationReport& r) {
    json violations = json::array();
    for (const auto& v : r.violations) violations.push_back({{"rule", v.rule}, {"args", v.args}, {"detail", v.detail}});
    return {{"ok", r.ok()}, {"checks", r.checks}, {"violations", violations}};
}

}  // namespace a2mt::io
