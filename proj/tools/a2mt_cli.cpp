// a2mt: command-line front end for the a2mtree library.
//
// Exit codes: 0 success, 1 validation failure, 2 bad arguments, 3 I/O error.

#include "a2mt/generators.hpp"
#include "a2mt/json_io.hpp"
#include "a2mt/kingman.hpp"
#include "a2mt/shape_stats.hpp"
#include "a2mt/triangulation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace a2mt;
using io::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::string out;
    std::string mode = "rational";

    io::NumberMode number_mode() const {
        return mode == "float" ? io::NumberMode::Float : io::NumberMode::Rational;
    }
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError(path + ": " + e.what());
    }
}

void write_output(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(g.out, std::ios::binary);
    if (!out) throw IoError("cannot write " + g.out);
    out << text;
    if (!out) throw IoError("write to " + g.out + " failed");
}

void emit(const Globals& g, json body, const json& config) {
    body["config"] = config;
    write_output(g, body.dump(2) + "\n");
}

json base_config(const Globals& g, const std::string& command) {
    return {{"command", command}, {"seed", g.seed}, {"jobs", g.jobs}, {"mode", g.mode}};
}

void echo_config(const json& config) { std::cerr << "config: " << config.dump() << "\n"; }

/// Expands a single value to `m` copies; otherwise requires exactly m values.
std::vector<std::size_t> per_host(const std::vector<std::size_t>& n, std::size_t m, const std::string& flag) {
    if (n.size() == 1) return std::vector<std::size_t>(m, n[0]);
    if (n.size() != m) throw UsageError(flag + " needs 1 or " + std::to_string(m) + " values");
    return n;
}

void require_positive(std::size_t value, const std::string& flag) {
    if (value < 1) throw UsageError(flag + " must be at least 1");
}

// ---------------------------------------------------------------------------

int cmd_validate(const Globals& g, const std::string& input) {
    const json doc = read_json(input);
    json config = base_config(g, "validate");
    config["input"] = input;
    echo_config(config);

    json body;
    ValidationReport report;
    auto fail = [&](const std::string& rule, const std::string& detail) {
        report.violations.push_back({rule, {}, detail});
    };

    if (doc.contains("events")) {
        body["kind"] = "history";
        try {
            validate_history(io::history_from_json(doc));
        } catch (const InvalidArgument& e) {
            fail("history", e.what());
        }
    } else if (doc.contains("diagonals")) {
        body["kind"] = "triangulation";
        const Triangulation t = io::triangulation_from_json(doc);
        report = validate_triangulation(t);
        if (report.ok() && doc.contains("measure")) {
            try {
                validate_arc_measure(t, io::arc_measure_from_json(doc.at("measure"), t.n));
            } catch (const InvalidArgument& e) {
                fail("measure", e.what());
            }
        }
    } else if (doc.contains("branch_points")) {
        body["kind"] = "branch_point_map";
        const BranchPointTable table = io::branch_point_table_from_json(doc);
        report = validate_branch_point_map(table.vertices(), table);
    } else {
        body["kind"] = doc.contains("nu") ? "a2m" : "tree";
        try {
            const AlgebraicTree t = io::tree_from_json(doc);
            const TreeStats s = tree_stats(t);
            body["leaves"] = s.leaves;
            body["branch_points"] = s.branch_points;
            body["binary"] = t.is_binary();
            if (doc.contains("nu")) {
                const auto nu = io::two_level_from_json(doc.at("nu"));
                try {
                    validate_two_level(t, nu);
                    body["atoms_on_leaves"] = atoms_on_leaves(t, nu);
                    body["xi"] = io::measure_to_json(branch_point_distribution(t, intensity(nu)), g.number_mode());
                } catch (const Error& e) {
                    fail("measure", e.what());
                }
            }
        } catch (const InvalidArgument& e) {
            fail("tree", e.what());
        }
    }
    body["report"] = io::report_to_json(report);
    emit(g, body, config);
    if (!report.ok()) {
        for (const auto& v : report.violations) std::cerr << "violation " << v.rule << ": " << v.detail << "\n";
        return 1;
    }
    return 0;
}

int cmd_decode(const Globals& g, const std::string& input) {
    const json doc = read_json(input);
    json config = base_config(g, "decode");
    config["input"] = input;
    echo_config(config);
    const Triangulation t = io::triangulation_from_json(doc);
    ArcTwoLevelMeasure k;
    if (doc.contains("measure")) {
        k = io::arc_measure_from_json(doc.at("measure"), t.n);
    } else {
        k.components.push_back({Rational(1), t.arc_lengths});
    }
    emit(g, io::a2m_to_json(dual_tree(t, k), g.number_mode()), config);
    return 0;
}

int cmd_encode(const Globals& g, const std::string& input, std::optional<Vertex> root,
               const std::vector<Vertex>& flips) {
    const A2mTree chi = io::a2m_from_json(read_json(input));
    const Vertex rho = root ? *root : leaves_of(chi.tree).front();
    json config = base_config(g, "encode");
    config["input"] = input;
    config["root"] = rho;
    config["flips"] = flips;
    echo_config(config);
    const EncodeResult r = encode_tree(chi, rho, std::set<Vertex>(flips.begin(), flips.end()));
    json body = io::triangulation_to_json(r.triangulation, g.number_mode());
    body["measure"] = io::arc_measure_to_json(r.measure, g.number_mode());
    body["leaf_of_arc"] = r.leaf_of_arc;
    emit(g, body, config);
    return 0;
}

int cmd_shape_dist(const Globals& g, const std::string& input, std::size_t m, const std::vector<std::size_t>& n_in,
                   const std::string& method, std::size_t samples, double guard) {
    require_positive(m, "--m");
    const auto n = per_host(n_in, m, "--n");
    for (std::size_t k : n) require_positive(k, "--n");
    require_positive(samples, "--samples");
    const A2mTree chi = io::a2m_from_json(read_json(input));
    json config = base_config(g, "shape-dist");
    config.update({{"input", input}, {"m", m}, {"n", n}, {"method", method}, {"samples", samples}, {"guard", guard}});
    echo_config(config);
    const ShapeDistribution d = method == "exact"
                                    ? shape_distribution_exact(chi.tree, chi.nu, m, n, guard)
                                    : shape_distribution_mc(chi.tree, chi.nu, m, n, samples, g.seed, g.jobs);
    emit(g, io::shape_distribution_to_json(d), config);
    return 0;
}

int cmd_ds(const Globals& g, const std::string& a, const std::string& b, std::size_t m_max, std::size_t budget,
           std::size_t samples, double guard, bool mc_only) {
    require_positive(m_max, "--m-max");
    require_positive(budget, "--budget");
    require_positive(samples, "--samples");
    const A2mTree chi_a = io::a2m_from_json(read_json(a));
    const A2mTree chi_b = io::a2m_from_json(read_json(b));
    json config = base_config(g, "ds");
    config.update({{"a", a}, {"b", b}, {"m_max", m_max}, {"budget", budget}, {"samples", samples},
                   {"guard", guard}, {"mc_only", mc_only}});
    echo_config(config);
    ShapeSourceOptions o;
    o.prefer_exact = !mc_only;
    o.guard = guard;
    o.mc_samples = samples;
    o.seed = g.seed;
    o.jobs = g.jobs;
    const DsEstimate est = d_s_truncated(make_shape_source(chi_a, o), make_shape_source(chi_b, o), m_max, budget);
    emit(g, {{"value", est.value}, {"tail_bound", est.tail_bound}, {"terms", est.terms}}, config);
    return 0;
}

int cmd_kingman_sim(const Globals& g, std::size_t m, const std::vector<std::size_t>& n_in, double gh, double gp,
                    bool with_tree) {
    require_positive(m, "--m");
    const auto n = per_host(n_in, m, "--n");
    json config = base_config(g, "kingman sim");
    config.update({{"m", m}, {"n", n}, {"gamma_h", gh}, {"gamma_p", gp}, {"tree", with_tree}});
    echo_config(config);
    const MergerHistory h = simulate(m, n, gh, gp, g.seed);
    json body = io::history_to_json(h);
    if (with_tree) {
        const EmpiricalTwoLevel e = history_to_tree(h);
        body["tree"] = io::a2m_to_json(e.chi, g.number_mode());
        body["root"] = e.root;
        body["rooted_shape"] = rooted_shape_code(h);
    }
    emit(g, body, config);
    return 0;
}

int cmd_kingman_consistency(const Globals& g, std::size_t m, const std::vector<std::size_t>& n_in, std::size_t jm,
                            const std::vector<std::size_t>& jn_in, double gh, double gp, std::size_t samples) {
    require_positive(m, "--m");
    require_positive(jm, "--jm");
    require_positive(samples, "--samples");
    const auto n = per_host(n_in, m, "--n");
    const auto jn = per_host(jn_in, jm, "--jn");
    if (jm > m) throw UsageError("--jm cannot exceed --m");
    for (std::size_t i = 0; i < jm; ++i)
        if (jn[i] > n[i]) throw UsageError("--jn cannot exceed --n for any host");
    json config = base_config(g, "kingman consistency");
    config.update({{"m", m}, {"n", n}, {"jm", jm}, {"jn", jn}, {"gamma_h", gh}, {"gamma_p", gp}, {"samples", samples}});
    echo_config(config);
    const ConsistencyResult r = consistency_test(m, n, jm, jn, gh, gp, samples, g.seed, g.jobs);
    emit(g,
         {{"tv", r.tv},
          {"support", r.support},
          {"threshold", r.threshold},
          {"pass", r.pass},
          {"restricted", io::shape_distribution_to_json(r.restricted)},
          {"direct", io::shape_distribution_to_json(r.direct)}},
         config);
    return r.pass ? 0 : 1;
}

std::vector<ScheduleEntry> parse_schedule(const std::string& text) {
    // "4x4,8x8" or with explicit parasite counts "2x3:5".
    std::vector<ScheduleEntry> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto x = item.find('x');
        if (x == std::string::npos) throw UsageError("schedule entries look like MxN or MxN1:N2:...");
        ScheduleEntry e;
        try {
            e.M = std::stoul(item.substr(0, x));
            std::stringstream ns(item.substr(x + 1));
            std::string part;
            while (std::getline(ns, part, ':')) e.N.push_back(std::stoul(part));
        } catch (const std::exception&) {
            throw UsageError("cannot parse schedule entry '" + item + "'");
        }
        if (e.M < 1 || e.N.empty()) throw UsageError("cannot parse schedule entry '" + item + "'");
        e.N = per_host(e.N, e.M, "schedule entry " + item);
        out.push_back(std::move(e));
    }
    if (out.size() < 2) throw UsageError("--schedule needs at least two entries");
    return out;
}

int cmd_kingman_converge(const Globals& g, const std::string& schedule_text, double gh, double gp,
                         std::size_t m_max, std::size_t budget, std::size_t samples, std::size_t replicas) {
    require_positive(m_max, "--m-max");
    require_positive(budget, "--budget");
    require_positive(samples, "--samples");
    require_positive(replicas, "--replicas");
    const auto schedule = parse_schedule(schedule_text);
    json config = base_config(g, "kingman converge");
    config.update({{"schedule", schedule_text}, {"gamma_h", gh}, {"gamma_p", gp}, {"m_max", m_max},
                   {"budget", budget}, {"samples", samples}, {"replicas", replicas}});
    echo_config(config);
    ConvergenceOptions o;
    o.gamma_h = gh;
    o.gamma_p = gp;
    o.m_max = m_max;
    o.budget = budget;
    o.samples = samples;
    o.replicas = replicas;
    o.seed = g.seed;
    o.jobs = g.jobs;
    const auto rows = convergence_experiment(schedule, o);
    write_output(g, "# config: " + config.dump() + "\n" + convergence_csv(rows));
    return 0;
}

int cmd_bpd_rate(const Globals& g, const std::string& input, std::size_t leaves, const std::vector<std::size_t>& ps,
                 std::size_t trials) {
    require_positive(trials, "--trials");
    if (ps.empty()) throw UsageError("--p needs at least one value");
    for (std::size_t p : ps) require_positive(p, "--p");
    json config = base_config(g, "bpd-rate");
    config.update({{"p", ps}, {"trials", trials}});
    AlgebraicTree t = caterpillar_tree(2);
    Measure<Rational> mu;
    if (!input.empty()) {
        const A2mTree chi = io::a2m_from_json(read_json(input));
        t = chi.tree;
        mu = intensity(chi.nu);
        config["input"] = input;
    } else {
        if (leaves < 2) throw UsageError("--leaves must be at least 2");
        Rng rng(g.seed);
        t = random_binary_tree(leaves, rng);
        mu = uniform_measure(leaves_of(t));
        config["leaves"] = leaves;
    }
    echo_config(config);
    json rows = json::array();
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const BpdRateResult r = empirical_bpd_error(t, mu, ps[k], trials, derive_seed(g.seed, k + 1));
        rows.push_back({{"p", r.p}, {"median", r.median()}, {"max", r.max()}, {"bound", r.bound}});
    }
    emit(g, {{"results", rows}}, config);
    return 0;
}

int cmd_enumerate(const Globals& g, int n) {
    if (n < 3 || n > 14) throw UsageError("--n must lie in [3, 14]");
    json config = base_config(g, "enumerate");
    config["n"] = n;
    echo_config(config);
    json list = json::array();
    for (const auto& t : enumerate_triangulations(n)) list.push_back(io::triangulation_to_json(t, g.number_mode()));
    emit(g, {{"n", n}, {"count", list.size()}, {"triangulations", list}}, config);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Algebraic two-level measure trees: codec, shapes and nested Kingman experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Seed for all randomness");
    app.add_option("--jobs", g.jobs, "Worker threads for Monte Carlo work")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output file (default: standard output)");
    app.add_option("--mode", g.mode, "Number format for measures")->check(CLI::IsMember({"rational", "float"}));

    std::string input, input_b;
    std::optional<Vertex> root;
    std::vector<Vertex> flips;
    std::size_t m = 1, jm = 1, m_max = 2, budget = 10, samples = 10000, trials = 200, leaves = 20, replicas = 1;
    std::vector<std::size_t> n{1}, jn{1}, ps{25, 100, 400};
    std::string method = "exact", schedule = "4x4,8x8,16x16";
    double guard = kEnumerationGuard, gamma_h = 1.0, gamma_p = 1.0;
    bool with_tree = false, mc_only = false;
    int polygon = 6;

    auto* validate = app.add_subcommand("validate", "Check a tree, branch point map, triangulation or history file");
    validate->add_option("--input", input, "Input JSON")->required();

    auto* decode = app.add_subcommand("decode", "Triangulation (+ arc measure) to its dual a2m tree");
    decode->add_option("--input", input, "Triangulation JSON")->required();

    auto* encode = app.add_subcommand("encode", "Binary a2m tree to a triangulation with arc measure");
    encode->add_option("--input", input, "a2m tree JSON")->required();
    encode->add_option("--root", root, "Leaf to start from (default: smallest leaf)");
    encode->add_option("--flip", flips, "Branch points whose component order is swapped");

    auto* shape_dist = app.add_subcommand("shape-dist", "Shape distribution of an a2m tree");
    shape_dist->add_option("--input", input, "a2m tree JSON")->required();
    shape_dist->add_option("--m", m, "Number of hosts sampled");
    shape_dist->add_option("--n", n, "Points per host (one value or m values)")->delimiter(',');
    shape_dist->add_option("--method", method, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
    shape_dist->add_option("--samples", samples, "Monte Carlo samples");
    shape_dist->add_option("--guard", guard, "Largest exact enumeration allowed");

    auto* ds = app.add_subcommand("ds", "Truncated d_s between two a2m trees");
    ds->add_option("--a", input, "First a2m tree JSON")->required();
    ds->add_option("--b", input_b, "Second a2m tree JSON")->required();
    ds->add_option("--m-max", m_max, "Largest m in the index set");
    ds->add_option("--budget", budget, "Index vectors per m");
    ds->add_option("--samples", samples, "Monte Carlo samples per term");
    ds->add_option("--guard", guard, "Largest exact enumeration allowed per term");
    ds->add_flag("--mc-only", mc_only, "Never enumerate exactly");

    auto* kingman = app.add_subcommand("kingman", "Nested Kingman coalescent");
    kingman->require_subcommand(1);
    kingman->fallthrough();
    auto* sim = kingman->add_subcommand("sim", "Simulate one merger history");
    sim->add_option("--m", m, "Hosts");
    sim->add_option("--n", n, "Parasites per host (one value or m values)")->delimiter(',');
    sim->add_flag("--tree", with_tree, "Also write the a2m tree");
    auto* consistency = kingman->add_subcommand("consistency", "Restriction vs direct simulation");
    consistency->add_option("--m", m, "Hosts of the full index set");
    consistency->add_option("--n", n, "Parasites per host of the full index set")->delimiter(',');
    consistency->add_option("--jm", jm, "Hosts of the grid J");
    consistency->add_option("--jn", jn, "Parasites per host of the grid J")->delimiter(',');
    consistency->add_option("--samples", samples, "Simulations per side");
    auto* converge = kingman->add_subcommand("converge", "d_s between consecutive schedule entries (CSV)");
    converge->add_option("--schedule", schedule, "Entries MxN or MxN1:N2:..., comma separated");
    converge->add_option("--m-max", m_max, "Largest m in the index set");
    converge->add_option("--budget", budget, "Index vectors per m");
    converge->add_option("--samples", samples, "Simulated trees per entry");
    converge->add_option("--replicas", replicas, "Replica seeds");
    for (auto* sub : {sim, consistency, converge}) {
        sub->add_option("--gamma-h", gamma_h, "Host merger rate")->check(CLI::PositiveNumber);
        sub->add_option("--gamma-p", gamma_p, "Parasite merger rate")->check(CLI::PositiveNumber);
    }

    auto* bpd = app.add_subcommand("bpd-rate", "Empirical branch point distribution error");
    bpd->add_option("--input", input, "a2m tree JSON (default: random binary tree, uniform leaves)");
    bpd->add_option("--leaves", leaves, "Leaves of the default fixture");
    bpd->add_option("--p", ps, "Triple counts")->delimiter(',');
    bpd->add_option("--trials", trials, "Trials per p");

    auto* enumerate = app.add_subcommand("enumerate", "All triangulations of the n-gon");
    enumerate->add_option("--n", polygon, "Polygon size (3..14)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*validate) return cmd_validate(g, input);
        if (*decode) return cmd_decode(g, input);
        if (*encode) return cmd_encode(g, input, root, flips);
        if (*shape_dist) return cmd_shape_dist(g, input, m, n, method, samples, guard);
        if (*ds) return cmd_ds(g, input, input_b, m_max, budget, samples, guard, mc_only);
        if (*sim) return cmd_kingman_sim(g, m, n, gamma_h, gamma_p, with_tree);
        if (*consistency) return cmd_kingman_consistency(g, m, n, jm, jn, gamma_h, gamma_p, samples);
        if (*converge) return cmd_kingman_converge(g, schedule, gamma_h, gamma_p, m_max, budget, samples, replicas);
        if (*bpd) return cmd_bpd_rate(g, input, leaves, ps, trials);
        if (*enumerate) return cmd_enumerate(g, polygon);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
