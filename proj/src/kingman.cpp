#include "a2mt/kingman.hpp"

#include "a2mt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>

namespace a2mt {

std::size_t MergerHistory::total_parasites() const {
    std::size_t s = 0;
    for (std::size_t k : N) s += k;
    return s;
}

std::size_t MergerHistory::leaf_block(std::size_t i, std::size_t j) const {
    if (i < 1 || i > M || j < 1 || j > N[i - 1]) throw InvalidArgument("index outside the history");
    std::size_t offset = 0;
    for (std::size_t h = 0; h + 1 < i; ++h) offset += N[h];
    return offset + j - 1;
}

namespace {

void check_parameters(std::size_t M, const std::vector<std::size_t>& N, double gamma_h, double gamma_p) {
    if (M < 1) throw InvalidArgument("need M >= 1");
    if (N.size() != M) throw InvalidArgument("need one parasite count per host");
    for (std::size_t k : N)
        if (k < 1) throw InvalidArgument("parasite counts must be >= 1");
    if (!(gamma_h > 0) || !(gamma_p > 0) || !std::isfinite(gamma_h) || !std::isfinite(gamma_p)) {
        throw InvalidArgument("rates must be positive and finite");
    }
}

double pairs(std::size_t k) { return 0.5 * static_cast<double>(k) * static_cast<double>(k == 0 ? 0 : k - 1); }

/// Uniform unordered pair of distinct positions in [0, k), ascending.
std::pair<std::size_t, std::size_t> pick_pair(std::size_t k, Rng& rng) {
    std::size_t a = rng.below(k);
    std::size_t b = rng.below(k - 1);
    if (b >= a) ++b;
    return std::minmax(a, b);
}

}  // namespace

MergerHistory simulate(std::size_t M, const std::vector<std::size_t>& N, double gamma_h, double gamma_p,
                       std::uint64_t seed) {
    check_parameters(M, N, gamma_h, gamma_p);
    MergerHistory h{M, N, gamma_h, gamma_p, {}};
    const std::size_t S = h.total_parasites();

    // Parasite blocks live inside their host block, so nestedness cannot break.
    struct HostBlock {
        std::size_t id;
        std::vector<std::size_t> parasites;
    };
    std::vector<HostBlock> hosts;
    std::size_t leaf = 0;
    for (std::size_t i = 0; i < M; ++i) {
        HostBlock b{i, {}};
        for (std::size_t j = 0; j < N[i]; ++j) b.parasites.push_back(leaf++);
        hosts.push_back(std::move(b));
    }

    Rng rng(seed);
    std::size_t next_host = M, next_parasite = S;
    double t = 0.0;
    std::vector<double> rates;
    while (true) {
        rates.assign(1, gamma_h * pairs(hosts.size()));
        double total = rates[0];
        for (const auto& b : hosts) {
            rates.push_back(gamma_p * pairs(b.parasites.size()));
            total += rates.back();
        }
        if (total == 0.0) break;
        t += rng.exponential(total);
        const std::size_t which = rng.pick(cumulative_weights(rates));
        if (which == 0) {
            const auto [x, y] = pick_pair(hosts.size(), rng);
            HostBlock merged{next_host++, hosts[x].parasites};
            merged.parasites.insert(merged.parasites.end(), hosts[y].parasites.begin(), hosts[y].parasites.end());
            h.events.push_back({t, Level::Host, {std::min(hosts[x].id, hosts[y].id), std::max(hosts[x].id, hosts[y].id)}});
            hosts.erase(hosts.begin() + static_cast<std::ptrdiff_t>(y));
            hosts.erase(hosts.begin() + static_cast<std::ptrdiff_t>(x));
            hosts.push_back(std::move(merged));
        } else {
            auto& ps = hosts[which - 1].parasites;
            const auto [x, y] = pick_pair(ps.size(), rng);
            h.events.push_back({t, Level::Parasite, {std::min(ps[x], ps[y]), std::max(ps[x], ps[y])}});
            ps.erase(ps.begin() + static_cast<std::ptrdiff_t>(y));
            ps.erase(ps.begin() + static_cast<std::ptrdiff_t>(x));
            ps.push_back(next_parasite++);
        }
    }
    return h;
}

void validate_history(const MergerHistory& h) {
    check_parameters(h.M, h.N, h.gamma_h, h.gamma_p);
    const std::size_t S = h.total_parasites();
    std::set<std::size_t> hosts;
    std::map<std::size_t, std::size_t> host_of;  // live parasite block -> host block
    for (std::size_t i = 0; i < h.M; ++i) hosts.insert(i);
    for (std::size_t i = 1; i <= h.M; ++i)
        for (std::size_t j = 1; j <= h.N[i - 1]; ++j) host_of[h.leaf_block(i, j)] = i - 1;

    std::size_t next_host = h.M, next_parasite = S;
    double last = 0.0;
    for (std::size_t k = 0; k < h.events.size(); ++k) {
        const auto& e = h.events[k];
        const std::string where = "event " + std::to_string(k) + ": ";
        if (!(e.time >= last)) throw InvalidArgument(where + "time goes backwards");
        last = e.time;
        const auto [a, b] = e.blocks;
        if (a >= b) throw InvalidArgument(where + "blocks must be distinct and ascending");
        if (e.level == Level::Host) {
            if (!hosts.count(a) || !hosts.count(b)) throw InvalidArgument(where + "host block is not alive");
            hosts.erase(a);
            hosts.erase(b);
            hosts.insert(next_host);
            for (auto& [p, host] : host_of)
                if (host == a || host == b) host = next_host;
            ++next_host;
        } else {
            const auto ia = host_of.find(a), ib = host_of.find(b);
            if (ia == host_of.end() || ib == host_of.end()) throw InvalidArgument(where + "parasite block is not alive");
            if (ia->second != ib->second) throw InvalidArgument(where + "parasites sit in different host blocks");
            const std::size_t host = ia->second;
            host_of.erase(ia);
            host_of.erase(b);
            host_of[next_parasite++] = host;
        }
    }
    if (hosts.size() != 1 || host_of.size() != 1) throw InvalidArgument("history is not fully coalesced");
}

EmpiricalTwoLevel history_to_tree(const MergerHistory& h) {
    validate_history(h);
    const std::size_t S = h.total_parasites();
    const auto root = static_cast<Vertex>(2 * S - 1);
    std::vector<Vertex> ids;
    for (Vertex v = 0; v <= root; ++v) ids.push_back(v);
    std::vector<Edge> edges;
    Vertex next = static_cast<Vertex>(S);
    for (const auto& e : h.events) {
        if (e.level != Level::Parasite) continue;
        edges.emplace_back(static_cast<Vertex>(e.blocks[0]), next);
        edges.emplace_back(static_cast<Vertex>(e.blocks[1]), next);
        ++next;
    }
    edges.emplace_back(next - 1, root);

    EmpiricalTwoLevel out{A2mTree{AlgebraicTree(ids, edges), {}}, root, {}};
    for (std::size_t i = 1; i <= h.M; ++i) {
        std::vector<Vertex> row;
        Measure<Rational> mu;
        for (std::size_t j = 1; j <= h.N[i - 1]; ++j) {
            const auto v = static_cast<Vertex>(h.leaf_block(i, j));
            row.push_back(v);
            mu.mass[v] = Rational(1, static_cast<long>(h.N[i - 1]));
        }
        out.leaves.push_back(std::move(row));
        out.chi.nu.components.push_back({Rational(1, static_cast<long>(h.M)), std::move(mu)});
    }
    return out;
}

MinimumTable history_minimum_table(const MergerHistory& h) {
    validate_history(h);
    const std::size_t S = h.total_parasites();
    const std::size_t root = 2 * S - 1;
    std::vector<std::size_t> parent(2 * S, root);
    std::size_t next = S;
    for (const auto& e : h.events) {
        if (e.level != Level::Parasite) continue;
        parent[e.blocks[0]] = parent[e.blocks[1]] = next++;
    }
    parent[root] = AlgebraicTree::npos;

    std::vector<Vertex> ids;
    for (std::size_t v = 0; v <= root; ++v) ids.push_back(static_cast<Vertex>(v));
    MinimumTable table(ids);
    for (std::size_t x = 0; x <= root; ++x) {
        std::set<std::size_t> up;
        for (std::size_t v = x; v != AlgebraicTree::npos; v = parent[v]) up.insert(v);
        for (std::size_t y = x; y <= root; ++y) {
            std::size_t v = y;
            while (!up.count(v)) v = parent[v];
            table.set(static_cast<Vertex>(x), static_cast<Vertex>(y), static_cast<Vertex>(v));
        }
    }
    return table;
}

IndexSet grid(std::size_t m, const std::vector<std::size_t>& n) {
    if (n.size() != m) throw InvalidArgument("grid needs one size per host");
    IndexSet J;
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = 1; j <= n[i - 1]; ++j) J.emplace_back(i, j);
    return J;
}

MergerHistory restrict(const MergerHistory& h, const IndexSet& J) {
    validate_history(h);
    if (J.empty()) throw InvalidArgument("restriction to an empty index set");
    std::map<std::size_t, std::set<std::size_t>> by_host;
    for (const auto& [i, j] : J) {
        if (i < 1 || i > h.M || j < 1 || j > h.N[i - 1]) throw InvalidArgument("J is not a subset of the index set");
        if (!by_host[i].insert(j).second) throw InvalidArgument("J lists an index twice");
    }

    MergerHistory r{by_host.size(), {}, h.gamma_h, h.gamma_p, {}};
    constexpr std::size_t none = AlgebraicTree::npos;
    const std::size_t S = h.total_parasites();
    std::vector<std::size_t> host_map(2 * h.M, none), parasite_map(2 * S, none);
    std::size_t new_host = 0, new_leaf = 0;
    for (const auto& [i, js] : by_host) {
        host_map[i - 1] = new_host++;
        r.N.push_back(js.size());
        for (std::size_t j : js) parasite_map[h.leaf_block(i, j)] = new_leaf++;
    }

    std::size_t next_host = h.M, next_parasite = S;
    std::size_t new_next_host = r.M, new_next_parasite = new_leaf;
    for (const auto& e : h.events) {
        const bool host = e.level == Level::Host;
        auto& map = host ? host_map : parasite_map;
        const std::size_t created = host ? next_host++ : next_parasite++;
        const std::size_t a = map[e.blocks[0]], b = map[e.blocks[1]];
        if (a != none && b != none) {
            const std::size_t id = host ? new_next_host++ : new_next_parasite++;
            r.events.push_back({e.time, e.level, {std::min(a, b), std::max(a, b)}});
            map[created] = id;
        } else {
            map[created] = (a != none) ? a : b;
        }
    }
    return r;
}

std::string rooted_shape_code(const MergerHistory& h) {
    const EmpiricalTwoLevel e = history_to_tree(h);
    return canonical_code(shape(e.chi.tree, e.leaves, e.root));
}

namespace {

/// Counts code(s) for s < samples over fixed chunks, merged in chunk order.
ShapeDistribution count_codes(std::size_t m, const std::vector<std::size_t>& n, std::size_t samples,
                              std::size_t jobs, const std::function<std::string(std::size_t)>& code) {
    if (samples < 1) throw InvalidArgument("need at least one sample");
    constexpr std::size_t kMaxChunks = 32;
    const std::size_t chunks = std::min(samples, kMaxChunks);
    std::vector<std::size_t> start(chunks + 1, 0);
    for (std::size_t c = 0; c < chunks; ++c) start[c + 1] = start[c] + chunk_size(samples, chunks, c);
    std::vector<std::map<std::string, std::size_t>> counts(chunks);
    parallel_for(chunks, jobs, [&](std::size_t c) {
        for (std::size_t s = start[c]; s < start[c + 1]; ++s) ++counts[c][code(s)];
    });
    std::map<std::string, std::size_t> merged;
    for (const auto& part : counts)
        for (const auto& [k, v] : part) merged[k] += v;
    ShapeDistribution d;
    d.m = m;
    d.n = n;
    d.mode = ShapeDistribution::Mode::MonteCarlo;
    d.samples = samples;
    for (const auto& [k, v] : merged) d.probs[k] = static_cast<double>(v) / static_cast<double>(samples);
    return d;
}

/// Empirical law of code(derive_seed(seed, s)) over s < samples.
ShapeDistribution code_distribution(std::size_t m, const std::vector<std::size_t>& n, std::size_t samples,
                                    std::uint64_t seed, std::size_t jobs,
                                    const std::function<std::string(std::uint64_t)>& code) {
    return count_codes(m, n, samples, jobs, [&](std::size_t s) { return code(derive_seed(seed, s)); });
}

}  // namespace

ShapeDistribution kingman_shape_distribution(std::size_t M, const std::vector<std::size_t>& N, double gamma_h,
                                             double gamma_p, std::size_t samples, std::uint64_t seed,
                                             std::size_t jobs) {
    check_parameters(M, N, gamma_h, gamma_p);
    return code_distribution(M, N, samples, seed, jobs, [&](std::uint64_t s) {
        return rooted_shape_code(simulate(M, N, gamma_h, gamma_p, s));
    });
}

ConsistencyResult consistency_test(std::size_t M, const std::vector<std::size_t>& N, std::size_t m,
                                   const std::vector<std::size_t>& n, double gamma_h, double gamma_p,
                                   std::size_t samples, std::uint64_t seed, std::size_t jobs) {
    check_parameters(M, N, gamma_h, gamma_p);
    check_parameters(m, n, gamma_h, gamma_p);
    if (m > M) throw InvalidArgument("restriction has more hosts than the full history");
    for (std::size_t i = 0; i < m; ++i)
        if (n[i] > N[i]) throw InvalidArgument("restriction has more parasites than the full history");
    const IndexSet J = grid(m, n);

    ConsistencyResult r;
    r.restricted = code_distribution(m, n, samples, derive_seed(seed, 0), jobs, [&](std::uint64_t s) {
        return rooted_shape_code(restrict(simulate(M, N, gamma_h, gamma_p, s), J));
    });
    r.direct = code_distribution(m, n, samples, derive_seed(seed, 1), jobs, [&](std::uint64_t s) {
        return rooted_shape_code(simulate(m, n, gamma_h, gamma_p, s));
    });
    r.tv = tv_distance(r.restricted, r.direct);
    std::set<std::string> keys;
    for (const auto& [k, p] : r.restricted.probs) keys.insert(k);
    for (const auto& [k, p] : r.direct.probs) keys.insert(k);
    r.support = keys.size();
    r.threshold = 3.0 * std::sqrt(static_cast<double>(r.support) / static_cast<double>(samples));
    r.pass = r.tv <= r.threshold;
    return r;
}

// ---------------------------------------------------------------------------

std::string ScheduleEntry::name() const {
    std::string s = "M" + std::to_string(M) + "N";
    for (std::size_t i = 0; i < N.size(); ++i) s += (i ? "_" : "") + std::to_string(N[i]);
    return s;
}

ShapeSource annealed_kingman_source(const ScheduleEntry& entry, double gamma_h, double gamma_p,
                                    std::size_t samples, std::uint64_t seed, std::size_t jobs) {
    check_parameters(entry.M, entry.N, gamma_h, gamma_p);
    if (samples < 1) throw InvalidArgument("need at least one sample");
    struct State {
        std::vector<std::optional<EmpiricalTwoLevel>> trees;
        std::mutex mutex;
        std::map<std::vector<std::size_t>, ShapeDistribution> cache;
    };
    auto state = std::make_shared<State>();
    state->trees.resize(samples);
    parallel_for(samples, jobs, [&](std::size_t s) {
        state->trees[s] = history_to_tree(simulate(entry.M, entry.N, gamma_h, gamma_p, derive_seed(seed, s)));
    });

    return [state, entry, seed, samples, jobs](std::size_t m, const std::vector<std::size_t>& n) {
        {
            std::lock_guard lock(state->mutex);
            const auto it = state->cache.find(n);
            if (it != state->cache.end()) return it->second;
        }
        if (m < 1 || n.size() != m) throw InvalidArgument("need m >= 1 and one sample size per host");
        // Per-sample seeds depend on (seed, s, m, n) only.
        ShapeDistribution d = count_codes(m, n, samples, jobs, [&](std::size_t s) {
            const EmpiricalTwoLevel& tree = *state->trees[s];
            Rng rng(term_seed(derive_seed(seed, s), m, n));
            SampleMatrix u(m);
            for (std::size_t r = 0; r < m; ++r) {
                const std::size_t host = rng.below(entry.M);
                u[r].resize(n[r]);
                for (std::size_t k = 0; k < n[r]; ++k) u[r][k] = tree.leaves[host][rng.below(entry.N[host])];
            }
            return canonical_code(shape(tree.chi.tree, u));
        });
        std::lock_guard lock(state->mutex);
        return state->cache.emplace(n, std::move(d)).first->second;
    };
}

std::vector<ConvergenceRow> convergence_experiment(const std::vector<ScheduleEntry>& schedule,
                                                   const ConvergenceOptions& o) {
    if (schedule.size() < 2) throw InvalidArgument("schedule needs at least two entries");
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        check_parameters(schedule[k].M, schedule[k].N, o.gamma_h, o.gamma_p);
        if (k == 0) continue;
        const auto& a = schedule[k - 1];
        const auto& b = schedule[k];
        const auto min_a = *std::min_element(a.N.begin(), a.N.end());
        const auto min_b = *std::min_element(b.N.begin(), b.N.end());
        if (b.M < a.M || min_b < min_a) throw InvalidArgument("schedule must be nondecreasing in M and min N");
    }
    if (o.replicas < 1) throw InvalidArgument("need at least one replica");

    std::vector<ConvergenceRow> rows;
    for (std::size_t r = 0; r < o.replicas; ++r) {
        const std::uint64_t seed = derive_seed(o.seed, r);
        std::vector<ShapeSource> sources;
        for (const auto& e : schedule)
            sources.push_back(annealed_kingman_source(e, o.gamma_h, o.gamma_p, o.samples, seed, o.jobs));
        for (std::size_t k = 0; k + 1 < schedule.size(); ++k) {
            ConvergenceRow row;
            row.schedule = schedule[k].name() + "->" + schedule[k + 1].name();
            row.step = k;
            row.seed = seed;
            row.estimate = d_s_truncated(sources[k], sources[k + 1], o.m_max, o.budget);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<double> convergence_medians(const std::vector<ConvergenceRow>& rows, std::size_t pairs) {
    std::vector<std::vector<double>> by_step(pairs);
    for (const auto& r : rows)
        if (r.step < pairs) by_step[r.step].push_back(r.estimate.value);
    std::vector<double> out;
    for (auto& v : by_step) {
        if (v.empty()) {
            out.push_back(0.0);
            continue;
        }
        std::sort(v.begin(), v.end());
        const std::size_t k = v.size();
        out.push_back(k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]));
    }
    return out;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream os;
    os << "schedule,seed,estimate,tail_bound\n";
    for (const auto& r : rows) {
        os << r.schedule << ',' << r.seed << ',' << format_double(r.estimate.value) << ','
           << format_double(r.estimate.tail_bound) << '\n';
    }
    return os.str();
}

}  // namespace a2mt
