#include "a2mt/shape_stats.hpp"

#include "a2mt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

namespace a2mt {

double ShapeDistribution::total() const {
    double s = 0.0;
    for (const auto& [code, p] : probs) s += p;
    return s;
}

double ShapeDistribution::noninjective_mass() const {
    double s = 0.0;
    for (const auto& [code, p] : probs)
        if (code_has_multilabel(code)) s += p;
    return s;
}

std::string to_string(ShapeDistribution::Mode mode) {
    return mode == ShapeDistribution::Mode::Exact ? "exact" : "mc";
}

namespace {

void check_shape_args(std::size_t m, const std::vector<std::size_t>& n) {
    if (m < 1 || n.size() != m) throw InvalidArgument("need m >= 1 and one sample size per host");
    for (std::size_t k : n)
        if (k < 1) throw InvalidArgument("sample sizes must be >= 1");
}

struct SupportTable {
    std::vector<double> weight;
    std::vector<std::vector<Vertex>> support;
    std::vector<std::vector<double>> mass;
};

SupportTable support_table(const TwoLevelMeasure<Rational>& nu) {
    SupportTable s;
    for (const auto& c : nu.components) {
        if (c.weight == 0) continue;
        s.weight.push_back(to_double(c.weight));
        s.support.emplace_back();
        s.mass.emplace_back();
        for (const auto& [v, m] : c.measure.mass) {
            if (m > 0) {
                s.support.back().push_back(v);
                s.mass.back().push_back(to_double(m));
            }
        }
    }
    return s;
}

}  // namespace

double enumeration_size(const TwoLevelMeasure<Rational>& nu, const std::vector<std::size_t>& n) {
    const SupportTable s = support_table(nu);
    double total = 1.0;
    for (std::size_t k : n) {
        double host = 0.0;
        for (const auto& supp : s.support) host += std::pow(static_cast<double>(supp.size()), static_cast<double>(k));
        total *= host;
    }
    return total;
}

void enumerate_two_level(const TwoLevelMeasure<Rational>& nu, const std::vector<std::size_t>& n,
                         double guard,
                         const std::function<void(const SampleMatrix&, double)>& visit) {
    const double size = enumeration_size(nu, n);
    if (size > guard) {
        throw EnumerationTooLarge("exact enumeration needs " + format_double(size) +
                                  " terms, above the guard of " + format_double(guard));
    }
    const SupportTable s = support_table(nu);
    SampleMatrix u(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) u[i].resize(n[i]);

    // Depth-first over hosts; inside a host an odometer over supp^{n_i}.
    std::function<void(std::size_t, double)> host = [&](std::size_t i, double prob) {
        if (i == n.size()) {
            visit(u, prob);
            return;
        }
        for (std::size_t c = 0; c < s.weight.size(); ++c) {
            const auto& supp = s.support[c];
            const auto& mass = s.mass[c];
            std::vector<std::size_t> digit(n[i], 0);
            while (true) {
                double p = prob * s.weight[c];
                for (std::size_t j = 0; j < n[i]; ++j) {
                    u[i][j] = supp[digit[j]];
                    p *= mass[digit[j]];
                }
                host(i + 1, p);
                std::size_t j = 0;
                while (j < n[i] && ++digit[j] == supp.size()) digit[j++] = 0;
                if (j == n[i]) break;
            }
        }
    };
    host(0, 1.0);
}

ShapeDistribution shape_distribution_exact(const AlgebraicTree& t, const TwoLevelMeasure<Rational>& nu,
                                           std::size_t m, const std::vector<std::size_t>& n,
                                           double guard) {
    check_shape_args(m, n);
    validate_two_level(t, nu);
    ShapeDistribution d;
    d.m = m;
    d.n = n;
    d.mode = ShapeDistribution::Mode::Exact;
    enumerate_two_level(nu, n, guard, [&](const SampleMatrix& u, double p) {
        if (p > 0) d.probs[canonical_code(shape(t, u))] += p;
    });
    return d;
}

ShapeDistribution shape_distribution_mc(const AlgebraicTree& t, const TwoLevelMeasure<Rational>& nu,
                                        std::size_t m, const std::vector<std::size_t>& n,
                                        std::size_t samples, std::uint64_t seed, std::size_t jobs) {
    check_shape_args(m, n);
    if (samples < 1) throw InvalidArgument("need at least one Monte Carlo sample");
    validate_two_level(t, nu);
    const TwoLevelSampler sampler(nu);

    constexpr std::size_t kMaxChunks = 32;
    constexpr std::size_t kMaxRedraws = 10000;
    const std::size_t chunks = std::min(samples, kMaxChunks);
    std::vector<std::map<std::string, std::size_t>> counts(chunks);

    parallel_for(chunks, jobs, [&](std::size_t c) {
        Rng rng(derive_seed(seed, c));
        SampleMatrix u(m);
        for (std::size_t s = 0; s < chunk_size(samples, chunks, c); ++s) {
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t attempt = 0;; ++attempt) {
                    u[i] = sampler.sample_row(n[i], rng);
                    const auto bad = std::find_if(u[i].begin(), u[i].end(),
                                                  [&](Vertex v) { return t.degree(v) >= 3; });
                    if (bad == u[i].end()) break;
                    if (attempt == kMaxRedraws) throw SampleOnBranchPoint(*bad);
                }
            }
            ++counts[c][canonical_code(shape(t, u))];
        }
    });

    std::map<std::string, std::size_t> merged;
    for (const auto& part : counts)
        for (const auto& [code, k] : part) merged[code] += k;
    ShapeDistribution d;
    d.m = m;
    d.n = n;
    d.mode = ShapeDistribution::Mode::MonteCarlo;
    d.samples = samples;
    for (const auto& [code, k] : merged) d.probs[code] = static_cast<double>(k) / static_cast<double>(samples);
    return d;
}

double tv_distance(const ShapeDistribution& p, const ShapeDistribution& q) {
    if (p.m != q.m || p.n != q.n) throw InvalidArgument("tv_distance needs matching (m, n)");
    double s = 0.0;
    auto ip = p.probs.begin();
    auto iq = q.probs.begin();
    // Merge walk over the two sorted key sets.
    while (ip != p.probs.end() || iq != q.probs.end()) {
        if (iq == q.probs.end() || (ip != p.probs.end() && ip->first < iq->first)) {
            s += std::abs(ip->second);
            ++ip;
        } else if (ip == p.probs.end() || iq->first < ip->first) {
            s += std::abs(iq->second);
            ++iq;
        } else {
            s += std::abs(ip->second - iq->second);
            ++ip;
            ++iq;
        }
    }
    return s / 2.0;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<std::size_t>> ds_index_set(std::size_t m_max, std::size_t per_m_budget) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t m = 1; m <= m_max; ++m) {
        std::size_t taken = 0;
        std::vector<std::size_t> cur;
        // Compositions of `total` into m positive parts, lexicographic.
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t left, std::size_t parts) {
            if (taken == per_m_budget) return;
            if (parts == 1) {
                cur.push_back(left);
                out.push_back(cur);
                ++taken;
                cur.pop_back();
                return;
            }
            for (std::size_t first = 1; first + (parts - 1) <= left && taken < per_m_budget; ++first) {
                cur.push_back(first);
                rec(left - first, parts - 1);
                cur.pop_back();
            }
        };
        for (std::size_t total = m; taken < per_m_budget; ++total) rec(total, m);
    }
    return out;
}

DsEstimate d_s_truncated(const ShapeSource& a, const ShapeSource& b, std::size_t m_max,
                         std::size_t per_m_budget) {
    DsEstimate est;
    double included = 0.0;
    for (const auto& n : ds_index_set(m_max, per_m_budget)) {
        std::size_t size = 0;
        for (std::size_t k : n) size += k;
        const double weight = std::ldexp(1.0, -static_cast<int>(n.size() + size));
        est.value += weight * prokhorov_discrete(a(n.size(), n), b(n.size(), n));
        included += weight;
        ++est.terms;
    }
    est.tail_bound = std::max(0.0, 1.0 - included);
    return est;
}

std::uint64_t term_seed(std::uint64_t seed, std::size_t m, const std::vector<std::size_t>& n) {
    std::uint64_t s = derive_seed(seed, m);
    for (std::size_t k : n) s = derive_seed(s, k);
    return s;
}

ShapeSource make_shape_source(const A2mTree& chi, const ShapeSourceOptions& options) {
    if (!chi.tree.is_binary()) throw InvalidArgument("shape sources need binary a2m trees");
    validate_two_level(chi.tree, chi.nu);
    struct State {
        State(const A2mTree& c, const ShapeSourceOptions& o) : chi(c), options(o) {}
        A2mTree chi;
        ShapeSourceOptions options;
        std::mutex mutex;
        std::map<std::vector<std::size_t>, ShapeDistribution> cache;
    };
    auto state = std::make_shared<State>(chi, options);
    return [state](std::size_t m, const std::vector<std::size_t>& n) {
        {
            std::lock_guard lock(state->mutex);
            const auto it = state->cache.find(n);
            if (it != state->cache.end()) return it->second;
        }
        const auto& o = state->options;
        ShapeDistribution d =
            (o.prefer_exact && enumeration_size(state->chi.nu, n) <= o.guard)
                ? shape_distribution_exact(state->chi.tree, state->chi.nu, m, n, o.guard)
                : shape_distribution_mc(state->chi.tree, state->chi.nu, m, n, o.mc_samples,
                                        term_seed(o.seed, m, n), o.jobs);
        std::lock_guard lock(state->mutex);
        return state->cache.emplace(n, std::move(d)).first->second;
    };
}

// ---------------------------------------------------------------------------

double evaluate_distance_polynomial(const A2mTree& chi, std::size_t m,
                                    const std::vector<std::size_t>& n, const MatrixFunction& phi,
                                    EvalMode mode, std::size_t samples, std::uint64_t seed,
                                    double guard) {
    check_shape_args(m, n);
    validate_two_level(chi.tree, chi.nu);
    const Measure<double> xi = to_float(branch_point_distribution(chi.tree, intensity(chi.nu)));

    std::size_t size = 0;
    for (std::size_t k : n) size += k;
    std::map<std::pair<Vertex, Vertex>, double> cache;
    auto distance = [&](Vertex x, Vertex y) {
        if (x == y) return 0.0;
        const auto key = std::minmax(x, y);
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        return cache[key] = r_xi(chi.tree, xi, x, y);
    };
    std::vector<std::vector<double>> matrix(size, std::vector<double>(size, 0.0));
    std::vector<Vertex> flat(size);
    auto apply = [&](const SampleMatrix& u) {
        std::size_t k = 0;
        for (const auto& row : u)
            for (Vertex v : row) flat[k++] = v;
        for (std::size_t a = 0; a < size; ++a)
            for (std::size_t b = 0; b < size; ++b) matrix[a][b] = distance(flat[a], flat[b]);
        return phi(matrix);
    };

    if (mode == EvalMode::Exact) {
        double acc = 0.0;
        enumerate_two_level(chi.nu, n, guard, [&](const SampleMatrix& u, double p) {
            if (p > 0) acc += p * apply(u);
        });
        return acc;
    }
    if (samples < 1) throw InvalidArgument("need at least one Monte Carlo sample");
    const TwoLevelSampler sampler(chi.nu);
    Rng rng(seed);
    double acc = 0.0;
    for (std::size_t s = 0; s < samples; ++s) acc += apply(sampler.sample(n, rng));
    return acc / static_cast<double>(samples);
}

// ---------------------------------------------------------------------------

double BpdRateResult::median() const {
    if (errors.empty()) return 0.0;
    std::vector<double> e = errors;
    std::sort(e.begin(), e.end());
    const std::size_t k = e.size();
    return k % 2 ? e[k / 2] : 0.5 * (e[k / 2 - 1] + e[k / 2]);
}

double BpdRateResult::max() const {
    return errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end());
}

BpdRateResult empirical_bpd_error(const AlgebraicTree& t, const Measure<Rational>& mu, std::size_t p,
                                  std::size_t trials, std::uint64_t seed) {
    if (p < 1) throw InvalidArgument("p must be >= 1");
    const Measure<Rational> xi_exact = branch_point_distribution(t, mu);
    const std::size_t n = t.size();
    std::vector<double> xi(n, 0.0);
    for (const auto& [v, m] : xi_exact.mass) xi[t.index_of(v)] = to_double(m);

    const TwoLevelSampler sampler(one_level(mu));
    BpdRateResult result;
    result.p = p;
    result.bound = 96.0 * std::sqrt(2.0 / static_cast<double>(p));

    Rng rng(seed);
    std::vector<double> diff(n), acc(n);
    std::vector<std::size_t> hits(n);
    std::vector<std::size_t> queue;
    std::vector<bool> seen(n);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const auto u = sampler.sample_row(3 * p, rng);
        std::fill(hits.begin(), hits.end(), 0);
        for (std::size_t l = 0; l < p; ++l) {
            ++hits[t.branch_point_index(t.index_of(u[3 * l]), t.index_of(u[3 * l + 1]), t.index_of(u[3 * l + 2]))];
        }
        for (std::size_t v = 0; v < n; ++v) diff[v] = xi[v] - static_cast<double>(hits[v]) / static_cast<double>(p);
        // sup over all intervals: path sums of (xi - lambda) from every start.
        double worst = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            std::fill(seen.begin(), seen.end(), false);
            queue.assign(1, s);
            seen[s] = true;
            acc[s] = diff[s];
            worst = std::max(worst, std::abs(acc[s]));
            for (std::size_t h = 0; h < queue.size(); ++h)
                for (std::size_t w : t.adjacent(queue[h]))
                    if (!seen[w]) {
                        seen[w] = true;
                        acc[w] = acc[queue[h]] + diff[w];
                        worst = std::max(worst, std::abs(acc[w]));
                        queue.push_back(w);
                    }
        }
        result.errors.push_back(worst);
    }
    return result;
}

}  // namespace a2mt
