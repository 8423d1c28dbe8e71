#include "a2mt/generators.hpp"
#include "a2mt/shape_stats.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace a2mt;
using namespace a2mt::testing;

namespace {

ShapeDistribution dist(std::map<std::string, double> probs) {
    ShapeDistribution d;
    d.m = 1;
    d.n = {2};
    d.probs = std::move(probs);
    return d;
}

double mc_threshold(std::size_t support, std::size_t samples) {
    return 3.0 * std::sqrt(static_cast<double>(support) / static_cast<double>(samples));
}

std::vector<std::vector<std::size_t>> small_index_sets() {
    return {{1}, {2}, {3}, {1, 1}, {2, 1}, {1, 2}, {2, 2}, {1, 1, 1}};
}

}  // namespace

TEST(EnumerateTwoLevel, TwoPointAssignments) {
    Measure<Rational> mu;
    mu.mass = {{0, R(1, 2)}, {1, R(1, 2)}};
    std::map<std::multiset<Vertex>, double> by_multiset;
    double total = 0.0;
    enumerate_two_level(one_level(mu), {2}, kEnumerationGuard, [&](const SampleMatrix& u, double p) {
        by_multiset[{u[0].begin(), u[0].end()}] += p;
        total += p;
    });
    EXPECT_DOUBLE_EQ(total, 1.0);
    EXPECT_DOUBLE_EQ((by_multiset[{0, 0}]), 0.25);
    EXPECT_DOUBLE_EQ((by_multiset[{0, 1}]), 0.5);
    EXPECT_DOUBLE_EQ((by_multiset[{1, 1}]), 0.25);
    EXPECT_EQ(enumeration_size(one_level(mu), {2}), 4.0);
}

TEST(ShapeExact, TwoPointCodes) {
    Measure<Rational> mu;
    mu.mass = {{0, R(1, 2)}, {1, R(1, 2)}};
    const auto d = shape_distribution_exact(path(2), one_level(mu), 1, {2});
    // Both coincident assignments give the same single-vertex code.
    ASSERT_EQ(d.probs.size(), 2u);
    EXPECT_DOUBLE_EQ(d.noninjective_mass(), 0.5);
    EXPECT_DOUBLE_EQ(d.total(), 1.0);
}

TEST(ShapeExact, SingleSampleIsPointMass) {
    for (const auto& chi : small_a2m_fixtures()) {
        const auto d = shape_distribution_exact(chi.tree, chi.nu, 1, {1});
        ASSERT_EQ(d.probs.size(), 1u);
        EXPECT_NEAR(d.probs.begin()->second, 1.0, 1e-12);
    }
}

TEST(ShapeExact, SumsToOne) {
    for (const auto& chi : small_a2m_fixtures())
        for (const auto& n : small_index_sets()) {
            const auto d = shape_distribution_exact(chi.tree, chi.nu, n.size(), n);
            EXPECT_NEAR(d.total(), 1.0, 1e-12);
            for (const auto& [code, p] : d.probs) EXPECT_GT(p, 0.0);
        }
}

TEST(ShapeExact, GuardAndErrors) {
    const auto chi = small_a2m_fixtures()[0];
    EXPECT_THROW(shape_distribution_exact(chi.tree, chi.nu, 1, {8}, 100.0), EnumerationTooLarge);
    EXPECT_THROW(shape_distribution_exact(chi.tree, chi.nu, 2, {1}), InvalidArgument);
    EXPECT_THROW(shape_distribution_exact(chi.tree, one_level(dirac<Rational>(0)), 1, {1}), SampleOnBranchPoint);
}

TEST(ShapeExact, InvariantUnderHostAndWithinHostPermutation) {
    for (const auto& chi : small_a2m_fixtures())
        for (const auto& n : std::vector<std::vector<std::size_t>>{{2, 2}, {1, 1, 1}, {3}}) {
            const auto base = shape_distribution_exact(chi.tree, chi.nu, n.size(), n);
            // Oracle: shapes of the same assignments with labels permuted.
            for (int variant = 0; variant < 2; ++variant) {
                ShapeDistribution permuted = base;
                permuted.probs.clear();
                enumerate_two_level(chi.nu, n, kEnumerationGuard, [&](const SampleMatrix& u, double p) {
                    if (p <= 0) return;
                    SampleMatrix v = u;
                    if (variant == 0) std::reverse(v.begin(), v.end());
                    else
                        for (auto& row : v) std::reverse(row.begin(), row.end());
                    permuted.probs[canonical_code(shape(chi.tree, v))] += p;
                });
                EXPECT_LT(tv_distance(base, permuted), 1e-12);
            }
        }
}

TEST(ShapeMc, AgreesWithExactWithinBound) {
    const std::size_t samples = 20000;
    for (const auto& chi : small_a2m_fixtures())
        for (const auto& n : small_index_sets()) {
            const auto exact = shape_distribution_exact(chi.tree, chi.nu, n.size(), n);
            const auto mc = shape_distribution_mc(chi.tree, chi.nu, n.size(), n, samples, 99);
            EXPECT_LE(tv_distance(exact, mc), mc_threshold(exact.probs.size(), samples));
            EXPECT_NEAR(mc.total(), 1.0, 1e-12);
        }
}

TEST(ShapeMc, SingleSampleIsPointMass) {
    const auto chi = small_a2m_fixtures()[4];
    const auto d = shape_distribution_mc(chi.tree, chi.nu, 2, {2, 2}, 1, 5);
    ASSERT_EQ(d.probs.size(), 1u);
    EXPECT_EQ(d.probs.begin()->second, 1.0);
}

TEST(ShapeMc, DeterministicAndJobsInvariant) {
    const auto chi = small_a2m_fixtures()[2];
    const auto a = shape_distribution_mc(chi.tree, chi.nu, 2, {2, 3}, 5000, 42, 1);
    const auto b = shape_distribution_mc(chi.tree, chi.nu, 2, {2, 3}, 5000, 42, 4);
    const auto c = shape_distribution_mc(chi.tree, chi.nu, 2, {2, 3}, 5000, 42, 1);
    EXPECT_EQ(a.probs, b.probs);
    EXPECT_EQ(a.probs, c.probs);
    const auto d = shape_distribution_mc(chi.tree, chi.nu, 2, {2, 3}, 5000, 43, 1);
    EXPECT_NE(a.probs, d.probs);
}

TEST(ShapeMc, RedrawsRowsOnBranchPoints) {
    // Half the mass sits on the center; the MC rows are redrawn onto leaves.
    const auto t = star(3);
    Measure<Rational> mu;
    mu.mass = {{0, R(1, 2)}, {1, R(1, 4)}, {2, R(1, 4)}};
    const auto d = shape_distribution_mc(t, one_level(mu), 1, {2}, 2000, 1);
    EXPECT_NEAR(d.total(), 1.0, 1e-12);
    EXPECT_THROW(shape_distribution_mc(t, one_level(dirac<Rational>(0)), 1, {1}, 10, 1), SampleOnBranchPoint);
}

TEST(Tv, Examples) {
    const auto p = dist({{"a", 0.25}, {"b", 0.5}, {"c", 0.25}});
    const auto q = dist({{"a", 0.5}, {"b", 0.5}});
    EXPECT_DOUBLE_EQ(tv_distance(p, p), 0.0);
    EXPECT_DOUBLE_EQ(tv_distance(dist({{"a", 1.0}}), dist({{"b", 1.0}})), 1.0);
    EXPECT_DOUBLE_EQ(tv_distance(p, q), 0.25);
    EXPECT_DOUBLE_EQ(prokhorov_discrete(p, q), 0.25);
    ShapeDistribution other = q;
    other.n = {3};
    EXPECT_THROW(tv_distance(p, other), InvalidArgument);
}

TEST(Tv, MetricProperties) {
    Rng rng(4);
    const std::vector<std::string> keys{"a", "b", "c", "d", "e"};
    auto random_dist = [&] {
        std::map<std::string, double> probs;
        double total = 0.0;
        for (const auto& k : keys)
            if (rng.uniform() < 0.7) total += probs[k] = rng.uniform();
        if (probs.empty()) total = probs["a"] = 1.0;
        for (auto& [k, p] : probs) p /= total;
        return dist(probs);
    };
    for (int trial = 0; trial < 500; ++trial) {
        const auto p = random_dist(), q = random_dist(), r = random_dist();
        EXPECT_DOUBLE_EQ(tv_distance(p, q), tv_distance(q, p));
        EXPECT_LE(tv_distance(p, r), tv_distance(p, q) + tv_distance(q, r) + 1e-12);
        EXPECT_GE(tv_distance(p, q), 0.0);
        EXPECT_LE(tv_distance(p, q), 1.0 + 1e-12);
    }
}

TEST(Ds, IndexSetOrder) {
    const auto idx = ds_index_set(2, 4);
    const std::vector<std::vector<std::size_t>> expected{{1}, {2}, {3}, {4}, {1, 1}, {1, 2}, {2, 1}, {1, 3}};
    EXPECT_EQ(idx, expected);
}

TEST(Ds, WeightsTelescopeToOne) {
    // Every composition of every total: sum over m of 2^-m = 1 - 2^-m_max.
    double s = 0.0;
    for (const auto& n : ds_index_set(3, 100000)) {
        std::size_t size = 0;
        for (std::size_t k : n) size += k;
        s += std::ldexp(1.0, -static_cast<int>(n.size() + size));
    }
    EXPECT_NEAR(s, 1.0 - 0.125, 1e-3);
}

TEST(Ds, PseudoMetricProperties) {
    ShapeSourceOptions options;
    options.guard = 2e4;
    options.mc_samples = 2000;
    options.seed = 3;
    const auto fixtures = small_a2m_fixtures();
    std::vector<ShapeSource> sources;
    for (const auto& chi : fixtures) sources.push_back(make_shape_source(chi, options));
    for (std::size_t a = 0; a < sources.size(); ++a) {
        EXPECT_EQ(d_s_truncated(sources[a], sources[a], 2, 6).value, 0.0);
        for (std::size_t b = 0; b < sources.size(); ++b) {
            const auto ab = d_s_truncated(sources[a], sources[b], 2, 6);
            const auto ba = d_s_truncated(sources[b], sources[a], 2, 6);
            EXPECT_EQ(ab.value, ba.value);
            EXPECT_LE(ab.value + ab.tail_bound, 1.0 + 1e-12);
            EXPECT_EQ(ab.terms, 12u);
            for (std::size_t c = 0; c < sources.size(); ++c) {
                const auto bc = d_s_truncated(sources[b], sources[c], 2, 6);
                const auto ac = d_s_truncated(sources[a], sources[c], 2, 6);
                EXPECT_LE(ac.value, ab.value + bc.value + 1e-12);
            }
        }
    }
}

TEST(Ds, DistinguishesDifferentTrees) {
    const auto fixtures = small_a2m_fixtures();
    const ShapeSourceOptions options;
    const auto d = d_s_truncated(make_shape_source(fixtures[0], options), make_shape_source(fixtures[1], options), 2, 4);
    EXPECT_GT(d.value, 0.0);
}

TEST(Ds, SourceRejectsNonBinaryTrees) {
    EXPECT_THROW(make_shape_source(A2mTree{star(4), one_level(uniform_measure({1, 2, 3, 4}))}, {}), InvalidArgument);
}

TEST(DistancePolynomial, ConstantAndIndicator) {
    const auto chi = small_a2m_fixtures()[0];
    const MatrixFunction one = [](const auto&) { return 1.0; };
    EXPECT_NEAR(evaluate_distance_polynomial(chi, 2, {2, 1}, one, EvalMode::Exact), 1.0, 1e-12);
    const MatrixFunction all_zero = [](const std::vector<std::vector<double>>& d) {
        for (const auto& row : d)
            for (double x : row)
                if (x != 0.0) return 0.0;
        return 1.0;
    };
    const A2mTree dirac_chi{path(3), one_level(dirac<Rational>(0))};
    EXPECT_EQ(evaluate_distance_polynomial(dirac_chi, 1, {3}, all_zero, EvalMode::Exact), 1.0);
    EXPECT_EQ(evaluate_distance_polynomial(dirac_chi, 1, {3}, all_zero, EvalMode::MonteCarlo, 100, 1), 1.0);
}

TEST(DistancePolynomial, StarPairDistance) {
    const auto chi = small_a2m_fixtures()[0];
    const MatrixFunction pair = [](const std::vector<std::vector<double>>& d) { return d[0][1]; };
    // Distinct pair with probability 2/3, each at r_xi distance 13/27.
    EXPECT_NEAR(evaluate_distance_polynomial(chi, 1, {2}, pair, EvalMode::Exact), 26.0 / 81.0, 1e-12);
    const double mc = evaluate_distance_polynomial(chi, 1, {2}, pair, EvalMode::MonteCarlo, 40000, 8);
    EXPECT_NEAR(mc, 26.0 / 81.0, 0.01);
}

TEST(Bpd, DiracHasNoError) {
    const auto t = caterpillar_tree(5);
    const auto r = empirical_bpd_error(t, dirac<Rational>(leaves_of(t)[0]), 10, 20, 1);
    EXPECT_EQ(r.max(), 0.0);
    EXPECT_DOUBLE_EQ(r.bound, 96.0 * std::sqrt(0.2));
}

TEST(Bpd, BoundHoldsAndMedianDecays) {
    Rng rng(12);
    const auto t = random_binary_tree(20, rng);
    const auto mu = uniform_measure(leaves_of(t));
    const auto small = empirical_bpd_error(t, mu, 25, 200, 1);
    const auto large = empirical_bpd_error(t, mu, 100, 200, 2);
    EXPECT_EQ(small.errors.size(), 200u);
    EXPECT_LE(small.max(), small.bound);
    EXPECT_LE(large.max(), large.bound);
    EXPECT_LE(large.median(), small.median());
}

TEST(Bpd, ErrorIsSupOverIntervals) {
    // Oracle: recompute the sup by listing every interval explicitly.
    const auto t = four_point_tree();
    const auto mu = uniform_measure({0, 1, 2, 3});
    const auto xi = branch_point_distribution(t, mu);
    const auto r = empirical_bpd_error(t, mu, 1, 1, 5);
    Rng rng(5);
    const auto u = TwoLevelSampler(one_level(mu)).sample_row(3, rng);
    const Vertex c = t.branch_point(u[0], u[1], u[2]);
    double worst = 0.0;
    for (Vertex x : t.vertices())
        for (Vertex y : t.vertices()) {
            const auto iv = interval(t, x, y);
            const double lambda = std::binary_search(iv.begin(), iv.end(), c) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(to_double(interval_mass(t, xi, x, y)) - lambda));
        }
    EXPECT_NEAR(r.errors.at(0), worst, 1e-12);
}
