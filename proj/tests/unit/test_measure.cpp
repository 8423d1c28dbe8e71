#include "a2mt/generators.hpp"
#include "a2mt/measure.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace a2mt;
using namespace a2mt::testing;

namespace {

Measure<Rational> two_point(Vertex x, Vertex y) {
    Measure<Rational> mu;
    mu.mass = {{x, R(1, 2)}, {y, R(1, 2)}};
    return mu;
}

}  // namespace

TEST(Intensity, MixtureOfDiracs) {
    TwoLevelMeasure<Rational> nu{{{R(1, 2), dirac<Rational>(1)}, {R(1, 2), dirac<Rational>(2)}}};
    EXPECT_EQ(normalized(intensity(nu)), two_point(1, 2));
}

TEST(Intensity, DiracOfMixture) {
    EXPECT_EQ(normalized(intensity(one_level(two_point(1, 2)))), two_point(1, 2));
}

TEST(Intensity, OneLevelIsIdentity) {
    const auto mu = uniform_measure({0, 3, 5});
    EXPECT_EQ(intensity(one_level(mu)), mu);
}

TEST(Intensity, LinearInMixtures) {
    Rng rng(5);
    const auto t = star(4);
    for (int trial = 0; trial < 20; ++trial) {
        TwoLevelMeasure<Rational> a, b;
        a.components = {{R(1, 3), random_measure(t.vertices(), 5, rng)},
                        {R(2, 3), random_measure(t.vertices(), 5, rng)}};
        b.components = {{R(1), random_measure(t.vertices(), 5, rng)}};
        TwoLevelMeasure<Rational> mix;
        for (const auto& c : a.components) mix.components.push_back({R(1, 4) * c.weight, c.measure});
        for (const auto& c : b.components) mix.components.push_back({R(3, 4) * c.weight, c.measure});
        Measure<Rational> expected;
        for (const auto& [v, x] : intensity(a).mass) expected.mass[v] += R(1, 4) * x;
        for (const auto& [v, x] : intensity(b).mass) expected.mass[v] += R(3, 4) * x;
        EXPECT_EQ(normalized(intensity(mix)), normalized(expected));
    }
}

TEST(Validation, RejectsBadMeasures) {
    const auto t = path(3);
    Measure<Rational> neg;
    neg.mass = {{0, R(3, 2)}, {1, R(-1, 2)}};
    EXPECT_THROW(validate_measure(t, neg), InvalidArgument);
    Measure<Rational> short_mass;
    short_mass.mass = {{0, R(1, 2)}};
    EXPECT_THROW(validate_measure(t, short_mass), InvalidArgument);
    EXPECT_THROW(validate_measure(t, dirac<Rational>(9)), UnknownVertex);
    EXPECT_THROW(validate_two_level(t, TwoLevelMeasure<Rational>{}), InvalidArgument);
    TwoLevelMeasure<Rational> light{{{R(1, 2), dirac<Rational>(0)}}};
    EXPECT_THROW(validate_two_level(t, light), InvalidArgument);
}

TEST(BranchPointDistribution, StarUniformLeaves) {
    const auto t = star(3);
    const auto xi = branch_point_distribution(t, uniform_measure({1, 2, 3}));
    EXPECT_EQ(xi(0), R(6, 27));
    for (Vertex l : {1, 2, 3}) EXPECT_EQ(xi(l), R(7, 27));
}

TEST(BranchPointDistribution, DiracCollapses) {
    const auto t = caterpillar_tree(5);
    for (Vertex v : t.vertices()) EXPECT_EQ(branch_point_distribution(t, dirac<Rational>(v)), dirac<Rational>(v));
}

TEST(BranchPointDistribution, PathEndpoints) {
    const auto xi = branch_point_distribution(path(3), two_point(0, 2));
    EXPECT_EQ(xi(0), R(1, 2));
    EXPECT_EQ(xi(1), R(0));
    EXPECT_EQ(xi(2), R(1, 2));
}

TEST(BranchPointDistribution, ClosedFormMatchesBruteForce) {
    Rng rng(17);
    for (std::size_t n = 1; n <= 8; ++n)
        for (const auto& t : free_trees(n))
            for (int k = 0; k < 3; ++k) {
                const auto mu = random_measure(t.vertices(), 6, rng);
                const auto xi = branch_point_distribution(t, mu);
                EXPECT_EQ(normalized(xi), branch_point_distribution_bruteforce(t, mu));
                EXPECT_EQ(xi.total(), 1);
            }
}

TEST(BranchPointDistribution, FloatModeAgrees) {
    const auto t = caterpillar_tree(6);
    Rng rng(2);
    const auto mu = random_measure(t.vertices(), 9, rng);
    const auto exact = branch_point_distribution(t, mu);
    const auto approx = branch_point_distribution(t, to_float(mu));
    for (Vertex v : t.vertices()) EXPECT_NEAR(approx(v), to_double(exact(v)), 1e-12);
}

TEST(RXi, StarLeafDistance) {
    const auto t = star(3);
    const auto xi = branch_point_distribution(t, uniform_measure({1, 2, 3}));
    EXPECT_EQ(interval_mass(t, xi, 1, 2), R(20, 27));
    EXPECT_EQ(r_xi(t, xi, 1, 2), R(13, 27));
    EXPECT_EQ(r_xi(t, xi, 1, 1), R(0));
}

TEST(QuotientMetric, PathZeroMiddleMerges) {
    const auto t = path(3);
    const auto xi = branch_point_distribution(t, two_point(0, 2));
    const auto q = quotient_metric(t, xi);
    // b carries no xi mass but lies at distance 1/4 from each end, so it
    // keeps a class of its own.
    EXPECT_EQ(r_xi(t, xi, 0, 1), R(1, 4));
    EXPECT_EQ(r_xi(t, xi, 1, 2), R(1, 4));
    EXPECT_EQ(q.representatives.size(), 3u);
}

TEST(QuotientMetric, ZeroChainCollapses) {
    // Path 0-1-2-3 with mass at the ends: 1 and 2 are at distance 0.
    const auto t = path(4);
    const auto xi = branch_point_distribution(t, two_point(0, 3));
    EXPECT_EQ(r_xi(t, xi, 1, 2), R(0));
    const auto q = quotient_metric(t, xi);
    EXPECT_EQ(q.representatives.size(), 3u);
    EXPECT_EQ(q.class_of[1], q.class_of[2]);
}

TEST(QuotientMetric, DiracHasAtMostTwoClassesAtDistanceZero) {
    const auto t = path(3);
    const auto q = quotient_metric(t, dirac<Rational>(0));
    EXPECT_LE(q.representatives.size(), 2u);
    for (std::size_t a = 0; a < q.distances.n; ++a) EXPECT_EQ(q.distances(a, a), 0);
}

TEST(QuotientMetric, IsTreeMetricAndMediansAgree) {
    Rng rng(23);
    for (std::size_t n = 2; n <= 7; ++n)
        for (const auto& t : free_trees(n)) {
            const auto mu = random_measure(t.vertices(), 4, rng);
            const auto xi = branch_point_distribution(t, mu);
            const auto q = quotient_metric(t, xi);
            EXPECT_EQ(triangle_violations(q.distances), 0u);
            EXPECT_EQ(four_point_violations(q.distances), 0u);
            const std::size_t k = q.representatives.size();
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b) {
                    EXPECT_EQ(q.distances(a, b), r_xi(t, xi, q.representatives[a], q.representatives[b]));
                    if (a != b) EXPECT_GT(q.distances(a, b), 0);
                }
            const auto supp = xi.support();
            for (Vertex x : supp)
                for (Vertex y : supp)
                    for (Vertex z : supp) {
                        const Vertex c = t.branch_point(x, y, z);
                        const auto cls = [&](Vertex v) { return q.class_of[t.index_of(v)]; };
                        const std::size_t w = branch_point_from_metric(q.distances, cls(x), cls(y), cls(z));
                        EXPECT_EQ(w, cls(c));
                    }
        }
}

TEST(Sampling, DiracOfDirac) {
    const auto t = path(3);
    const auto u = sample_two_level(t, one_level(dirac<Rational>(2)), 2, {3, 1}, 9);
    ASSERT_EQ(u.size(), 2u);
    for (const auto& row : u)
        for (Vertex v : row) EXPECT_EQ(v, 2);
    EXPECT_EQ(u[0].size(), 3u);
    EXPECT_EQ(u[1].size(), 1u);
}

TEST(Sampling, MixtureRowsAreConstantAndBalanced) {
    const auto t = path(3);
    TwoLevelMeasure<Rational> nu{{{R(1, 2), dirac<Rational>(0)}, {R(1, 2), dirac<Rational>(2)}}};
    const std::size_t reps = 10000;
    std::size_t zeros = 0;
    Rng rng(101);
    const TwoLevelSampler sampler(nu);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto row = sampler.sample_row(4, rng);
        for (Vertex v : row) EXPECT_EQ(v, row.front());
        zeros += row.front() == 0;
    }
    const double freq = static_cast<double>(zeros) / reps;
    EXPECT_LE(std::abs(freq - 0.5), 3 * std::sqrt(0.25 / reps));
}

TEST(Sampling, DeterministicInSeed) {
    const auto chi = small_a2m_fixtures()[2];
    const auto a = sample_two_level(chi.tree, chi.nu, 3, {2, 4, 1}, 77);
    const auto b = sample_two_level(chi.tree, chi.nu, 3, {2, 4, 1}, 77);
    EXPECT_EQ(a, b);
    EXPECT_THROW(sample_two_level(chi.tree, chi.nu, 2, {1}, 0), InvalidArgument);
    EXPECT_THROW(sample_two_level(chi.tree, chi.nu, 1, {0}, 0), InvalidArgument);
}

TEST(Reduce, PrunesMassFreeLeavesAndChains) {
    // Path 0-1-2-3-4 with mass on 1 and 3: leaves 0 and 4 go, 2 is suppressed.
    const auto t = path(5);
    const A2mTree chi{t, one_level(two_point(1, 3))};
    const auto r = reduce_a2m(chi);
    EXPECT_EQ(r.tree.size(), 2u);
    EXPECT_TRUE(a2m_isomorphic(chi, A2mTree{path(2), one_level(two_point(0, 1))}));
}

TEST(Reduce, IsomorphismRespectsMassesAndComponents) {
    const auto fixtures = small_a2m_fixtures();
    for (std::size_t a = 0; a < fixtures.size(); ++a)
        for (std::size_t b = 0; b < fixtures.size(); ++b)
            EXPECT_EQ(a2m_isomorphic(fixtures[a], fixtures[b]), a == b) << a << " " << b;

    // Relabelled star with permuted components stays isomorphic.
    const auto& base = fixtures[1];
    const AlgebraicTree relabelled({10, 20, 30, 40}, {{10, 20}, {10, 30}, {10, 40}});
    Measure<Rational> a, b;
    a.mass = {{30, R(1, 2)}, {40, R(1, 2)}};
    b.mass = {{20, R(1)}};
    EXPECT_TRUE(a2m_isomorphic(base, A2mTree{relabelled, {{{R(2, 3), b}, {R(1, 3), a}}}}));
    EXPECT_FALSE(a2m_isomorphic(base, A2mTree{relabelled, {{{R(1, 3), b}, {R(2, 3), a}}}}));
}

TEST(AtomsOnLeaves, DetectsInteriorMass) {
    EXPECT_TRUE(atoms_on_leaves(star(3), one_level(uniform_measure({1, 2, 3}))));
    EXPECT_FALSE(atoms_on_leaves(star(3), one_level(dirac<Rational>(0))));
    EXPECT_FALSE(atoms_on_leaves(star(4), one_level(dirac<Rational>(1))));
}
