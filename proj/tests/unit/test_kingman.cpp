#include "a2mt/kingman.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace a2mt;
using namespace a2mt::testing;

namespace {

std::size_t count_level(const MergerHistory& h, Level level) {
    std::size_t k = 0;
    for (const auto& e : h.events) k += e.level == level;
    return k;
}

/// Oracle for M = 1: walks every merger order of pure Kingman on n lineages,
/// each pair equally likely, and accumulates rooted codes.
void kingman_orders(MergerHistory& h, std::vector<std::size_t>& live, std::size_t next, double p,
                    std::map<std::string, double>& out) {
    if (live.size() == 1) {
        out[rooted_shape_code(h)] += p;
        return;
    }
    const double pairs = static_cast<double>(live.size() * (live.size() - 1) / 2);
    for (std::size_t a = 0; a < live.size(); ++a)
        for (std::size_t b = a + 1; b < live.size(); ++b) {
            const std::size_t x = live[a], y = live[b];
            h.events.push_back({static_cast<double>(h.events.size()), Level::Parasite, {std::min(x, y), std::max(x, y)}});
            std::vector<std::size_t> rest;
            for (std::size_t k = 0; k < live.size(); ++k)
                if (k != a && k != b) rest.push_back(live[k]);
            rest.push_back(next);
            kingman_orders(h, rest, next + 1, p / pairs, out);
            h.events.pop_back();
        }
}

}  // namespace

TEST(Simulate, PureKingmanEventCount) {
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto h = simulate(1, {n}, 1.0, 1.0, n);
        EXPECT_EQ(h.events.size(), n - 1);
        EXPECT_EQ(count_level(h, Level::Host), 0u);
    }
}

TEST(Simulate, EventCountsAndValidity) {
    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t M = 1 + rng.below(4);
        std::vector<std::size_t> N(M);
        std::size_t S = 0;
        for (auto& k : N) S += k = 1 + rng.below(4);
        const auto h = simulate(M, N, 0.5 + rng.uniform(), 0.5 + rng.uniform(), rng.next_u64());
        EXPECT_EQ(count_level(h, Level::Host), M - 1);
        EXPECT_EQ(count_level(h, Level::Parasite), S - 1);
        EXPECT_NO_THROW(validate_history(h));
        for (std::size_t k = 1; k < h.events.size(); ++k) EXPECT_GE(h.events[k].time, h.events[k - 1].time);
    }
}

TEST(Simulate, HostMergeTimeIsExponential) {
    const double gamma_h = 2.0;
    const std::size_t runs = 10000;
    double sum = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
        const auto h = simulate(2, {1, 1}, gamma_h, 1.0, derive_seed(3, r));
        ASSERT_EQ(h.events.size(), 2u);
        EXPECT_EQ(h.events[0].level, Level::Host);
        EXPECT_EQ(h.events[1].level, Level::Parasite);
        sum += h.events[0].time;
    }
    const double mean = sum / runs;
    EXPECT_LE(std::abs(mean - 1 / gamma_h), 3 * (1 / gamma_h) / std::sqrt(runs));
}

TEST(Simulate, DeterministicAndValidated) {
    const auto a = simulate(3, {2, 1, 3}, 1.0, 2.0, 77);
    const auto b = simulate(3, {2, 1, 3}, 1.0, 2.0, 77);
    ASSERT_EQ(a.events.size(), b.events.size());
    for (std::size_t k = 0; k < a.events.size(); ++k) {
        EXPECT_EQ(a.events[k].time, b.events[k].time);
        EXPECT_EQ(a.events[k].blocks, b.events[k].blocks);
    }
    EXPECT_THROW(simulate(0, {}, 1, 1, 0), InvalidArgument);
    EXPECT_THROW(simulate(1, {0}, 1, 1, 0), InvalidArgument);
    EXPECT_THROW(simulate(1, {2}, 0, 1, 0), InvalidArgument);
}

TEST(ValidateHistory, RejectsBrokenHistories) {
    auto h = simulate(2, {1, 1}, 1.0, 1.0, 4);
    auto cross = h;
    std::swap(cross.events[0], cross.events[1]);
    cross.events[0].time = 0.0;
    EXPECT_THROW(validate_history(cross), InvalidArgument);
    auto incomplete = h;
    incomplete.events.pop_back();
    EXPECT_THROW(validate_history(incomplete), InvalidArgument);
    auto backwards = simulate(1, {3}, 1.0, 1.0, 4);
    backwards.events[1].time = backwards.events[0].time - 1.0;
    EXPECT_THROW(validate_history(backwards), InvalidArgument);
}

TEST(HistoryToTree, CherryWithRoot) {
    const auto e = history_to_tree(simulate(1, {2}, 1.0, 1.0, 0));
    // Two sample leaves, the merger block and the root leaf.
    EXPECT_EQ(e.chi.tree.size(), 4u);
    EXPECT_EQ(e.root, 3);
    EXPECT_EQ(e.chi.tree.degree(2), 3u);
    ASSERT_EQ(e.chi.nu.components.size(), 1u);
    EXPECT_EQ(e.chi.nu.components[0].weight, R(1));
    EXPECT_EQ(e.chi.nu.components[0].measure(e.leaves[0][0]), R(1, 2));
    EXPECT_EQ(e.chi.nu.components[0].measure(e.leaves[0][1]), R(1, 2));
}

TEST(HistoryToTree, TwoHostsOneParasiteEach) {
    const auto e = history_to_tree(simulate(2, {1, 1}, 1.0, 1.0, 0));
    ASSERT_EQ(e.chi.nu.components.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(e.chi.nu.components[i].weight, R(1, 2));
        EXPECT_EQ(e.chi.nu.components[i].measure, dirac<Rational>(e.leaves[i][0]));
    }
}

TEST(HistoryToTree, StructureOverManyHistories) {
    Rng rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t M = 1 + rng.below(3);
        std::vector<std::size_t> N(M);
        std::size_t S = 0;
        for (auto& k : N) S += k = 1 + rng.below(4);
        const auto h = simulate(M, N, 1.0, 1.0, rng.next_u64());
        const auto e = history_to_tree(h);
        const auto stats = tree_stats(e.chi.tree);
        EXPECT_EQ(stats.leaves.size(), S + 1);
        EXPECT_EQ(e.chi.tree.size() - stats.leaves.size(), S - 1);
        EXPECT_TRUE(e.chi.tree.is_binary());
        EXPECT_TRUE(atoms_on_leaves(e.chi.tree, e.chi.nu));
        EXPECT_EQ(e.chi.tree.degree(e.root), 1u);
        EXPECT_EQ(intensity(e.chi.nu)(e.root), 0);
        if (trial < 50) {
            EXPECT_TRUE(validate_branch_point_map(e.chi.tree.vertices(), branch_point_table(e.chi.tree)).ok());
        }
        // Independent route: minimum map of the block tree, then unroot.
        const RootedTree rooted(history_minimum_table(h));
        EXPECT_EQ(rooted.root(), e.root);
        EXPECT_EQ(unroot(rooted).edges(), e.chi.tree.edges());
    }
}

TEST(Restrict, FullSetIsIdentity) {
    const auto h = simulate(3, {2, 2, 1}, 1.0, 1.0, 12);
    const auto r = restrict(h, grid(3, {2, 2, 1}));
    ASSERT_EQ(r.events.size(), h.events.size());
    for (std::size_t k = 0; k < h.events.size(); ++k) {
        EXPECT_EQ(r.events[k].blocks, h.events[k].blocks);
        EXPECT_EQ(r.events[k].level, h.events[k].level);
        EXPECT_EQ(r.events[k].time, h.events[k].time);
    }
}

TEST(Restrict, SingletonHasNoEvents) {
    const auto h = simulate(3, {2, 2, 1}, 1.0, 1.0, 12);
    const auto r = restrict(h, {{2, 2}});
    EXPECT_TRUE(r.events.empty());
    EXPECT_EQ(r.M, 1u);
    EXPECT_EQ(r.N, (std::vector<std::size_t>{1}));
}

TEST(Restrict, OneHostPairKeepsOneParasiteEvent) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto h = simulate(2, {2, 3}, 1.0, 1.0, seed);
        const auto r = restrict(h, {{1, 1}, {1, 2}});
        ASSERT_EQ(r.events.size(), 1u);
        EXPECT_EQ(r.events[0].level, Level::Parasite);
        EXPECT_NO_THROW(validate_history(r));
    }
}

TEST(Restrict, ResultIsValidHistory) {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto h = simulate(4, {3, 2, 3, 1}, 1.0, 1.0, rng.next_u64());
        IndexSet J;
        for (const auto& [i, j] : grid(4, {3, 2, 3, 1}))
            if (rng.uniform() < 0.5) J.emplace_back(i, j);
        if (J.empty()) J.emplace_back(3, 3);
        const auto r = restrict(h, J);
        EXPECT_NO_THROW(validate_history(r));
        EXPECT_EQ(r.total_parasites(), J.size());
    }
    EXPECT_THROW(restrict(simulate(1, {2}, 1, 1, 0), {{1, 3}}), InvalidArgument);
    EXPECT_THROW(restrict(simulate(1, {2}, 1, 1, 0), {}), InvalidArgument);
}

TEST(KingmanShapes, ThreeLeavesUniform) {
    const auto d = kingman_shape_distribution(1, {3}, 1.0, 1.0, 30000, 5);
    ASSERT_EQ(d.probs.size(), 3u);
    for (const auto& [code, p] : d.probs) EXPECT_NEAR(p, 1.0 / 3.0, 0.015) << code;
}

TEST(KingmanShapes, FourLeavesMatchMergerOrderOracle) {
    MergerHistory h;
    h.M = 1;
    h.N = {4};
    std::vector<std::size_t> live{0, 1, 2, 3};
    std::map<std::string, double> oracle;
    kingman_orders(h, live, 4, 1.0, oracle);
    // 15 labelled rooted topologies: 12 caterpillars at 1/18, 3 balanced at 1/9.
    EXPECT_EQ(oracle.size(), 15u);
    ShapeDistribution exact;
    exact.m = 1;
    exact.n = {4};
    exact.probs = oracle;
    const std::size_t samples = 40000;
    const auto mc = kingman_shape_distribution(1, {4}, 1.0, 1.0, samples, 6);
    EXPECT_LE(tv_distance(exact, mc), 3 * std::sqrt(15.0 / samples));
}

TEST(KingmanShapes, JobsInvariant) {
    const auto a = kingman_shape_distribution(2, {2, 2}, 1.0, 1.0, 3000, 8, 1);
    const auto b = kingman_shape_distribution(2, {2, 2}, 1.0, 1.0, 3000, 8, 3);
    EXPECT_EQ(a.probs, b.probs);
}

TEST(Consistency, TrivialRestrictionPasses) {
    const auto r = consistency_test(2, {2, 1}, 2, {2, 1}, 1.0, 1.0, 20000, 3);
    EXPECT_TRUE(r.pass) << r.tv << " > " << r.threshold;
}

TEST(Consistency, SubgridPasses) {
    const auto r = consistency_test(3, {2, 2, 2}, 2, {2, 1}, 1.0, 1.0, 20000, 4, 2);
    EXPECT_TRUE(r.pass) << r.tv << " > " << r.threshold;
    EXPECT_DOUBLE_EQ(r.threshold, 3 * std::sqrt(static_cast<double>(r.support) / 20000));
}

TEST(Convergence, IdenticalEntriesGiveZero) {
    ConvergenceOptions o;
    o.samples = 100;
    o.seed = 3;
    const ScheduleEntry e{2, {2, 2}};
    const auto rows = convergence_experiment({e, e}, o);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].estimate.value, 0.0);
    EXPECT_EQ(rows[0].schedule, "M2N2_2->M2N2_2");
}

TEST(Convergence, RejectsDecreasingSchedule) {
    EXPECT_THROW(convergence_experiment({{4, {4, 4, 4, 4}}, {2, {4, 4}}}, {}), InvalidArgument);
}

TEST(Convergence, MedianDecreasesAlongSchedule) {
    ConvergenceOptions o;
    o.replicas = 20;
    o.samples = 300;
    o.seed = 11;
    o.jobs = 4;
    const std::vector<ScheduleEntry> schedule{
        {4, std::vector<std::size_t>(4, 4)}, {8, std::vector<std::size_t>(8, 8)}, {16, std::vector<std::size_t>(16, 16)}};
    const auto rows = convergence_experiment(schedule, o);
    EXPECT_EQ(rows.size(), 40u);
    for (const auto& r : rows) EXPECT_LE(r.estimate.value + r.estimate.tail_bound, 1.0 + 1e-12);
    const auto med = convergence_medians(rows, 2);
    EXPECT_LT(med[1], med[0]);
    const auto csv = convergence_csv(rows);
    EXPECT_EQ(csv.rfind("schedule,seed,estimate,tail_bound\n", 0), 0u);
}
