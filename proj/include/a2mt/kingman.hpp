#pragma once

#include "a2mt/cladogram.hpp"
#include "a2mt/measure.hpp"
#include "a2mt/shape_stats.hpp"
#include "a2mt/tree.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace a2mt {

// Block ids: host blocks start as 0..M-1 (one per host) and the k-th host
// merger creates block M + k. Parasite blocks start as the singletons
// {(i, j)}, numbered offset(i) + j in lexicographic order, and the k-th
// parasite merger creates block S + k where S = N_1 + ... + N_M.

enum class Level { Host, Parasite };

struct MergerEvent {
    double time = 0.0;
    Level level = Level::Parasite;
    std::array<std::size_t, 2> blocks{};  // ascending
};

struct MergerHistory {
    std::size_t M = 0;
    std::vector<std::size_t> N;
    double gamma_h = 1.0;
    double gamma_p = 1.0;
    std::vector<MergerEvent> events;

    std::size_t total_parasites() const;
    /// Parasite block id of the one-based index (i, j).
    std::size_t leaf_block(std::size_t i, std::size_t j) const;
};

/// Exact Gillespie simulation of the nested Kingman coalescent on the index
/// set {(i, j) : 1 <= i <= M, 1 <= j <= N_i}, run until both levels are
/// fully coalesced. Nestedness is asserted after every event.
MergerHistory simulate(std::size_t M, const std::vector<std::size_t>& N, double gamma_h, double gamma_p,
                       std::uint64_t seed);

/// Replays a history and throws InvalidArgument when an event refers to a
/// dead block, merges parasites living in different host blocks, goes back
/// in time, or the history is not fully coalesced.
void validate_history(const MergerHistory& h);

/// The rooted a2m tree of a history. Vertices are the parasite block ids
/// plus one extra massless leaf `root` (id 2S - 1) attached below the final
/// block; every interior vertex is a parasite merger of degree 3.
struct EmpiricalTwoLevel {
    A2mTree chi;
    Vertex root = 0;
    /// leaves[i][j] is the vertex of the zero-based index (i, j).
    std::vector<std::vector<Vertex>> leaves;
};

EmpiricalTwoLevel history_to_tree(const MergerHistory& h);

/// Minimum map of the block tree: c_wedge(x, y) is the smallest block
/// containing both, with the root below every block.
MinimumTable history_minimum_table(const MergerHistory& h);

/// One-based index pairs.
using IndexSet = std::vector<std::pair<std::size_t, std::size_t>>;

/// {(i, j) : i <= m, j <= n_i}.
IndexSet grid(std::size_t m, const std::vector<std::size_t>& n);

/// Induced history on J, relabelled so that the hosts of J become 1..M' and
/// each host's parasites become 1..N'_i in increasing order.
MergerHistory restrict(const MergerHistory& h, const IndexSet& J);

/// Code of the rooted shape spanned by all leaves and the root.
std::string rooted_shape_code(const MergerHistory& h);

/// Law of rooted_shape_code over independent simulations (fixed seeded
/// chunks, so independent of `jobs`).
ShapeDistribution kingman_shape_distribution(std::size_t M, const std::vector<std::size_t>& N, double gamma_h,
                                             double gamma_p, std::size_t samples, std::uint64_t seed,
                                             std::size_t jobs = 1);

struct ConsistencyResult {
    ShapeDistribution restricted;
    ShapeDistribution direct;
    double tv = 0.0;
    std::size_t support = 0;
    double threshold = 0.0;
    bool pass = false;
};

/// Rooted shapes of restrict(simulate(M, N), grid(m, n)) against
/// simulate(m, n); passes when TV <= 3 sqrt(k / samples).
ConsistencyResult consistency_test(std::size_t M, const std::vector<std::size_t>& N, std::size_t m,
                                   const std::vector<std::size_t>& n, double gamma_h, double gamma_p,
                                   std::size_t samples, std::uint64_t seed, std::size_t jobs = 1);

// ---------------------------------------------------------------------------
// Convergence experiment
// ---------------------------------------------------------------------------

struct ScheduleEntry {
    std::size_t M = 1;
    std::vector<std::size_t> N;
    std::string name() const;
};

/// Annealed shape source of the random tree chi^{M,N}: sample s uses the
/// history simulated with derive_seed(seed, s) and two-level samples drawn
/// from nu^{M,N}. Shapes are unrooted.
ShapeSource annealed_kingman_source(const ScheduleEntry& entry, double gamma_h, double gamma_p,
                                    std::size_t samples, std::uint64_t seed, std::size_t jobs = 1);

struct ConvergenceOptions {
    double gamma_h = 1.0;
    double gamma_p = 1.0;
    std::size_t m_max = 2;
    std::size_t budget = 6;
    std::size_t samples = 500;
    std::size_t replicas = 1;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

struct ConvergenceRow {
    std::string schedule;  // "<from>-><to>"
    std::size_t step = 0;  // index of the first entry of the pair
    std::uint64_t seed = 0;
    DsEstimate estimate;
};

/// d_s between consecutive schedule entries for each replica seed
/// derive_seed(seed, r).
std::vector<ConvergenceRow> convergence_experiment(const std::vector<ScheduleEntry>& schedule,
                                                   const ConvergenceOptions& options);

/// Median estimate per consecutive pair, over replicas.
std::vector<double> convergence_medians(const std::vector<ConvergenceRow>& rows, std::size_t pairs);

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace a2mt
