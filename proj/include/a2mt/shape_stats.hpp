#pragma once

#include "a2mt/cladogram.hpp"
#include "a2mt/measure.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace a2mt {

/// Law of the labelled shape of an (m, n) two-level sample, keyed by
/// canonical cladogram code.
struct ShapeDistribution {
    enum class Mode { Exact, MonteCarlo };

    std::size_t m = 0;
    std::vector<std::size_t> n;
    Mode mode = Mode::Exact;
    std::size_t samples = 0;  // Monte Carlo sample count, 0 for exact
    std::map<std::string, double> probs;

    double total() const;
    /// Mass on codes with a multi-labelled leaf (outside the injective space).
    double noninjective_mass() const;
};

std::string to_string(ShapeDistribution::Mode mode);

/// Default bound on the number of enumerated sample assignments.
inline constexpr double kEnumerationGuard = 1e7;

/// Number of sample assignments an exact enumeration of (m, n) visits:
/// prod_i sum_c |supp mu_c|^{n_i}.
double enumeration_size(const TwoLevelMeasure<Rational>& nu, const std::vector<std::size_t>& n);

/// Visits every two-level sample assignment with its probability.
/// Throws EnumerationTooLarge when enumeration_size exceeds `guard`.
void enumerate_two_level(const TwoLevelMeasure<Rational>& nu, const std::vector<std::size_t>& n,
                         double guard,
                         const std::function<void(const SampleMatrix&, double)>& visit);

/// Exact shape distribution by enumerating mixture components and sample
/// assignments. Samples on branch points raise SampleOnBranchPoint.
ShapeDistribution shape_distribution_exact(const AlgebraicTree& t, const TwoLevelMeasure<Rational>& nu,
                                           std::size_t m, const std::vector<std::size_t>& n,
                                           double guard = kEnumerationGuard);

/// Empirical shape distribution over N two-level samples. Rows hitting a
/// branch point are redrawn. The work is split into fixed seeded chunks, so
/// the result does not depend on `jobs`.
ShapeDistribution shape_distribution_mc(const AlgebraicTree& t, const TwoLevelMeasure<Rational>& nu,
                                        std::size_t m, const std::vector<std::size_t>& n,
                                        std::size_t samples, std::uint64_t seed,
                                        std::size_t jobs = 1);

/// Total variation 1/2 sum |P - Q|. Throws InvalidArgument for different (m, n).
double tv_distance(const ShapeDistribution& p, const ShapeDistribution& q);

/// Prokhorov distance under the discrete metric on codes: min(TV, 1).
inline double prokhorov_discrete(const ShapeDistribution& p, const ShapeDistribution& q) {
    return std::min(tv_distance(p, q), 1.0);
}

// ---------------------------------------------------------------------------
// d_s
// ---------------------------------------------------------------------------

/// Produces the (m, n) shape distribution of one a2m tree (or of a random
/// one, annealed).
using ShapeSource = std::function<ShapeDistribution(std::size_t, const std::vector<std::size_t>&)>;

/// The first `per_m_budget` vectors of N^m ordered by |n| then
/// lexicographically, for m = 1..m_max.
std::vector<std::vector<std::size_t>> ds_index_set(std::size_t m_max, std::size_t per_m_budget);

struct DsEstimate {
    double value = 0.0;
    /// Weight of all omitted terms; the untruncated sum lies in
    /// [value, value + tail_bound].
    double tail_bound = 1.0;
    std::size_t terms = 0;
};

/// sum over the index set of 2^-m 2^-|n| min(d_Pr(S_{m,n}(a), S_{m,n}(b)), 1).
DsEstimate d_s_truncated(const ShapeSource& a, const ShapeSource& b, std::size_t m_max,
                         std::size_t per_m_budget);

struct ShapeSourceOptions {
    /// Use exact enumeration whenever it fits under `guard`.
    bool prefer_exact = true;
    double guard = 2e5;
    std::size_t mc_samples = 10000;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

/// Memoizing source for a fixed a2m tree. Monte Carlo terms are seeded from
/// (seed, m, n) only, so the same tree always yields the same distribution.
/// Throws InvalidArgument when the tree is not binary.
ShapeSource make_shape_source(const A2mTree& chi, const ShapeSourceOptions& options);

/// Seed for the (m, n) term of a run seeded with `seed`.
std::uint64_t term_seed(std::uint64_t seed, std::size_t m, const std::vector<std::size_t>& n);

// ---------------------------------------------------------------------------
// Distance polynomials
// ---------------------------------------------------------------------------

/// phi receives the |n| x |n| matrix of r_xi distances between the samples,
/// rows ordered (1,1), (1,2), ..., (m, n_m).
using MatrixFunction = std::function<double(const std::vector<std::vector<double>>&)>;

enum class EvalMode { Exact, MonteCarlo };

/// E[phi((r_xi(u_a, u_b))_{a,b})] under two-level sampling, where xi is the
/// branch point distribution of the intensity measure.
double evaluate_distance_polynomial(const A2mTree& chi, std::size_t m,
                                    const std::vector<std::size_t>& n, const MatrixFunction& phi,
                                    EvalMode mode, std::size_t samples = 10000,
                                    std::uint64_t seed = 0, double guard = kEnumerationGuard);

// ---------------------------------------------------------------------------
// Empirical branch point distribution
// ---------------------------------------------------------------------------

struct BpdRateResult {
    std::size_t p = 0;
    std::vector<double> errors;  // one sup-over-intervals error per trial
    double bound = 0.0;          // 96 sqrt(2 / p)
    double median() const;
    double max() const;
};

/// For each trial draws 3p points iid mu, forms the empirical branch point
/// measure (1/p) sum_l delta_{c(u_{3l+1}, u_{3l+2}, u_{3l+3})} and reports
/// sup over intervals [x, y] of |xi([x, y]) - lambda([x, y])|.
BpdRateResult empirical_bpd_error(const AlgebraicTree& t, const Measure<Rational>& mu, std::size_t p,
                                  std::size_t trials, std::uint64_t seed);

}  // namespace a2mt
