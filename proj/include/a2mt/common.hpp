#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace a2mt {

/// Opaque vertex identifier. Equality of ids says nothing about isomorphism.
using Vertex = std::int64_t;

/// Exact rational scalar, always kept in canonical (reduced) form.
using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class UnknownVertex : public Error {
public:
    explicit UnknownVertex(Vertex v)
        : Error("unknown vertex id " + std::to_string(v)), vertex(v) {}
    Vertex vertex;
};

class NoBranchPoint : public Error {
public:
    using Error::Error;
};

class SampleOnBranchPoint : public Error {
public:
    explicit SampleOnBranchPoint(Vertex v)
        : Error("sample lands on branch point " + std::to_string(v)), vertex(v) {}
    Vertex vertex;
};

class EnumerationTooLarge : public Error {
public:
    using Error::Error;
};

class DegenerateArc : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double d) { return d; }

/// Parses "p/q", "p" or a decimal literal ("0.25") into an exact rational.
Rational parse_rational(const std::string& text);

/// "p/q", or "p" when the denominator is 1.
std::string format_rational(const Rational& r);

/// Shortest round-trip decimal with 17 significant digits.
std::string format_double(double d);

/// Exact equality for rationals, relative tolerance for doubles.
inline bool nearly_equal(const Rational& a, const Rational& b) { return a == b; }
inline bool nearly_equal(double a, double b, double tol = 1e-9) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

template <class T>
T scalar_from_rational(const Rational& r) {
    if constexpr (std::is_same_v<T, Rational>) {
        return r;
    } else {
        return to_double(r);
    }
}

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

/// Seedable PRNG with platform-independent output.
///
/// The engine is mt19937_64, whose output sequence is fixed by the standard.
/// The distributions are implemented here because the standard library ones
/// are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer on [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Exponential holding time with the given rate.
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    /// Index drawn proportionally to nonnegative weights (cumulative sums).
    std::size_t pick(const std::vector<double>& cumulative);

private:
    std::mt19937_64 engine_;
};

/// Derives an independent seed for replica `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Prefix sums used by Rng::pick.
std::vector<double> cumulative_weights(const std::vector<double>& weights);

}  // namespace a2mt
