#include "a2mt/common.hpp"

#include <cstdio>
#include <cstdlib>

namespace a2mt {

namespace {

// Boost reads a leading zero as an octal prefix, so strip zeros first.
boost::multiprecision::cpp_int decimal_integer(const std::string& digits) {
    std::size_t start = 0;
    std::string sign;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
        sign = digits.substr(0, 1);
        start = 1;
    }
    if (start == digits.size() || digits.find_first_not_of("0123456789", start) != std::string::npos) {
        throw InvalidArgument("not a decimal integer");
    }
    const auto nonzero = digits.find_first_not_of('0', start);
    if (nonzero == std::string::npos) return 0;
    return boost::multiprecision::cpp_int(sign + digits.substr(nonzero));
}

}  // namespace

Rational parse_rational(const std::string& raw) {
    const auto first = raw.find_first_not_of(" \t\n");
    const auto last = raw.find_last_not_of(" \t\n");
    if (first == std::string::npos) {
        throw InvalidArgument("empty rational literal");
    }
    std::string text = raw.substr(first, last - first + 1);
    try {
        // Scientific notation: mantissa times a power of ten.
        const auto e = text.find_first_of("eE");
        long exponent = 0;
        if (e != std::string::npos) {
            std::size_t used = 0;
            exponent = std::stol(text.substr(e + 1), &used);
            if (used != text.size() - e - 1) {
                throw InvalidArgument("malformed exponent");
            }
            text = text.substr(0, e);
        }
        Rational value;
        const auto dot = text.find('.');
        if (dot == std::string::npos) {
            const auto slash = text.find('/');
            if (slash == std::string::npos) {
                value = Rational(decimal_integer(text));
            } else {
                const auto den = decimal_integer(text.substr(slash + 1));
                if (den == 0) throw InvalidArgument("zero denominator");
                value = Rational(decimal_integer(text.substr(0, slash)), den);
            }
        } else {
            // Decimal literal: 12.375 -> 12375/1000.
            const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            if (digits.empty() || digits == "-" || digits == "+") {
                throw InvalidArgument("malformed decimal");
            }
            Rational scale = 1;
            for (std::size_t i = dot + 1; i < text.size(); ++i) {
                scale *= 10;
            }
            value = Rational(decimal_integer(digits)) / scale;
        }
        Rational ten = 10;
        for (long k = 0; k < std::labs(exponent); ++k) {
            value = exponent > 0 ? Rational(value * ten) : Rational(value / ten);
        }
        return value;
    } catch (const std::exception&) {
        throw InvalidArgument("malformed rational literal '" + raw + "'");
    }
}

std::string format_rational(const Rational& r) {
    return r.str();
}

std::string format_double(double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) {
        throw InvalidArgument("Rng::below(0)");
    }
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

std::size_t Rng::pick(const std::vector<double>& cumulative) {
    if (cumulative.empty() || !(cumulative.back() > 0.0)) {
        throw InvalidArgument("cannot sample from an empty or zero-mass distribution");
    }
    const double u = uniform() * cumulative.back();
    std::size_t lo = 0, hi = cumulative.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (u < cumulative[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer over the pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> cumulative_weights(const std::vector<double>& weights) {
    std::vector<double> out;
    out.reserve(weights.size());
    double acc = 0.0;
    for (double w : weights) {
        if (w < 0.0) {
            throw InvalidArgument("negative sampling weight");
        }
        acc += w;
        out.push_back(acc);
    }
    return out;
}

}  // namespace a2mt
