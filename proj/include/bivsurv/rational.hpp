#pragma once

// Exact rational scalar used throughout the estimation path. Input times
// are parsed as exact decimals so tie detection never depends on float
// rounding; estimator arithmetic stays rational until the reporting
// boundary.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bivsurv {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct identifiability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Parses a plain decimal ("12", "0.51", ".02", "-3.5") into an exact
// rational. No exponent notation.
inline std::optional<Rat> try_parse_decimal(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
        negative = (s[pos] == '-');
        ++pos;
    }
    std::string int_digits, frac_digits;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') int_digits += s[pos++];
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') frac_digits += s[pos++];
    }
    if (pos != s.size()) return std::nullopt;
    if (int_digits.empty() && frac_digits.empty()) return std::nullopt;

    BigInt numer = int_digits.empty() ? BigInt(0) : BigInt(int_digits);
    BigInt denom = 1;
    for (char c : frac_digits) {
        numer = numer * 10 + (c - '0');
        denom *= 10;
    }
    if (negative) numer = -numer;
    return Rat(numer, denom);
}

inline Rat parse_decimal(std::string_view s) {
    auto r = try_parse_decimal(s);
    if (!r) throw parse_error("malformed number: '" + std::string(s) + "'");
    return *r;
}

// Accepts either a decimal or an exact fraction "p/q".
inline Rat parse_number(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return parse_decimal(s);
    auto num = try_parse_decimal(s.substr(0, slash));
    auto den = try_parse_decimal(s.substr(slash + 1));
    if (!num || !den || *den == 0) throw parse_error("malformed number: '" + std::string(s) + "'");
    return *num / *den;
}

// Exact string form: a terminating decimal when the reduced denominator is
// 2^a 5^b, otherwise "p/q". Round-trips through parse_number.
inline std::string to_string_exact(const Rat& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    BigInt rest = den;
    unsigned twos = 0, fives = 0;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }
    if (rest != 1) {
        std::ostringstream os;
        os << num << '/' << den;
        return os.str();
    }
    unsigned digits = std::max(twos, fives);
    BigInt scaled = num;
    for (unsigned k = twos; k < digits; ++k) scaled *= 2;
    for (unsigned k = fives; k < digits; ++k) scaled *= 5;
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string s = scaled.str();
    if (digits == 0) return neg ? "-" + s : s;
    if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return neg ? "-" + s : s;
}

}  // namespace bivsurv
