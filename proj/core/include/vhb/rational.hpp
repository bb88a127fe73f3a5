#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace vhb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact planar point in table units.
struct Point {
    Rational x;
    Rational y;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Floating-point planar vector, used for positions along the flow.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct ParsedRational {
    Rational value;
    bool decimal = false;  ///< literal used decimal/float notation
};

/// Accepts "n", "n/d" or a decimal literal such as "1.41421356" or "2.5e-3".
/// Decimal literals are converted exactly (no binary rounding).
ParsedRational parse_rational_literal(std::string_view text);
Rational parse_rational(std::string_view text);

/// Always "num/den", den > 0.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact rational value of the shortest round-trip decimal form of `v`.
Rational rational_from_double(double v);

BigInt lcm(const BigInt& a, const BigInt& b);

Rational floor_rational(const Rational& r);

}  // namespace vhb
