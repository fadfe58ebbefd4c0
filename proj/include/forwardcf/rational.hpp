#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace forwardcf {

/// Arbitrary-precision rational. Finite doubles convert exactly.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

Rational exact_from_double(double v);
double to_double(const Rational& r);

/// "num/den" in lowest terms, or "num" when the denominator is 1.
std::string to_fraction_string(const Rational& r);

/// Renders r over a fixed denominator ("56/36" for 14/9 over 36). Falls back
/// to lowest terms when r * denominator is not an integer.
std::string format_over(const Rational& r, const BigInt& denominator);

BigInt lcm(const BigInt& a, const BigInt& b);

/// Shortest decimal that round-trips, e.g. "2", "1.5555555555555556".
std::string format_decimal(double v);

}  // namespace forwardcf
