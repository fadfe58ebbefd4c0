#include "forwardcf/rational.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace forwardcf {

Rational exact_from_double(double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("cannot convert a non-finite value to a rational");
  }
  return Rational(v);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_fraction_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_over(const Rational& r, const BigInt& denominator) {
  const Rational scaled = r * denominator;
  if (boost::multiprecision::denominator(scaled) != 1) return to_fraction_string(r);
  return boost::multiprecision::numerator(scaled).str() + "/" + denominator.str();
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

std::string format_decimal(double v) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace forwardcf
