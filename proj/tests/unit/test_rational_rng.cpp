#include <doctest.h>

#include "forwardcf/rational.hpp"
#include "forwardcf/rng.hpp"

#include <cmath>
#include <set>

using namespace forwardcf;

TEST_CASE("fraction formatting") {
  CHECK(to_fraction_string(Rational(56, 36)) == "14/9");
  CHECK(to_fraction_string(Rational(2)) == "2");
  CHECK(format_over(Rational(14, 9), 36) == "56/36");
  CHECK(format_over(Rational(2), 16) == "32/16");
  CHECK(format_over(Rational(1, 7), 36) == "1/7");
  CHECK(lcm(4, 6) == 12);
  CHECK(exact_from_double(0.5) == Rational(1, 2));
  CHECK(exact_from_double(0.1) != Rational(1, 10));
  CHECK(to_double(exact_from_double(0.1)) == 0.1);
  CHECK_THROWS(exact_from_double(NAN));
}

TEST_CASE("format_decimal round-trips") {
  CHECK(format_decimal(2.0) == "2");
  CHECK(format_decimal(0.5) == "0.5");
  CHECK(format_decimal(0.1) == "0.1");
  for (double v : {1.0 / 3.0, 14.0 / 9.0, -2.5e-7, 1e300, 123456789.123}) {
    CHECK(std::stod(format_decimal(v)) == v);
  }
}

TEST_CASE("streams are keyed and reproducible") {
  Stream a(1, 0, "U_Y"), b(1, 0, "U_Y"), c(1, 1, "U_Y"), d(1, 0, "U_Z"), e(2, 0, "U_Y");
  const auto first = a();
  CHECK(first == b());
  std::set<std::uint64_t> seen{first, c(), d(), e()};
  CHECK(seen.size() == 4);
  CHECK(hash_name("U_Y") != hash_name("U_Z"));
}

TEST_CASE("uniform and normal draws") {
  Stream s(42, 0, "test");
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u > 0);
    REQUIRE(u < 1);
  }
  for (int i = 0; i < n; ++i) {
    const double z = s.standard_normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1) < 0.02);
  std::size_t hits[3] = {};
  for (int i = 0; i < 30000; ++i) ++hits[s.index(3)];
  for (auto h : hits) CHECK(std::abs(double(h) - 10000) < 400);
}
