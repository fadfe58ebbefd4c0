#include <doctest.h>

#include "forwardcf/rng.hpp"
#include "forwardcf/welfare.hpp"

#include <algorithm>

using namespace forwardcf;

namespace {

// Sorted-sample form of the Gini welfare integral.
Rational rank_weighted(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const long long n = static_cast<long long>(x.size());
  Rational total = 0;
  for (long long i = 1; i <= n; ++i) {
    total += exact_from_double(x[i - 1]) * ((n - i + 1) * (n - i + 1) - (n - i) * (n - i));
  }
  return total / (n * n);
}

}  // namespace

TEST_CASE("worked-example welfare values") {
  const StepCdf g_empty({0, 1, 2, 3}, {Rational(1, 6), Rational(3, 6), Rational(5, 6), 1});
  const StepCdf g_0({1, 2, 3}, {Rational(1, 3), Rational(2, 3), 1});
  const StepCdf g_1({0, 1, 2, 3, 4}, {Rational(1, 6), Rational(2, 6), Rational(4, 6), Rational(5, 6), 1});
  CHECK(*gini_welfare(g_empty).exact == Rational(35, 36));
  CHECK(*gini_welfare(g_0).exact == Rational(56, 36));
  CHECK(*gini_welfare(g_1).exact == Rational(46, 36));
  const StepCdf treat_first_two({1, 2, 3}, {Rational(1, 4), Rational(3, 4), 1});
  CHECK(*gini_welfare(treat_first_two).exact == Rational(26, 16));
  CHECK(*gini_welfare(StepCdf({2}, {1})).exact == Rational(32, 16));
}

TEST_CASE("point masses and approximations") {
  for (double c : {0.0, 0.25, 2.0, 7.5}) {
    const WelfareValue w = gini_welfare(StepCdf({c}, {1}));
    CHECK(*w.exact == exact_from_double(c));
    CHECK(w.approx == c);
  }
  const WelfareValue w = gini_welfare(StepCdf({1, 2, 3}, {Rational(1, 3), Rational(2, 3), 1}));
  CHECK(std::abs(w.approx - to_double(*w.exact)) < 1e-12);
}

TEST_CASE("negative support is rejected") {
  CHECK_THROWS_WITH_AS(gini_welfare(StepCdf({-1, 1}, {Rational(1, 2), 1})),
                       doctest::Contains("Gini integral defined on [0,inf)"), WelfareError);
}

TEST_CASE("property: closed form matches the rank-weighted sum") {
  Stream s(17, 0, "gini");
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> x(1 + s.index(12));
    for (auto& v : x) v = trial % 2 ? static_cast<double>(s.index(5)) : 5 * s.uniform();
    CHECK(*gini_welfare(mixture_of_pointmasses(x)).exact == rank_weighted(x));
  }
}

TEST_CASE("property: first-order dominance raises welfare") {
  Stream s(18, 0, "fsd");
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> x(2 + s.index(10)), better;
    for (auto& v : x) v = static_cast<double>(s.index(6));
    better = x;
    for (auto& v : better) v += static_cast<double>(s.index(3));
    CHECK_FALSE(gini_welfare(mixture_of_pointmasses(better)) < gini_welfare(mixture_of_pointmasses(x)));
  }
}

TEST_CASE("functional dispatch") {
  const StepCdf two({2}, {1});
  CHECK(*welfare_functional("mean", two).exact == 2);
  CHECK(*welfare_functional("neg_variance", EmpiricalDist({3, 3, 3})).exact == 0);
  CHECK(*welfare_functional("gini", StepCdf({1, 2, 3}, {Rational(1, 3), Rational(2, 3), 1})).exact ==
        Rational(56, 36));
  CHECK(*welfare_functional("neg_variance", StepCdf({0, 2}, {Rational(1, 2), 1})).exact == -1);
  CHECK_THROWS_WITH_AS(welfare_functional("utilitarian", two),
                       doctest::Contains("gini, mean, neg_variance"), WelfareError);
  CHECK(to_string(parse_welfare_functional("neg_variance")) == "neg_variance");
}

TEST_CASE("ordering prefers exact comparison") {
  const WelfareValue a = WelfareValue::from_exact(Rational(1, 3));
  const WelfareValue b = WelfareValue::from_exact(Rational(1, 3) + Rational(1, BigInt(1) << 80));
  CHECK(a < b);
  CHECK_FALSE(a == b);
  CHECK(a == WelfareValue::from_exact(Rational(2, 6)));
}
