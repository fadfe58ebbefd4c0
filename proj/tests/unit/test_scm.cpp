#include <doctest.h>

#include "forwardcf/models.hpp"
#include "forwardcf/scm.hpp"
#include "forwardcf/scm_json.hpp"

#include <cmath>
#include <numeric>

using namespace forwardcf;

namespace {

Scm chain() {
  // A -> B -> C, plus an isolated D
  return Scm({
      Variable{{"C", {"B"}, additive_linear({2.0}, 1.0)}, NoiseSpec("U_C", Normal{0, 1})},
      Variable{{"A", {}, additive_linear({})}, NoiseSpec("U_A", Normal{1, 4})},
      Variable{{"B", {"A"}, additive_linear({-0.5})}, NoiseSpec("U_B", Normal{0, 1})},
      Variable{{"D", {}, additive_linear({})}, NoiseSpec("U_D", Bernoulli{0.3})},
  });
}

std::vector<double> col(const Sample& s, const char* name) {
  auto c = s.column(name);
  return {c.begin(), c.end()};
}

}  // namespace

TEST_CASE("construction validates the graph") {
  CHECK_THROWS_WITH_AS(Scm({Variable{{"X", {"Y"}, additive_linear({1})}, NoiseSpec("U_X", PointMass{})},
                            Variable{{"Y", {"X"}, additive_linear({1})}, NoiseSpec("U_Y", PointMass{})}}),
                       "structural equations form a cycle", ScmError);
  CHECK_THROWS_AS(Scm({Variable{{"X", {"X"}, additive_linear({1})}, NoiseSpec("U", PointMass{})}}),
                  ScmError);
  CHECK_THROWS_AS(Scm({Variable{{"X", {"Q"}, additive_linear({1})}, NoiseSpec("U", PointMass{})}}),
                  ScmError);
  CHECK_THROWS_AS(Scm({Variable{{"X", {}, additive_linear({1})}, NoiseSpec("U", PointMass{})}}),
                  ScmError);
  CHECK_THROWS_AS(Scm({Variable{{"X", {}, additive_linear({})}, NoiseSpec("U", PointMass{})},
                       Variable{{"Y", {}, additive_linear({})}, NoiseSpec("U", PointMass{})}}),
                  ScmError);
  CHECK_THROWS_AS(NoiseSpec("U", Normal{0, -1}), ScmError);
  CHECK_THROWS_AS(NoiseSpec("U", Bernoulli{1.5}), ScmError);
  CHECK_THROWS_AS(NoiseSpec("U", DiscreteUniform{{1, 1}}), ScmError);
  CHECK_THROWS_AS(NoiseSpec("U", DiscreteUniform{{}}), ScmError);
}

TEST_CASE("topological order respects parents") {
  const Scm scm = chain();
  std::vector<std::size_t> position(scm.size());
  for (std::size_t k = 0; k < scm.order().size(); ++k) position[scm.order()[k]] = k;
  for (std::size_t i = 0; i < scm.size(); ++i) {
    for (std::size_t p : scm.parent_indices(i)) CHECK(position[p] < position[i]);
  }
  CHECK(scm.descendants("A") == std::set<std::size_t>{scm.index_of("A"), scm.index_of("B"), scm.index_of("C")});
  CHECK_THROWS_WITH_AS(scm.index_of("nope"), "unknown variable 'nope'", ScmError);
}

TEST_CASE("noise atoms") {
  auto a = NoiseSpec("U", DiscreteUniform{{2, 0, 1}}).atoms();
  REQUIRE(a);
  REQUIRE(a->size() == 3);
  CHECK((*a)[0].first == 0);
  CHECK((*a)[2].second == Rational(1, 3));
  auto b = NoiseSpec("U", Bernoulli{0.25}).atoms();
  REQUIRE(b);
  CHECK((*b)[1].second == Rational(1, 4));
  CHECK(NoiseSpec("U", Bernoulli{1.0}).atoms()->size() == 1);
  CHECK_FALSE(NoiseSpec("U", Normal{0, 1}).atoms());
  CHECK(NoiseSpec("U", Normal{3, 0}).atoms()->front().first == 3);
}

TEST_CASE("sample_observational on the welfare SCM") {
  const Scm scm = models::welfare_example();
  const Sample s = sample_observational(scm, 500, 7);
  REQUIRE(s.noise);
  for (std::size_t i = 0; i < s.n(); ++i) {
    const double y = s.values.at(i, "Y");
    CHECK(y == s.values.at(i, "X") + s.values.at(i, "Z") + s.noise->at(i, "U_Y"));
    CHECK((y >= 0 && y <= 4 && y == std::floor(y)));
  }
  const Sample again = sample_observational(scm, 500, 7);
  CHECK(again.values == s.values);
  CHECK(*again.noise == *s.noise);
  CHECK_FALSE(sample_observational(scm, 500, 8).values == s.values);
  CHECK_THROWS_AS(sample_observational(scm, 0, 1), ScmError);
}

TEST_CASE("degenerate point masses give zeros") {
  const Scm scm({Variable{{"A", {}, additive_linear({})}, NoiseSpec("U_A", PointMass{0})},
                 Variable{{"B", {"A"}, additive_linear({0})}, NoiseSpec("U_B", PointMass{0})}});
  const Sample s = sample_observational(scm, 10, 3);
  for (const char* v : {"A", "B"}) {
    for (double x : s.column(v)) CHECK(x == 0);
  }
}

TEST_CASE("generator moments for the two-step SCM") {
  const std::size_t n = 100000;
  const Sample s = sample_observational(models::two_step(0.0, 1.0, 1.0), n, 11);
  const auto z = s.column("Z");
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / n;
  double var = 0;
  for (double v : z) var += (v - mean) * (v - mean);
  var /= n;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("apply_intervention") {
  const Scm scm = models::welfare_example();
  SUBCASE("atomic") {
    const Scm done = apply_intervention(scm, atomic("Z", 1));
    const Sample s = sample_observational(done, 50, 1);
    for (double z : s.column("Z")) CHECK(z == 1);
    CHECK(done.variable(done.index_of("Z")).equation.parents.empty());
    CHECK(std::holds_alternative<PointMass>(done.variable(done.index_of("Z")).noise.law()));
    // original untouched
    CHECK(std::holds_alternative<Bernoulli>(scm.variable(scm.index_of("Z")).noise.law()));
  }
  SUBCASE("unknown variable is named") {
    CHECK_THROWS_WITH_AS(apply_intervention(scm, atomic("W", 1)), "unknown variable 'W'", ScmError);
  }
  SUBCASE("shift") {
    const Scm ts = models::two_step();
    const Sample base = sample_observational(ts, 4, 5);
    const std::vector<int> w{1, 1, 0, 0};
    const Sample cf = counterfactual_sample(ts, base, shift("Z", 1.0, w));
    for (std::size_t i = 0; i < 4; ++i) CHECK(cf.values.at(i, "Z") == base.values.at(i, "Z") + w[i]);
    CHECK_THROWS_AS(counterfactual_sample(ts, base, shift("Z", 1.0, std::vector<int>{1, 0})), ScmError);
  }
  SUBCASE("replace") {
    const Scm ts = models::two_step();
    const Scm swapped = apply_intervention(
        ts, replace("Y", {"Y", {"Z"}, additive_linear({2.0})}, NoiseSpec("U_Y", Normal{0, 1})));
    const Sample a = sample_observational(swapped, 20, 2);
    for (std::size_t i = 0; i < 20; ++i) {
      CHECK(a.values.at(i, "Y") == doctest::Approx(2 * a.values.at(i, "Z") + a.noise->at(i, "U_Y")));
    }
    const Sample b = sample_observational(ts, 20, 2);
    for (std::size_t i = 0; i < 20; ++i) {
      CHECK(b.values.at(i, "Y") == b.values.at(i, "Z") + b.noise->at(i, "U_Y"));
    }
    CHECK_THROWS_AS(apply_intervention(ts, replace("Y", {"Z", {}, additive_linear({})},
                                                   NoiseSpec("U_Y", PointMass{}))),
                    ScmError);
  }
}

TEST_CASE("abduction on the four observed units") {
  const Scm scm = models::welfare_example();
  const NoisePosterior u = abduct(scm, models::welfare_example_units());
  CHECK(u.column("U_X")[1] == 0);
  CHECK(u.column("U_Z")[1] == 0);
  CHECK(u.column("U_Y")[1] == 2);
  CHECK(u.column("U_Y")[2] == 0);
  const Sample units = models::welfare_example_units();
  const Sample y1 = counterfactual_sample(scm, units, atomic("Z", 1));
  const Sample y0 = counterfactual_sample(scm, units, atomic("Z", 0));
  CHECK(col(y1, "Y") == std::vector<double>{2, 3, 2, 3});
  CHECK(col(y0, "Y") == std::vector<double>{1, 2, 1, 2});
}

TEST_CASE("abduction errors") {
  const Scm opaque({Variable{{"A", {}, closure_mechanism([](auto, double u) { return u * u; }, nullptr)},
                             NoiseSpec("U_A", Normal{0, 1})}});
  const Sample s = sample_observational(opaque, 3, 1);
  CHECK_THROWS_WITH_AS(abduct(opaque, s), doctest::Contains("abduction requires invertible mechanisms"),
                       AbductionError);
  const Sample partial{Table({"X", "Z"}, {{0}, {0}}), std::nullopt};
  CHECK_THROWS_AS(abduct(models::welfare_example(), partial), AbductionError);
}

TEST_CASE("round trip: abduct then simulate reproduces the sample") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Scm scm = chain();
    const Sample s = sample_observational(scm, 200, seed);
    const NoisePosterior u = abduct(scm, s);
    const Sample again = simulate(scm, u);
    for (const auto& name : scm.variable_names()) {
      for (std::size_t i = 0; i < s.n(); ++i) {
        CHECK(std::abs(again.values.at(i, name) - s.values.at(i, name)) <= 1e-12);
      }
    }
    for (const auto& name : scm.noise_names()) {
      for (std::size_t i = 0; i < s.n(); ++i) {
        CHECK(std::abs(u.at(i, name) - s.noise->at(i, name)) <= 1e-12);
      }
    }
  }
  const Scm discrete = models::welfare_example();
  const Sample d = sample_observational(discrete, 100, 4);
  CHECK(abduct(discrete, d) == *d.noise);
  CHECK(simulate(discrete, abduct(discrete, d)).values == d.values);
}

TEST_CASE("counterfactual consistency and locality") {
  const Scm scm = chain();
  const Sample s = sample_observational(scm, 100, 9);
  SUBCASE("null shift") {
    const Sample cf = counterfactual_sample(scm, s, shift_offsets("B", std::vector<double>(100, 0.0)));
    CHECK(cf.values == s.values);
  }
  SUBCASE("factual atomic value per unit") {
    const Sample one{Table({"C", "A", "B", "D"}, {{s.values.at(0, "C")}, {s.values.at(0, "A")},
                                                  {s.values.at(0, "B")}, {s.values.at(0, "D")}}),
                     std::nullopt};
    const Sample cf = counterfactual_sample(scm, one, atomic("B", one.values.at(0, "B")));
    for (const char* v : {"A", "B", "C", "D"}) {
      CHECK(cf.values.at(0, v) == doctest::Approx(one.values.at(0, v)).epsilon(1e-12));
    }
  }
  SUBCASE("locality") {
    const Sample cf = counterfactual_sample(scm, s, atomic("B", 10));
    CHECK(col(cf, "A") == col(s, "A"));
    CHECK(col(cf, "D") == col(s, "D"));
    for (double c : cf.column("C")) CHECK(c != 0);
  }
}

TEST_CASE("interventional_sample") {
  const Scm ts = models::two_step();
  const Sample base = sample_observational(ts, 300, 21);
  const std::vector<int> w(300, 1);
  const auto act = shift("Z", 1.0, w);
  SUBCASE("empty resample equals counterfactual") {
    CHECK(interventional_sample(ts, base, act, {}, 99).values == counterfactual_sample(ts, base, act).values);
  }
  SUBCASE("resampling U_Y redraws Y only") {
    const Sample cf = counterfactual_sample(ts, base, act);
    const Sample iv = interventional_sample(ts, base, act, {"U_Y"}, 99);
    CHECK(col(iv, "Z") == col(cf, "Z"));
    std::size_t differ = 0;
    for (std::size_t i = 0; i < 300; ++i) differ += iv.values.at(i, "Y") != cf.values.at(i, "Y");
    CHECK(differ == 300);
    for (std::size_t i = 0; i < 300; ++i) {
      CHECK(iv.values.at(i, "Y") == iv.values.at(i, "Z") + iv.noise->at(i, "U_Y"));
    }
    CHECK(interventional_sample(ts, base, act, {"U_Y"}, 99).values == iv.values);
  }
  SUBCASE("resampling everything is a fresh observational draw") {
    const Sample fresh = interventional_sample(ts, base, shift_offsets("Z", std::vector<double>(300, 0.0)),
                                               {"U_Z", "U_Y"}, 5);
    CHECK(fresh.values == sample_observational(ts, 300, 5).values);
  }
  SUBCASE("unknown noise") {
    CHECK_THROWS_WITH_AS(interventional_sample(ts, base, act, {"U_Q"}, 1), "unknown noise 'U_Q'", ScmError);
  }
}

TEST_CASE("substreams are independent per noise") {
  const Scm ts = models::two_step();
  const Sample base = sample_observational(ts, 50, 3);
  const Sample a = interventional_sample(ts, base, shift_offsets("Z", std::vector<double>(50, 0.0)), {"U_Y"}, 8);
  const Sample b = interventional_sample(ts, base, shift_offsets("Z", std::vector<double>(50, 0.0)), {"U_Z", "U_Y"}, 8);
  CHECK(a.noise->column("U_Y")[7] == b.noise->column("U_Y")[7]);
}

TEST_CASE("JSON loader") {
  const auto doc = nlohmann::json::parse(R"({"variables": [
    {"name": "Y", "parents": ["X", "Z"], "coeffs": [1, 1], "noise": {"law": "discrete_uniform", "support": [0, 1, 2]}},
    {"name": "X", "noise": {"name": "U_X", "law": "bernoulli", "p": 0.5}},
    {"name": "Z", "noise": {"law": "bernoulli", "p": 0.5}}
  ]})");
  const Scm scm = scm_from_json(doc);
  CHECK(scm.find_noise("U_Y"));
  CHECK(scm.find_noise("U_Z"));
  const NoisePosterior u = abduct(scm, models::welfare_example_units());
  const NoisePosterior ref = abduct(models::welfare_example(), models::welfare_example_units());
  for (const char* name : {"U_X", "U_Z", "U_Y"}) {
    CHECK(std::equal(u.column(name).begin(), u.column(name).end(), ref.column(name).begin()));
  }

  const Scm file = load_scm(FORWARDCF_FIXTURE_DIR "/welfare_example.json");
  CHECK(file.variable_names().size() == 3);

  CHECK_THROWS_AS(scm_from_json(nlohmann::json::parse(R"({"variables": [{"name": "Y", "parents": ["X"], "noise": {"law": "normal"}}]})")), ScmError);
  CHECK_THROWS_AS(scm_from_json(nlohmann::json::parse(R"({"variables": [{"name": "Y", "noise": {"law": "cauchy"}}]})")), ScmError);
  CHECK_THROWS_AS(load_scm("/nonexistent/scm.json"), ScmError);
}
