#include <doctest.h>

#include "forwardcf/distributions.hpp"
#include "forwardcf/forwardsim.hpp"
#include "forwardcf/models.hpp"
#include "forwardcf/scm.hpp"

#include <cmath>
#include <sstream>

using namespace forwardcf;

namespace {

StabilityParams params(double sigma_u, double sigma_mu, double delta = 1.0, std::size_t n = 1000,
                       std::uint64_t seed = 1) {
  StabilityParams p;
  p.n = n;
  p.sigma_u = sigma_u;
  p.sigma_mu = sigma_mu;
  p.delta = delta;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS(params(-1, 0).validate());
  CHECK_THROWS(params(0, 0, 1, 0).validate());
  CHECK_THROWS(params(0, NAN).validate());
  CHECK_NOTHROW(params(0, 0, -3).validate());
}

TEST_CASE("generator structure") {
  const TwoStepData d = simulate_two_step(params(2, 3, 1.5));
  for (std::size_t i = 0; i < d.n(); ++i) {
    CHECK(d.w[i] == (d.y0[i] < 0 ? 1 : 0));
    CHECK(d.z1[i] == d.z0[i] + 1.5 * d.w[i]);
    CHECK(d.y0[i] == d.z0[i] + d.u0[i]);
    CHECK(d.y1_true[i] == doctest::Approx(d.z1[i] + d.u1[i]).epsilon(1e-12));
    CHECK(d.y1_counterfactual[i] == d.y0[i] + 1.5 * d.w[i]);
    CHECK(std::abs(d.y1_counterfactual[i] - (d.z1[i] + (d.y0[i] - d.z0[i]))) < 1e-12);
  }
}

TEST_CASE("stable noise makes the counterfactual exact") {
  for (double sigma_mu : {0.0, 0.5, 5.0}) {
    const TwoStepData d = simulate_two_step(params(0, sigma_mu));
    for (std::size_t i = 0; i < d.n(); ++i) {
      CHECK(d.y1_true[i] == d.y0[i] + d.w[i]);
      CHECK(d.y1_counterfactual[i] == d.y1_true[i]);
    }
  }
  const TwoStepData d = simulate_two_step(params(0, 0));
  CHECK(d.y1_interventional == d.y1_true);
  CHECK(d.y1_counterfactual == d.y1_true);
}

TEST_CASE("untreated and treated counterfactual estimates") {
  const TwoStepData d = simulate_two_step(params(1, 1, 2));
  for (std::size_t i = 0; i < d.n(); ++i) {
    CHECK(d.y1_counterfactual[i] == (d.w[i] ? d.y0[i] + 2 : d.y0[i]));
  }
}

TEST_CASE("null treatment leaves the marginal law") {
  const TwoStepData d = simulate_two_step(params(1.5, 2, 0, 100000, 4));
  const EmpiricalDist y0(d.y0), y1(d.y1_true);
  const double v = variance(y0);
  CHECK(std::abs(mean(y1) - mean(y0)) < 4 * std::sqrt(2 * v / 100000.0));
  CHECK(std::abs(variance(y1) / v - 1) < 0.03);
}

TEST_CASE("modeler's marginal noise variance") {
  const StabilityParams p = params(1.5, 2, 1, 100000, 5);
  const TwoStepData d = generate_truth(p);
  std::vector<double> u(d.n());
  for (std::size_t i = 0; i < d.n(); ++i) u[i] = d.y0[i] - d.z0[i];
  CHECK(std::abs(variance(EmpiricalDist(u)) / p.marginal_noise_variance() - 1) < 0.05);
}

TEST_CASE("interventional variance decomposition") {
  for (auto [su, smu] : {std::pair{5.0, 5.0}, std::pair{1.0, 0.0}, std::pair{0.0, 2.0}}) {
    const StabilityParams p = params(su, smu, 1, 100000, 6);
    const TwoStepData d = simulate_two_step(p);
    const double expected = variance(EmpiricalDist(d.z1)) + p.marginal_noise_variance();
    CHECK(std::abs(variance(EmpiricalDist(d.y1_interventional)) / expected - 1) < 0.03);
    const AnalyticVariances a = analytic_variances(p);
    CHECK(std::abs(variance(EmpiricalDist(d.y0)) / a.y0 - 1) < 0.03);
    CHECK(std::abs(variance(EmpiricalDist(d.z1)) / a.z1 - 1) < 0.03);
    CHECK(std::abs(variance(EmpiricalDist(d.y1_true)) / a.y1_true - 1) < 0.03);
    CHECK(std::abs(variance(EmpiricalDist(d.y1_counterfactual)) / a.y1_counterfactual - 1) < 0.03);
    CHECK(std::abs(variance(EmpiricalDist(d.y1_interventional)) / a.y1_interventional - 1) < 0.03);
  }
}

TEST_CASE("counterfactual estimate agrees with the generic SCM route") {
  for (double sigma_u : {0.0, 2.0}) {
    const StabilityParams p = params(sigma_u, 1.0, 1.0, 500, 9);
    const TwoStepData d = simulate_two_step(p);
    const Scm modeler = models::two_step(p.mu_z, p.sigma_z, p.marginal_noise_variance());
    const Sample observed{Table({"Z", "Y"}, {d.z0, d.y0}), std::nullopt};
    const Sample cf = counterfactual_sample(modeler, observed, shift("Z", p.delta, d.w));
    for (std::size_t i = 0; i < d.n(); ++i) {
      CHECK(cf.values.at(i, "Z") == d.z1[i]);
      CHECK(std::abs(cf.values.at(i, "Y") - d.y1_counterfactual[i]) <= 1e-12);
    }
  }
}

TEST_CASE("run_grid") {
  Grid grid{{0.0, 0.5, 5.0}, {0.0, 0.5}, {1.0}};
  StabilityParams base = params(0, 0);
  base.seed = 77;
  const auto rows = run_grid(grid, base, 10, 1, 2);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0].sigma_mu == 0.0);
  CHECK(rows[0].sigma_u == 0.0);
  CHECK(rows[1].sigma_u == 0.0);  // second replicate
  CHECK(rows[2].sigma_u == 0.5);
  CHECK(rows[6].sigma_mu == 0.5);
  CHECK(rows[0].seed != rows[1].seed);
  for (const auto& r : rows) {
    if (r.sigma_u == 0) CHECK(r.kl_true_vs_cf < 0.05);
  }

  SUBCASE("thread count does not matter") {
    const auto threaded = run_grid(grid, base, 10, 4, 2);
    std::ostringstream a, b;
    write_grid_csv(a, rows);
    write_grid_csv(b, threaded);
    CHECK(a.str() == b.str());
  }
  SUBCASE("seeds follow parameter values, not positions") {
    const auto coarse = run_grid({{5.0}, {0.5}, {1.0}}, base, 10, 1, 1);
    CHECK(coarse[0].seed == rows[10].seed);
    CHECK(coarse[0].kl_true_vs_int == rows[10].kl_true_vs_int);
  }
  SUBCASE("csv header") {
    std::ostringstream out;
    write_grid_csv(out, rows);
    CHECK(out.str().substr(0, out.str().find('\n')) ==
          "sigma_u,sigma_mu,delta,n,seed,kl_true_vs_int,kl_true_vs_cf,var_y0,var_y1_true,var_y1_cf,var_y1_int");
  }
  CHECK_THROWS(run_grid({{}, {0.0}, {1.0}}, base));
}

TEST_CASE("regime examples at single grid points") {
  StabilityParams base = params(0, 0);
  base.seed = 2024;
  const auto row = [&](double su, double smu) { return run_grid({{su}, {smu}, {1.0}}, base)[0]; };
  const GridRow structured = row(0, 0.5);
  CHECK(structured.kl_true_vs_cf < 0.05);
  CHECK(structured.kl_true_vs_int > structured.kl_true_vs_cf);
  const GridRow unstable = row(0.5, 0);
  CHECK(unstable.kl_true_vs_int < unstable.kl_true_vs_cf);
}

TEST_CASE("scatter csv") {
  const TwoStepData d = simulate_two_step(params(0, 0, 1, 5));
  std::ostringstream out;
  write_scatter_csv(out, d);
  CHECK(out.str().rfind("y0,y1_true,w\n", 0) == 0);
}
