#include "forwardcf/forwardsim.hpp"

#include "forwardcf/parallel.hpp"
#include "forwardcf/rational.hpp"
#include "forwardcf/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace forwardcf {

void StabilityParams::validate() const {
  if (n < 1) throw std::invalid_argument("stability params: n must be >= 1");
  for (double v : {mu_z, sigma_z, sigma_u, sigma_mu, delta}) {
    if (!std::isfinite(v)) throw std::invalid_argument("stability params must be finite");
  }
  if (sigma_z < 0 || sigma_u < 0 || sigma_mu < 0) {
    throw std::invalid_argument("stability params: standard deviations must be >= 0");
  }
}

TreatmentRule treat_negative_outcomes() {
  return [](double, double y0) { return y0 < 0 ? 1 : 0; };
}

TwoStepData generate_truth(const StabilityParams& p, const TreatmentRule& rule) {
  p.validate();
  TwoStepData d;
  const std::size_t n = p.n;
  for (auto* col : {&d.z0, &d.y0, &d.z1, &d.y1_true, &d.mu_u, &d.u0, &d.u1}) col->resize(n);
  d.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Stream s_mu(p.seed, i, "mu_U");
    Stream s_u0(p.seed, i, "U_0");
    Stream s_u1(p.seed, i, "U_1");
    Stream s_z(p.seed, i, "U_Z");
    d.mu_u[i] = s_mu.normal(0.0, p.sigma_mu);
    d.u0[i] = s_u0.normal(d.mu_u[i], p.sigma_u);
    d.u1[i] = s_u1.normal(d.mu_u[i], p.sigma_u);
    d.z0[i] = s_z.normal(p.mu_z, p.sigma_z);
    d.y0[i] = d.z0[i] + d.u0[i];
    const int w = rule(d.z0[i], d.y0[i]);
    if (w != 0 && w != 1) throw std::invalid_argument("treatment rule must return 0 or 1");
    d.w[i] = w;
    d.z1[i] = d.z0[i] + p.delta * w;
    d.y1_true[i] = d.y0[i] + p.delta * w + (d.u1[i] - d.u0[i]);
  }
  return d;
}

Estimate estimate_interventional(const TwoStepData& data, const StabilityParams& p) {
  const double sd = std::sqrt(p.marginal_noise_variance());
  std::vector<double> y1(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    Stream s(p.seed, i, "U'_1");
    y1[i] = data.z1[i] + s.normal(0.0, sd);
  }
  EmpiricalDist dist(y1);
  return Estimate{std::move(y1), std::move(dist)};
}

Estimate estimate_counterfactual(const TwoStepData& data, const StabilityParams& p) {
  std::vector<double> y1(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) y1[i] = data.y0[i] + p.delta * data.w[i];
  EmpiricalDist dist(y1);
  return Estimate{std::move(y1), std::move(dist)};
}

TwoStepData simulate_two_step(const StabilityParams& p, const TreatmentRule& rule) {
  TwoStepData d = generate_truth(p, rule);
  d.y1_interventional = estimate_interventional(d, p).y1;
  d.y1_counterfactual = estimate_counterfactual(d, p).y1;
  return d;
}

AnalyticVariances analytic_variances(const StabilityParams& p) {
  const double vz = p.sigma_z * p.sigma_z;
  const double vmu = p.sigma_mu * p.sigma_mu;
  const double vu = p.sigma_u * p.sigma_u;
  const double v0 = vz + vmu + vu;
  const double d = p.delta;
  double treated = 0.0;   // P(w = 1) = P(Y0 < 0)
  double cov_y0_w = 0.0;  // Cov(Y0, 1{Y0 < 0}) = -s * phi(mu_z / s)
  if (v0 > 0) {
    const double s = std::sqrt(v0);
    treated = 0.5 * std::erfc(p.mu_z / (s * std::numbers::sqrt2));
    cov_y0_w = -s * std::exp(-0.5 * (p.mu_z / s) * (p.mu_z / s)) / std::sqrt(2.0 * std::numbers::pi);
  } else {
    treated = p.mu_z < 0 ? 1.0 : 0.0;
  }
  const double var_w = treated * (1.0 - treated);
  // For jointly normal parts A of Y0, Cov(A, w) = Cov(Y0, w) * Var(A) / Var(Y0).
  auto cov_part = [&](double part_variance) { return v0 > 0 ? cov_y0_w * part_variance / v0 : 0.0; };
  AnalyticVariances a{};
  a.y0 = v0;
  a.z1 = vz + d * d * var_w + 2.0 * d * cov_part(vz);
  a.y1_counterfactual = v0 + d * d * var_w + 2.0 * d * cov_y0_w;
  a.y1_true = v0 + d * d * var_w + 2.0 * d * cov_part(vz + vmu);
  a.y1_interventional = a.z1 + vmu + vu;
  return a;
}

std::uint64_t grid_point_seed(std::uint64_t master, double sigma_u, double sigma_mu, double delta,
                              std::size_t replicate) {
  std::uint64_t s = mix64(master);
  // +0.0 so that -0.0 and 0.0 map to the same point.
  for (double v : {sigma_u, sigma_mu, delta}) s = combine_seed(s, std::bit_cast<std::uint64_t>(v + 0.0));
  return combine_seed(s, replicate);
}

std::vector<GridRow> run_grid(const Grid& grid, const StabilityParams& base, std::size_t k,
                              unsigned threads, std::size_t replicates, const TreatmentRule& rule) {
  if (grid.sigma_u.empty() || grid.sigma_mu.empty() || grid.delta.empty()) {
    throw std::invalid_argument("run_grid: every grid axis needs at least one value");
  }
  if (replicates < 1) throw std::invalid_argument("run_grid: replicates must be >= 1");
  std::vector<StabilityParams> points;
  for (double delta : grid.delta) {
    for (double sigma_mu : grid.sigma_mu) {
      for (double sigma_u : grid.sigma_u) {
        for (std::size_t r = 0; r < replicates; ++r) {
          StabilityParams p = base;
          p.sigma_u = sigma_u;
          p.sigma_mu = sigma_mu;
          p.delta = delta;
          p.seed = grid_point_seed(base.seed, sigma_u, sigma_mu, delta, r);
          p.validate();
          points.push_back(p);
        }
      }
    }
  }

  std::vector<GridRow> rows(points.size());
  parallel_for(points.size(), threads, [&](std::size_t t, unsigned) {
    const StabilityParams& p = points[t];
    const TwoStepData d = simulate_two_step(p, rule);
    GridRow& row = rows[t];
    row.sigma_u = p.sigma_u;
    row.sigma_mu = p.sigma_mu;
    row.delta = p.delta;
    row.n = p.n;
    row.seed = p.seed;
    row.kl_true_vs_int = knn_kl(d.y1_true, d.y1_interventional, k).value;
    row.kl_true_vs_cf = knn_kl(d.y1_true, d.y1_counterfactual, k).value;
    row.var_y0 = variance(EmpiricalDist(d.y0));
    row.var_y1_true = variance(EmpiricalDist(d.y1_true));
    row.var_y1_cf = variance(EmpiricalDist(d.y1_counterfactual));
    row.var_y1_int = variance(EmpiricalDist(d.y1_interventional));
  });
  return rows;
}

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows) {
  out << "sigma_u,sigma_mu,delta,n,seed,kl_true_vs_int,kl_true_vs_cf,var_y0,var_y1_true,"
         "var_y1_cf,var_y1_int\n";
  for (const auto& r : rows) {
    out << format_decimal(r.sigma_u) << ',' << format_decimal(r.sigma_mu) << ','
        << format_decimal(r.delta) << ',' << r.n << ',' << r.seed << ','
        << format_decimal(r.kl_true_vs_int) << ',' << format_decimal(r.kl_true_vs_cf) << ','
        << format_decimal(r.var_y0) << ',' << format_decimal(r.var_y1_true) << ','
        << format_decimal(r.var_y1_cf) << ',' << format_decimal(r.var_y1_int) << '\n';
  }
}

void write_scatter_csv(std::ostream& out, const TwoStepData& data) {
  out << "y0,y1_true,w\n";
  for (std::size_t i = 0; i < data.n(); ++i) {
    out << format_decimal(data.y0[i]) << ',' << format_decimal(data.y1_true[i]) << ',' << data.w[i]
        << '\n';
  }
}

}  // namespace forwardcf
