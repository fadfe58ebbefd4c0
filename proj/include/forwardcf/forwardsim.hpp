#pragma once

#include "forwardcf/distributions.hpp"
#include "forwardcf/kl.hpp"

#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

namespace forwardcf {

/// Two-period generator:
///   Z0 = U_Z,            U_Z ~ N(mu_z, sigma_z^2)
///   Y0 = Z0 + U0,        U0, U1 ~ iid N(mu_U, sigma_u^2), mu_U ~ N(0, sigma_mu^2) per unit
///   Z1 = Z0 + delta * w
///   Y1 = Z1 + U1
struct StabilityParams {
  std::size_t n = 1000;
  double mu_z = 0.0;
  double sigma_z = 1.0;
  double sigma_u = 0.0;   // within-unit drift between periods
  double sigma_mu = 0.0;  // spread of unit means
  double delta = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  /// Noise variance of the modeler's period-0 model, sigma_mu^2 + sigma_u^2.
  double marginal_noise_variance() const { return sigma_mu * sigma_mu + sigma_u * sigma_u; }
};

/// w(i) from period-0 observables (z0, y0).
using TreatmentRule = std::function<int(double z0, double y0)>;

/// Treat every unit with y0 < 0.
TreatmentRule treat_negative_outcomes();

struct TwoStepData {
  std::vector<double> z0, y0;
  std::vector<int> w;
  std::vector<double> z1, y1_true;
  // Filled by the estimators.
  std::vector<double> y1_interventional, y1_counterfactual;
  // Hidden generator state.
  std::vector<double> mu_u, u0, u1;

  std::size_t n() const { return z0.size(); }
};

/// Truth columns only. Y1 is evaluated as Y0 + delta*w + (U1 - U0), which
/// equals Z1 + U1 and is bit-identical to Y0 + delta*w whenever U1 == U0.
TwoStepData generate_truth(const StabilityParams& p,
                           const TreatmentRule& rule = treat_negative_outcomes());

struct Estimate {
  std::vector<double> y1;
  EmpiricalDist dist;
};

/// Y1 = Z1 + U'1 with U'1 drawn fresh from N(0, sigma_mu^2 + sigma_u^2).
Estimate estimate_interventional(const TwoStepData& data, const StabilityParams& p);

/// Y1 = Z1 + U~1 with U~1 = U0 = Y0 - Z0, evaluated as Y0 + delta*w.
Estimate estimate_counterfactual(const TwoStepData& data, const StabilityParams& p);

/// generate_truth followed by both estimators.
TwoStepData simulate_two_step(const StabilityParams& p,
                              const TreatmentRule& rule = treat_negative_outcomes());

/// Closed-form variances under treat_negative_outcomes().
struct AnalyticVariances {
  double y0;
  double z1;
  double y1_true;
  double y1_counterfactual;
  double y1_interventional;
};
AnalyticVariances analytic_variances(const StabilityParams& p);

struct Grid {
  std::vector<double> sigma_u;
  std::vector<double> sigma_mu;
  std::vector<double> delta;
};

struct GridRow {
  double sigma_u = 0, sigma_mu = 0, delta = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double kl_true_vs_int = 0, kl_true_vs_cf = 0;
  double var_y0 = 0, var_y1_true = 0, var_y1_cf = 0, var_y1_int = 0;
};

/// Seed for one grid point, derived from the parameter values (not their grid
/// positions) so refining a grid keeps existing points' draws.
std::uint64_t grid_point_seed(std::uint64_t master, double sigma_u, double sigma_mu, double delta,
                              std::size_t replicate);

/// One row per (delta, sigma_mu, sigma_u, replicate), in that nesting order.
/// `base` supplies n, mu_z, sigma_z and the master seed.
std::vector<GridRow> run_grid(const Grid& grid, const StabilityParams& base,
                              std::size_t k = kDefaultNeighbors, unsigned threads = 1,
                              std::size_t replicates = 1,
                              const TreatmentRule& rule = treat_negative_outcomes());

/// Columns: sigma_u,sigma_mu,delta,n,seed,kl_true_vs_int,kl_true_vs_cf,
///          var_y0,var_y1_true,var_y1_cf,var_y1_int
void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows);

/// Columns: y0,y1_true,w
void write_scatter_csv(std::ostream& out, const TwoStepData& data);

}  // namespace forwardcf
