#pragma once

#include "forwardcf/rational.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace forwardcf {

class DistributionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Right-continuous step CDF with exact cumulative weights.
///
/// support is strictly increasing; cum[j] = P(Y <= support[j]) lies in (0, 1],
/// is nondecreasing and ends at exactly 1.
class StepCdf {
 public:
  StepCdf(std::vector<double> support, std::vector<Rational> cum);

  /// Sorts atoms, merges equal values and drops zero weights. The weights
  /// must sum to exactly 1.
  static StepCdf from_atoms(std::vector<std::pair<double, Rational>> atoms);

  const std::vector<double>& support() const { return support_; }
  const std::vector<Rational>& cum() const { return cum_; }
  std::size_t steps() const { return support_.size(); }

  Rational operator()(double y) const;
  std::vector<Rational> pmf() const;
  Rational mean() const;
  Rational variance() const;

  friend bool operator==(const StepCdf&, const StepCdf&) = default;

 private:
  std::vector<double> support_;
  std::vector<Rational> cum_;
};

/// Non-empty sample of finite reals.
class EmpiricalDist {
 public:
  explicit EmpiricalDist(std::vector<double> samples);

  const std::vector<double>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::vector<double> samples_;
};

/// Mixture of point masses at `outcomes`, uniform 1/n weights unless given.
StepCdf mixture_of_pointmasses(std::span<const double> outcomes,
                               const std::optional<std::vector<Rational>>& weights = std::nullopt);

StepCdf ecdf(const EmpiricalDist& d);

double mean(const EmpiricalDist& d);

/// Population variance (divides by n). Needs at least two samples.
double variance(const EmpiricalDist& d);

/// Silverman's rule of thumb, 0.9 * min(sd, IQR / 1.34) * n^(-1/5), with the
/// usual fallbacks when the spread is zero.
double silverman_bandwidth(const EmpiricalDist& d);

struct DensityPoint {
  double y;
  double density;
};

/// Gaussian KDE on `grid`. nullopt bandwidth selects silverman_bandwidth.
std::vector<DensityPoint> kde_density(const EmpiricalDist& d, std::optional<double> bandwidth,
                                      std::span<const double> grid);

std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Columns: y,cdf
void write_cdf_csv(std::ostream& out, const StepCdf& cdf);
/// Columns: y,density
void write_density_csv(std::ostream& out, std::span<const DensityPoint> curve);

}  // namespace forwardcf
