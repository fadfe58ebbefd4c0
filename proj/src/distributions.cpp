#include "forwardcf/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace forwardcf {

StepCdf::StepCdf(std::vector<double> support, std::vector<Rational> cum)
    : support_(std::move(support)), cum_(std::move(cum)) {
  if (support_.empty()) throw DistributionError("step CDF needs at least one step");
  if (support_.size() != cum_.size()) {
    throw DistributionError("step CDF: support and cumulative weights differ in length");
  }
  for (std::size_t j = 0; j < support_.size(); ++j) {
    if (!std::isfinite(support_[j])) throw DistributionError("step CDF: non-finite support");
    if (j > 0 && !(support_[j - 1] < support_[j])) {
      throw DistributionError("step CDF: support must be strictly increasing");
    }
    if (cum_[j] <= 0 || cum_[j] > 1) {
      throw DistributionError("step CDF: cumulative weights must lie in (0, 1]");
    }
    if (j > 0 && cum_[j] < cum_[j - 1]) {
      throw DistributionError("step CDF: cumulative weights must be nondecreasing");
    }
  }
  if (cum_.back() != 1) throw DistributionError("step CDF: last cumulative weight must be 1");
}

StepCdf StepCdf::from_atoms(std::vector<std::pair<double, Rational>> atoms) {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> support;
  std::vector<Rational> cum;
  Rational acc = 0;
  for (const auto& [value, weight] : atoms) {
    if (weight < 0) throw DistributionError("negative probability weight");
    if (weight == 0) continue;
    acc += weight;
    if (!support.empty() && support.back() == value) {
      cum.back() = acc;
    } else {
      support.push_back(value);
      cum.push_back(acc);
    }
  }
  if (acc != 1) {
    throw DistributionError("probability weights sum to " + to_fraction_string(acc) + ", not 1");
  }
  return StepCdf(std::move(support), std::move(cum));
}

Rational StepCdf::operator()(double y) const {
  auto it = std::upper_bound(support_.begin(), support_.end(), y);
  if (it == support_.begin()) return 0;
  return cum_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

std::vector<Rational> StepCdf::pmf() const {
  std::vector<Rational> p(cum_.size());
  for (std::size_t j = 0; j < cum_.size(); ++j) p[j] = j == 0 ? cum_[0] : cum_[j] - cum_[j - 1];
  return p;
}

Rational StepCdf::mean() const {
  const auto p = pmf();
  Rational m = 0;
  for (std::size_t j = 0; j < p.size(); ++j) m += p[j] * exact_from_double(support_[j]);
  return m;
}

Rational StepCdf::variance() const {
  const auto p = pmf();
  const Rational m = mean();
  Rational v = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const Rational d = exact_from_double(support_[j]) - m;
    v += p[j] * d * d;
  }
  return v;
}

EmpiricalDist::EmpiricalDist(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw DistributionError("empirical distribution needs at least one sample");
  for (double v : samples_) {
    if (!std::isfinite(v)) throw DistributionError("empirical distribution: non-finite sample");
  }
}

StepCdf mixture_of_pointmasses(std::span<const double> outcomes,
                               const std::optional<std::vector<Rational>>& weights) {
  if (outcomes.empty()) throw DistributionError("mixture of point masses needs at least one unit");
  if (weights && weights->size() != outcomes.size()) {
    throw DistributionError("mixture weights must have one entry per unit");
  }
  const Rational uniform(1, static_cast<long long>(outcomes.size()));
  std::vector<std::pair<double, Rational>> atoms;
  atoms.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    atoms.emplace_back(outcomes[i], weights ? (*weights)[i] : uniform);
  }
  return StepCdf::from_atoms(std::move(atoms));
}

StepCdf ecdf(const EmpiricalDist& d) { return mixture_of_pointmasses(d.samples()); }

double mean(const EmpiricalDist& d) {
  return std::accumulate(d.samples().begin(), d.samples().end(), 0.0) /
         static_cast<double>(d.size());
}

double variance(const EmpiricalDist& d) {
  if (d.size() < 2) throw DistributionError("variance needs at least two samples");
  const double m = mean(d);
  double ss = 0.0;
  for (double v : d.samples()) ss += (v - m) * (v - m);
  return ss / static_cast<double>(d.size());
}

namespace {

// Linear-interpolation quantile on sorted data (R's default, type 7).
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double silverman_bandwidth(const EmpiricalDist& d) {
  const auto& x = d.samples();
  const double n = static_cast<double>(x.size());
  double sd = 0.0;
  if (x.size() > 1) sd = std::sqrt(variance(d) * n / (n - 1.0));
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  double lo = std::min(sd, iqr / 1.34);
  if (!(lo > 0)) {
    lo = sd;
    if (!(lo > 0)) lo = std::abs(sorted.front());
    if (!(lo > 0)) lo = 1.0;
  }
  return 0.9 * lo * std::pow(n, -0.2);
}

std::vector<DensityPoint> kde_density(const EmpiricalDist& d, std::optional<double> bandwidth,
                                      std::span<const double> grid) {
  if (grid.empty()) throw DistributionError("kde_density: empty grid");
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(d);
  if (!(h > 0) || !std::isfinite(h)) throw DistributionError("kde_density: bandwidth must be > 0");
  const double norm = 1.0 / (static_cast<double>(d.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  std::vector<DensityPoint> curve;
  curve.reserve(grid.size());
  for (double y : grid) {
    double acc = 0.0;
    for (double x : d.samples()) {
      const double z = (y - x) / h;
      acc += std::exp(-0.5 * z * z);
    }
    curve.push_back({y, acc * norm});
  }
  return curve;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

void write_cdf_csv(std::ostream& out, const StepCdf& cdf) {
  out << "y,cdf\n";
  for (std::size_t j = 0; j < cdf.steps(); ++j) {
    out << format_decimal(cdf.support()[j]) << ',' << format_decimal(to_double(cdf.cum()[j]))
        << '\n';
  }
}

void write_density_csv(std::ostream& out, std::span<const DensityPoint> curve) {
  out << "y,density\n";
  for (const auto& p : curve) out << format_decimal(p.y) << ',' << format_decimal(p.density) << '\n';
}

}  // namespace forwardcf
