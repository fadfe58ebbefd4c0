#pragma once

#include "forwardcf/rational.hpp"
#include "forwardcf/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace forwardcf {

class ScmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AbductionError : public ScmError {
 public:
  using ScmError::ScmError;
};

// ---------------------------------------------------------------------------
// Noise laws

struct Normal {
  double mean = 0.0;
  double variance = 1.0;
};
struct Bernoulli {
  double p = 0.5;
};
struct DiscreteUniform {
  std::vector<double> support;
};
struct PointMass {
  double value = 0.0;
};
using NoiseLaw = std::variant<Normal, Bernoulli, DiscreteUniform, PointMass>;

/// A named exogenous variable with its prior.
class NoiseSpec {
 public:
  NoiseSpec(std::string name, NoiseLaw law);

  const std::string& name() const { return name_; }
  const NoiseLaw& law() const { return law_; }

  double draw(Stream& stream) const;

  /// (value, probability) atoms for finite laws, sorted by value; nullopt for
  /// Normal with positive variance.
  std::optional<std::vector<std::pair<double, Rational>>> atoms() const;

 private:
  std::string name_;
  NoiseLaw law_;
};

// ---------------------------------------------------------------------------
// Mechanisms

/// f(parents, noise) for one unit. `unit` lets per-unit interventions (shifts)
/// wrap a shared mechanism.
class Mechanism {
 public:
  virtual ~Mechanism() = default;

  virtual double evaluate(std::span<const double> parents, double noise,
                          std::size_t unit) const = 0;

  /// Noise value reproducing `value` given the parents; nullopt when the
  /// mechanism does not determine its noise.
  virtual std::optional<double> invert(std::span<const double> parents, double value,
                                       std::size_t unit) const = 0;

  /// Number of parents the mechanism expects, when fixed.
  virtual std::optional<std::size_t> arity() const { return std::nullopt; }

  /// Throws unless the mechanism can be evaluated for units [0, n).
  virtual void check_units(std::size_t /*n*/) const {}
};

using MechanismPtr = std::shared_ptr<const Mechanism>;

/// intercept + sum_j coefficients[j] * parent_j + noise.
MechanismPtr additive_linear(std::vector<double> coefficients, double intercept = 0.0);

/// Ignores parents and noise. Not invertible.
MechanismPtr constant_mechanism(double value);

/// User-supplied mechanism. `inverse` may be empty, in which case abduction
/// through this mechanism fails.
using MechanismFn = std::function<double(std::span<const double>, double)>;
MechanismPtr closure_mechanism(MechanismFn forward, MechanismFn inverse);

struct StructuralEquation {
  std::string target;
  std::vector<std::string> parents;
  MechanismPtr mechanism;
};

struct Variable {
  StructuralEquation equation;
  NoiseSpec noise;

  const std::string& name() const { return equation.target; }
};

// ---------------------------------------------------------------------------
// Scm

/// Acyclic structural causal model with one equation and one noise per
/// variable. Immutable after construction.
class Scm {
 public:
  explicit Scm(std::vector<Variable> variables);

  std::size_t size() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(std::size_t i) const { return variables_.at(i); }

  /// Topological order (indices into variables()); ties keep declaration order.
  const std::vector<std::size_t>& order() const { return order_; }
  const std::vector<std::size_t>& parent_indices(std::size_t i) const {
    return parent_indices_.at(i);
  }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws ScmError naming the variable when absent.
  std::size_t index_of(std::string_view name) const;

  std::vector<std::string> variable_names() const;
  std::vector<std::string> noise_names() const;
  const NoiseSpec* find_noise(std::string_view name) const;

  /// Indices of `name` and everything reachable from it.
  std::set<std::size_t> descendants(std::string_view name) const;

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<std::size_t>> parent_indices_;
  std::vector<std::size_t> order_;
};

// ---------------------------------------------------------------------------
// Interventions

struct AtomicIntervention {
  std::string variable;
  double value = 0.0;
};

/// Adds offsets[unit] to the variable's mechanism output.
struct ShiftIntervention {
  std::string variable;
  std::vector<double> offsets;
};

struct ReplaceIntervention {
  std::string variable;
  StructuralEquation equation;
  NoiseSpec noise;
};

using Intervention = std::variant<AtomicIntervention, ShiftIntervention, ReplaceIntervention>;

Intervention atomic(std::string variable, double value);
/// Offsets delta * w(i).
Intervention shift(std::string variable, double delta, std::span<const int> w);
Intervention shift_offsets(std::string variable, std::vector<double> offsets);
Intervention replace(std::string variable, StructuralEquation equation, NoiseSpec noise);

const std::string& target_of(const Intervention& intervention);

// ---------------------------------------------------------------------------
// Samples

/// Named columns of equal length.
class Table {
 public:
  Table() = default;
  Table(std::vector<std::string> names, std::vector<std::vector<double>> columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  bool contains(std::string_view name) const;
  std::span<const double> column(std::string_view name) const;
  std::span<const double> column(std::size_t j) const { return columns_.at(j); }
  double at(std::size_t row, std::string_view name) const { return column(name)[row]; }

  friend bool operator==(const Table&, const Table&) = default;

 private:
  std::size_t rows_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

/// Point posterior: one value per (unit, noise name).
using NoisePosterior = Table;

struct Sample {
  Table values;
  /// Present only for samples this library generated.
  std::optional<Table> noise;

  std::size_t n() const { return values.rows(); }
  std::span<const double> column(std::string_view name) const { return values.column(name); }
};

// ---------------------------------------------------------------------------
// Operations

/// Draws every noise from its prior on the (seed, unit, noise name) substream
/// and evaluates the equations in topological order.
Sample sample_observational(const Scm& scm, std::size_t n, std::uint64_t seed);

/// Forward-evaluates the SCM from explicit noise values; every SCM noise must
/// be a column of `noise`.
Sample simulate(const Scm& scm, const NoisePosterior& noise);

/// Returns the intervened model; `scm` is left unchanged.
Scm apply_intervention(const Scm& scm, const Intervention& intervention);

/// Recovers each unit's noise by inverting its mechanisms. Conditions on every
/// variable of the SCM.
NoisePosterior abduct(const Scm& scm, const Sample& sample);

/// Abduction, action, prediction with the point posterior.
Sample counterfactual_sample(const Scm& scm, const Sample& sample,
                             const Intervention& intervention);

/// Like counterfactual_sample, but noises named in `resample` are drawn fresh
/// from their priors in the intervened model.
Sample interventional_sample(const Scm& scm, const Sample& base, const Intervention& intervention,
                             const std::set<std::string>& resample, std::uint64_t seed);

}  // namespace forwardcf
