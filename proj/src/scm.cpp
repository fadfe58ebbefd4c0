#include "forwardcf/scm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace forwardcf {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw ScmError(what + " must be finite");
}

}  // namespace

// ---------------------------------------------------------------------------
// NoiseSpec

NoiseSpec::NoiseSpec(std::string name, NoiseLaw law) : name_(std::move(name)), law_(std::move(law)) {
  if (name_.empty()) throw ScmError("noise name must be non-empty");
  const std::string who = "noise '" + name_ + "': ";
  std::visit(Overloaded{
                 [&](const Normal& n) {
                   require_finite(n.mean, who + "mean");
                   require_finite(n.variance, who + "variance");
                   if (n.variance < 0) throw ScmError(who + "variance must be >= 0");
                 },
                 [&](const Bernoulli& b) {
                   if (!(b.p >= 0.0 && b.p <= 1.0)) throw ScmError(who + "p must lie in [0, 1]");
                 },
                 [&](const DiscreteUniform& u) {
                   if (u.support.empty()) throw ScmError(who + "support must be non-empty");
                   std::vector<double> sorted = u.support;
                   std::sort(sorted.begin(), sorted.end());
                   for (double v : sorted) require_finite(v, who + "support value");
                   if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                     throw ScmError(who + "support must be duplicate-free");
                   }
                 },
                 [&](const PointMass& p) { require_finite(p.value, who + "value"); },
             },
             law_);
}

double NoiseSpec::draw(Stream& stream) const {
  return std::visit(Overloaded{
                        [&](const Normal& n) {
                          return n.mean + std::sqrt(n.variance) * stream.standard_normal();
                        },
                        [&](const Bernoulli& b) { return stream.bernoulli(b.p) ? 1.0 : 0.0; },
                        [&](const DiscreteUniform& u) {
                          return u.support[stream.index(u.support.size())];
                        },
                        [&](const PointMass& p) { return p.value; },
                    },
                    law_);
}

std::optional<std::vector<std::pair<double, Rational>>> NoiseSpec::atoms() const {
  using Atoms = std::vector<std::pair<double, Rational>>;
  return std::visit(
      Overloaded{
          [](const Normal& n) -> std::optional<Atoms> {
            if (n.variance > 0) return std::nullopt;
            return Atoms{{n.mean, Rational(1)}};
          },
          [](const Bernoulli& b) -> std::optional<Atoms> {
            const Rational p = exact_from_double(b.p);
            Atoms atoms;
            if (p < 1) atoms.emplace_back(0.0, 1 - p);
            if (p > 0) atoms.emplace_back(1.0, p);
            return atoms;
          },
          [](const DiscreteUniform& u) -> std::optional<Atoms> {
            std::vector<double> sorted = u.support;
            std::sort(sorted.begin(), sorted.end());
            const Rational w(1, static_cast<long long>(sorted.size()));
            Atoms atoms;
            for (double v : sorted) atoms.emplace_back(v, w);
            return atoms;
          },
          [](const PointMass& p) -> std::optional<Atoms> { return Atoms{{p.value, Rational(1)}}; },
      },
      law_);
}

// ---------------------------------------------------------------------------
// Mechanisms

namespace {

class AdditiveLinear final : public Mechanism {
 public:
  AdditiveLinear(std::vector<double> coefficients, double intercept)
      : coefficients_(std::move(coefficients)), intercept_(intercept) {
    require_finite(intercept_, "intercept");
    for (double c : coefficients_) require_finite(c, "coefficient");
  }

  double evaluate(std::span<const double> parents, double noise, std::size_t) const override {
    return linear_part(parents) + noise;
  }

  std::optional<double> invert(std::span<const double> parents, double value,
                               std::size_t) const override {
    return value - linear_part(parents);
  }

  std::optional<std::size_t> arity() const override { return coefficients_.size(); }

 private:
  double linear_part(std::span<const double> parents) const {
    double acc = intercept_;
    for (std::size_t j = 0; j < coefficients_.size(); ++j) acc += coefficients_[j] * parents[j];
    return acc;
  }

  std::vector<double> coefficients_;
  double intercept_;
};

class Constant final : public Mechanism {
 public:
  explicit Constant(double value) : value_(value) {}
  double evaluate(std::span<const double>, double, std::size_t) const override { return value_; }
  std::optional<double> invert(std::span<const double>, double, std::size_t) const override {
    return std::nullopt;
  }
  std::optional<std::size_t> arity() const override { return 0; }

 private:
  double value_;
};

class Closure final : public Mechanism {
 public:
  Closure(MechanismFn forward, MechanismFn inverse)
      : forward_(std::move(forward)), inverse_(std::move(inverse)) {
    if (!forward_) throw ScmError("closure mechanism needs a forward function");
  }
  double evaluate(std::span<const double> parents, double noise, std::size_t) const override {
    return forward_(parents, noise);
  }
  std::optional<double> invert(std::span<const double> parents, double value,
                               std::size_t) const override {
    if (!inverse_) return std::nullopt;
    return inverse_(parents, value);
  }

 private:
  MechanismFn forward_;
  MechanismFn inverse_;
};

class Shifted final : public Mechanism {
 public:
  Shifted(MechanismPtr base, std::vector<double> offsets, std::string variable)
      : base_(std::move(base)), offsets_(std::move(offsets)), variable_(std::move(variable)) {}

  double evaluate(std::span<const double> parents, double noise, std::size_t unit) const override {
    return base_->evaluate(parents, noise, unit) + offsets_.at(unit);
  }
  std::optional<double> invert(std::span<const double> parents, double value,
                               std::size_t unit) const override {
    return base_->invert(parents, value - offsets_.at(unit), unit);
  }
  std::optional<std::size_t> arity() const override { return base_->arity(); }
  void check_units(std::size_t n) const override {
    if (offsets_.size() != n) {
      throw ScmError("shift on '" + variable_ + "' has " + std::to_string(offsets_.size()) +
                     " offsets but is applied to " + std::to_string(n) + " units");
    }
    base_->check_units(n);
  }

 private:
  MechanismPtr base_;
  std::vector<double> offsets_;
  std::string variable_;
};

}  // namespace

MechanismPtr additive_linear(std::vector<double> coefficients, double intercept) {
  return std::make_shared<AdditiveLinear>(std::move(coefficients), intercept);
}

MechanismPtr constant_mechanism(double value) {
  require_finite(value, "constant");
  return std::make_shared<Constant>(value);
}

MechanismPtr closure_mechanism(MechanismFn forward, MechanismFn inverse) {
  return std::make_shared<Closure>(std::move(forward), std::move(inverse));
}

// ---------------------------------------------------------------------------
// Scm

Scm::Scm(std::vector<Variable> variables) : variables_(std::move(variables)) {
  std::map<std::string, std::size_t, std::less<>> index;
  std::set<std::string, std::less<>> noise_names;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const auto& eq = variables_[i].equation;
    if (eq.target.empty()) throw ScmError("variable name must be non-empty");
    if (!eq.mechanism) throw ScmError("variable '" + eq.target + "' has no mechanism");
    if (!index.emplace(eq.target, i).second) {
      throw ScmError("variable '" + eq.target + "' is declared twice");
    }
    if (!noise_names.insert(variables_[i].noise.name()).second) {
      throw ScmError("noise '" + variables_[i].noise.name() + "' is declared twice");
    }
  }

  parent_indices_.resize(variables_.size());
  std::vector<std::vector<std::size_t>> children(variables_.size());
  std::vector<std::size_t> in_degree(variables_.size(), 0);
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const auto& eq = variables_[i].equation;
    if (auto arity = eq.mechanism->arity(); arity && *arity != eq.parents.size()) {
      throw ScmError("variable '" + eq.target + "' has " + std::to_string(eq.parents.size()) +
                     " parents but its mechanism expects " + std::to_string(*arity));
    }
    std::set<std::string_view> seen;
    for (const auto& parent : eq.parents) {
      if (parent == eq.target) throw ScmError("variable '" + eq.target + "' is its own parent");
      auto it = index.find(parent);
      if (it == index.end()) {
        throw ScmError("variable '" + eq.target + "' has unknown parent '" + parent + "'");
      }
      if (!seen.insert(parent).second) {
        throw ScmError("variable '" + eq.target + "' lists parent '" + parent + "' twice");
      }
      parent_indices_[i].push_back(it->second);
      children[it->second].push_back(i);
      ++in_degree[i];
    }
  }

  // Kahn's algorithm; the min-heap keeps ties in declaration order.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (in_degree[i] == 0) ready.push(i);
  }
  while (!ready.empty()) {
    const std::size_t i = ready.top();
    ready.pop();
    order_.push_back(i);
    for (std::size_t c : children[i]) {
      if (--in_degree[c] == 0) ready.push(c);
    }
  }
  if (order_.size() != variables_.size()) throw ScmError("structural equations form a cycle");
}

std::optional<std::size_t> Scm::find(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name() == name) return i;
  }
  return std::nullopt;
}

std::size_t Scm::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw ScmError("unknown variable '" + std::string(name) + "'");
}

std::vector<std::string> Scm::variable_names() const {
  std::vector<std::string> names;
  for (const auto& v : variables_) names.push_back(v.name());
  return names;
}

std::vector<std::string> Scm::noise_names() const {
  std::vector<std::string> names;
  for (const auto& v : variables_) names.push_back(v.noise.name());
  return names;
}

const NoiseSpec* Scm::find_noise(std::string_view name) const {
  for (const auto& v : variables_) {
    if (v.noise.name() == name) return &v.noise;
  }
  return nullptr;
}

std::set<std::size_t> Scm::descendants(std::string_view name) const {
  std::set<std::size_t> reached{index_of(name)};
  for (std::size_t i : order_) {
    for (std::size_t p : parent_indices_[i]) {
      if (reached.count(p)) {
        reached.insert(i);
        break;
      }
    }
  }
  return reached;
}

// ---------------------------------------------------------------------------
// Interventions

Intervention atomic(std::string variable, double value) {
  return AtomicIntervention{std::move(variable), value};
}

Intervention shift(std::string variable, double delta, std::span<const int> w) {
  std::vector<double> offsets;
  offsets.reserve(w.size());
  for (int wi : w) {
    if (wi != 0 && wi != 1) throw ScmError("treatment indicators must be 0 or 1");
    offsets.push_back(delta * wi);
  }
  return ShiftIntervention{std::move(variable), std::move(offsets)};
}

Intervention shift_offsets(std::string variable, std::vector<double> offsets) {
  for (double o : offsets) require_finite(o, "shift offset");
  return ShiftIntervention{std::move(variable), std::move(offsets)};
}

Intervention replace(std::string variable, StructuralEquation equation, NoiseSpec noise) {
  return ReplaceIntervention{std::move(variable), std::move(equation), std::move(noise)};
}

const std::string& target_of(const Intervention& intervention) {
  return std::visit([](const auto& i) -> const std::string& { return i.variable; }, intervention);
}

Scm apply_intervention(const Scm& scm, const Intervention& intervention) {
  const std::size_t target = scm.index_of(target_of(intervention));
  std::vector<Variable> variables = scm.variables();
  Variable& v = variables[target];
  std::visit(Overloaded{
                 [&](const AtomicIntervention& a) {
                   v.equation.parents.clear();
                   v.equation.mechanism = constant_mechanism(a.value);
                   v.noise = NoiseSpec(v.noise.name(), PointMass{0.0});
                 },
                 [&](const ShiftIntervention& s) {
                   v.equation.mechanism =
                       std::make_shared<Shifted>(v.equation.mechanism, s.offsets, s.variable);
                 },
                 [&](const ReplaceIntervention& r) {
                   if (r.equation.target != r.variable) {
                     throw ScmError("replacement equation targets '" + r.equation.target +
                                    "' but the intervention targets '" + r.variable + "'");
                   }
                   v.equation = r.equation;
                   v.noise = r.noise;
                 },
             },
             intervention);
  return Scm(std::move(variables));
}

// ---------------------------------------------------------------------------
// Tables

Table::Table(std::vector<std::string> names, std::vector<std::vector<double>> columns)
    : names_(std::move(names)), columns_(std::move(columns)) {
  if (names_.size() != columns_.size()) throw ScmError("table: names and columns differ in count");
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  std::set<std::string_view> seen;
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (!seen.insert(names_[j]).second) throw ScmError("table: duplicate column '" + names_[j] + "'");
    if (columns_[j].size() != rows_) {
      throw ScmError("table: column '" + names_[j] + "' has " + std::to_string(columns_[j].size()) +
                     " rows, expected " + std::to_string(rows_));
    }
  }
}

bool Table::contains(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::span<const double> Table::column(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ScmError("no column '" + std::string(name) + "'");
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

// ---------------------------------------------------------------------------
// Sampling, abduction, counterfactuals

namespace {

Sample forward(const Scm& scm, std::vector<std::vector<double>> noise_columns, std::size_t n) {
  for (const auto& v : scm.variables()) v.equation.mechanism->check_units(n);
  std::vector<std::vector<double>> values(scm.size(), std::vector<double>(n));
  std::vector<double> parents;
  for (std::size_t unit = 0; unit < n; ++unit) {
    for (std::size_t i : scm.order()) {
      parents.clear();
      for (std::size_t p : scm.parent_indices(i)) parents.push_back(values[p][unit]);
      values[i][unit] =
          scm.variable(i).equation.mechanism->evaluate(parents, noise_columns[i][unit], unit);
    }
  }
  return Sample{Table(scm.variable_names(), std::move(values)),
                Table(scm.noise_names(), std::move(noise_columns))};
}

}  // namespace

Sample sample_observational(const Scm& scm, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ScmError("sample_observational: n must be >= 1");
  std::vector<std::vector<double>> noise(scm.size(), std::vector<double>(n));
  for (std::size_t i = 0; i < scm.size(); ++i) {
    const NoiseSpec& spec = scm.variable(i).noise;
    for (std::size_t unit = 0; unit < n; ++unit) {
      Stream stream(seed, unit, spec.name());
      noise[i][unit] = spec.draw(stream);
    }
  }
  return forward(scm, std::move(noise), n);
}

Sample simulate(const Scm& scm, const NoisePosterior& noise) {
  std::vector<std::vector<double>> columns;
  for (const auto& v : scm.variables()) {
    auto col = noise.column(v.noise.name());
    columns.emplace_back(col.begin(), col.end());
  }
  return forward(scm, std::move(columns), noise.rows());
}

NoisePosterior abduct(const Scm& scm, const Sample& sample) {
  const std::size_t n = sample.n();
  std::vector<std::span<const double>> observed;
  for (const auto& v : scm.variables()) {
    if (!sample.values.contains(v.name())) {
      throw AbductionError("abduction requires every variable to be observed; missing '" +
                           v.name() + "'");
    }
    observed.push_back(sample.column(v.name()));
    v.equation.mechanism->check_units(n);
  }
  std::vector<std::vector<double>> noise(scm.size(), std::vector<double>(n));
  std::vector<double> parents;
  for (std::size_t unit = 0; unit < n; ++unit) {
    for (std::size_t i : scm.order()) {
      parents.clear();
      for (std::size_t p : scm.parent_indices(i)) parents.push_back(observed[p][unit]);
      auto u = scm.variable(i).equation.mechanism->invert(parents, observed[i][unit], unit);
      if (!u) {
        throw AbductionError("abduction requires invertible mechanisms ('" +
                             scm.variable(i).name() + "' is not)");
      }
      noise[i][unit] = *u;
    }
  }
  return Table(scm.noise_names(), std::move(noise));
}

Sample interventional_sample(const Scm& scm, const Sample& base, const Intervention& intervention,
                             const std::set<std::string>& resample, std::uint64_t seed) {
  const NoisePosterior posterior = abduct(scm, base);
  const Scm intervened = apply_intervention(scm, intervention);
  for (const auto& name : resample) {
    if (!intervened.find_noise(name)) throw ScmError("unknown noise '" + name + "'");
  }
  const std::size_t n = base.n();
  std::vector<std::vector<double>> noise;
  for (const auto& v : intervened.variables()) {
    const std::string& name = v.noise.name();
    if (resample.count(name)) {
      std::vector<double> col(n);
      for (std::size_t unit = 0; unit < n; ++unit) {
        Stream stream(seed, unit, name);
        col[unit] = v.noise.draw(stream);
      }
      noise.push_back(std::move(col));
    } else if (posterior.contains(name)) {
      auto col = posterior.column(name);
      noise.emplace_back(col.begin(), col.end());
    } else if (const auto* pm = std::get_if<PointMass>(&v.noise.law())) {
      noise.emplace_back(n, pm->value);
    } else {
      throw ScmError("noise '" + name + "' has no posterior value; add it to the resample set");
    }
  }
  return forward(intervened, std::move(noise), n);
}

Sample counterfactual_sample(const Scm& scm, const Sample& sample,
                             const Intervention& intervention) {
  return interventional_sample(scm, sample, intervention, {}, 0);
}

}  // namespace forwardcf
