#pragma once

#include "forwardcf/policy.hpp"
#include "forwardcf/rng.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace forwardcf::testing {

/// Small discrete model X -> Y <- Z with an additive treatment effect on Y,
/// observed on at most 12 units.
struct DiscreteInstance {
  Scm scm;
  Sample sample;
  Budget budget;
  std::string description;
};

inline DiscreteInstance random_instance(std::uint64_t seed) {
  Stream s(seed, 0, "instance");
  const double effect = static_cast<double>(s.index(7)) - 3.0;  // -3 .. 3
  const double slope = static_cast<double>(s.index(3));
  const double intercept = std::max(0.0, -effect);
  std::vector<double> x_support{0, 1};
  if (s.index(2)) x_support.push_back(2);
  std::vector<double> u_support;
  for (std::size_t k = 0, m = 2 + s.index(3); k < m; ++k) u_support.push_back(static_cast<double>(k * (1 + s.index(2))));
  std::sort(u_support.begin(), u_support.end());
  u_support.erase(std::unique(u_support.begin(), u_support.end()), u_support.end());

  Scm scm({
      Variable{{"X", {}, additive_linear({})}, NoiseSpec("U_X", DiscreteUniform{x_support})},
      Variable{{"Z", {}, additive_linear({})}, NoiseSpec("U_Z", Bernoulli{0.5})},
      Variable{{"Y", {"X", "Z"}, additive_linear({slope, effect}, intercept)},
               NoiseSpec("U_Y", DiscreteUniform{u_support})},
  });
  const std::size_t n = 2 + s.index(11);  // 2 .. 12
  Sample sample = sample_observational(scm, n, seed);
  const Budget budget{std::min<std::size_t>(n, s.index(5))};  // 0 .. 4
  std::string d = "seed=" + std::to_string(seed) + " n=" + std::to_string(n) + " budget=" +
                  std::to_string(budget.max_treated) + " effect=" + format_decimal(effect) +
                  " slope=" + format_decimal(slope);
  return {std::move(scm), std::move(sample), budget, std::move(d)};
}

/// Every subset of the observed covariate values.
inline std::vector<DecisionSetPolicy> all_decision_sets(const Sample& sample, const std::string& covariate) {
  std::set<double> values(sample.column(covariate).begin(), sample.column(covariate).end());
  const std::vector<double> v(values.begin(), values.end());
  std::vector<DecisionSetPolicy> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << v.size()); ++mask) {
    DecisionSetPolicy g;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (mask >> j & 1) g.decision_set.insert(v[j]);
    }
    out.push_back(g);
  }
  return out;
}

}  // namespace forwardcf::testing
