#pragma once

#include "forwardcf/distributions.hpp"
#include "forwardcf/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace forwardcf {

class WelfareError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct WelfareValue {
  std::optional<Rational> exact;
  double approx = 0.0;

  static WelfareValue from_exact(Rational r);
};

/// Strict ordering; compares exactly when both sides carry an exact value.
bool operator<(const WelfareValue& a, const WelfareValue& b);
bool operator==(const WelfareValue& a, const WelfareValue& b);

/// W(P) = integral over [0, inf) of (1 - P(y))^2 dy, evaluated in closed form
/// over the steps of P. Throws WelfareError when the support has negative
/// values.
WelfareValue gini_welfare(const StepCdf& cdf);

enum class WelfareFunctional { Gini, Mean, NegVariance };

/// "gini", "mean" or "neg_variance"; anything else throws listing the options.
WelfareFunctional parse_welfare_functional(std::string_view name);
std::string_view to_string(WelfareFunctional f);

WelfareValue welfare_functional(WelfareFunctional f, const StepCdf& cdf);
WelfareValue welfare_functional(WelfareFunctional f, const EmpiricalDist& sample);
WelfareValue welfare_functional(std::string_view name, const StepCdf& cdf);
WelfareValue welfare_functional(std::string_view name, const EmpiricalDist& sample);

}  // namespace forwardcf
