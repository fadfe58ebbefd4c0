#include "forwardcf/welfare.hpp"

namespace forwardcf {

WelfareValue WelfareValue::from_exact(Rational r) {
  const double approx = to_double(r);
  return WelfareValue{std::move(r), approx};
}

bool operator<(const WelfareValue& a, const WelfareValue& b) {
  if (a.exact && b.exact) return *a.exact < *b.exact;
  return a.approx < b.approx;
}

bool operator==(const WelfareValue& a, const WelfareValue& b) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  return a.approx == b.approx;
}

WelfareValue gini_welfare(const StepCdf& cdf) {
  const auto& y = cdf.support();
  const auto& cum = cdf.cum();
  if (y.front() < 0) throw WelfareError("Gini integral defined on [0,inf): support has negative values");
  // (1 - P)^2 is 1 on [0, y_1), (1 - cum_j)^2 on [y_j, y_{j+1}) and 0 past y_k.
  Rational total = exact_from_double(y.front());
  for (std::size_t j = 0; j + 1 < y.size(); ++j) {
    const Rational tail = 1 - cum[j];
    total += tail * tail * (exact_from_double(y[j + 1]) - exact_from_double(y[j]));
  }
  return WelfareValue::from_exact(std::move(total));
}

WelfareFunctional parse_welfare_functional(std::string_view name) {
  if (name == "gini") return WelfareFunctional::Gini;
  if (name == "mean") return WelfareFunctional::Mean;
  if (name == "neg_variance") return WelfareFunctional::NegVariance;
  throw WelfareError("unknown welfare functional '" + std::string(name) +
                     "'; supported: gini, mean, neg_variance");
}

std::string_view to_string(WelfareFunctional f) {
  switch (f) {
    case WelfareFunctional::Gini:
      return "gini";
    case WelfareFunctional::Mean:
      return "mean";
    case WelfareFunctional::NegVariance:
      return "neg_variance";
  }
  return "?";
}

WelfareValue welfare_functional(WelfareFunctional f, const StepCdf& cdf) {
  switch (f) {
    case WelfareFunctional::Gini:
      return gini_welfare(cdf);
    case WelfareFunctional::Mean:
      return WelfareValue::from_exact(cdf.mean());
    case WelfareFunctional::NegVariance:
      return WelfareValue::from_exact(-cdf.variance());
  }
  throw WelfareError("unhandled welfare functional");
}

WelfareValue welfare_functional(WelfareFunctional f, const EmpiricalDist& sample) {
  return welfare_functional(f, ecdf(sample));
}

WelfareValue welfare_functional(std::string_view name, const StepCdf& cdf) {
  return welfare_functional(parse_welfare_functional(name), cdf);
}

WelfareValue welfare_functional(std::string_view name, const EmpiricalDist& sample) {
  return welfare_functional(parse_welfare_functional(name), sample);
}

}  // namespace forwardcf
