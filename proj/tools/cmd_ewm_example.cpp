#include "commands.hpp"
#include "config.hpp"

#include "forwardcf/models.hpp"
#include "forwardcf/policy.hpp"
#include "forwardcf/welfare.hpp"

#include <iomanip>
#include <sstream>

namespace forwardcf::cli {

namespace {

struct Check {
  std::string name;
  Rational got;
  Rational expected;
};

BigInt common_denominator(const StepCdf& cdf) {
  BigInt d = 1;
  for (const auto& c : cdf.cum()) d = lcm(d, boost::multiprecision::denominator(c));
  return d;
}

std::string describe(const StepCdf& cdf) {
  const BigInt d = common_denominator(cdf);
  std::ostringstream s;
  for (std::size_t j = 0; j < cdf.steps(); ++j) {
    if (j) s << ", ";
    const Rational& c = cdf.cum()[j];
    s << "P(" << format_decimal(cdf.support()[j]) << ") = " << (c == 1 ? "1" : format_over(c, d));
  }
  return s.str();
}

std::string fraction(const WelfareValue& w, const BigInt& denominator) {
  std::string s = format_over(*w.exact, denominator);
  if (boost::multiprecision::denominator(*w.exact) == 1) {
    s += " = " + to_fraction_string(*w.exact);
  } else {
    s += " = " + format_decimal(w.approx);
  }
  return s;
}

}  // namespace

nlohmann::json ewm_example_defaults() {
  return {{"out", nullptr}, {"threads", 1}, {"seed", 0}, {"svg", false}};
}

int run_ewm_example(const nlohmann::json& cfg, std::ostream& out) {
  const unsigned threads = cfg.at("threads").get<unsigned>();
  const Scm scm = models::welfare_example();
  const Sample units = models::welfare_example_units();
  const auto treatment = TreatmentTemplate::atomic("Z", "Y", 0.0, 1.0);
  const BigInt ewm_den = 36;
  const BigInt cf_den = BigInt(units.n()) * units.n();
  std::vector<Check> checks;

  // unit table
  const NoisePosterior noise = abduct(scm, units);
  const PotentialOutcomes po = potential_outcomes(scm, units, treatment);
  out << "Units: observed values, abducted noise and potential outcomes\n";
  out << std::left;
  for (const char* h : {"unit", "X", "Z", "Y", "U_X", "U_Z", "U_Y", "Y(0)", "Y(1)"}) {
    out << std::setw(6) << h;
  }
  out << '\n';
  const double expected_uy[] = {1, 2, 0, 1};
  const double expected_y0[] = {1, 2, 1, 2};
  const double expected_y1[] = {2, 3, 2, 3};
  for (std::size_t i = 0; i < units.n(); ++i) {
    out << std::setw(6) << i + 1;
    for (const char* v : {"X", "Z", "Y"}) out << std::setw(6) << format_decimal(units.values.at(i, v));
    for (const char* u : {"U_X", "U_Z", "U_Y"}) out << std::setw(6) << format_decimal(noise.at(i, u));
    out << std::setw(6) << format_decimal(po.control[i]) << std::setw(6) << format_decimal(po.treated[i])
        << '\n';
    const std::string unit = "unit " + std::to_string(i + 1);
    checks.push_back({unit + " U_X", exact_from_double(noise.at(i, "U_X")),
                      exact_from_double(units.values.at(i, "X"))});
    checks.push_back({unit + " U_Z", exact_from_double(noise.at(i, "U_Z")), 0});
    checks.push_back({unit + " U_Y", exact_from_double(noise.at(i, "U_Y")),
                      exact_from_double(expected_uy[i])});
    checks.push_back({unit + " Y(0)", exact_from_double(po.control[i]), exact_from_double(expected_y0[i])});
    checks.push_back({unit + " Y(1)", exact_from_double(po.treated[i]), exact_from_double(expected_y1[i])});
  }
  out << std::right;

  // Interventional (EWM) side
  out << "\nEWM: population post-treatment CDFs over decision sets of X\n";
  struct Named {
    std::string name;
    DecisionSetPolicy g;
    Rational expected;
  };
  const std::vector<Named> policies = {
      {"G_empty", {{}}, Rational(35, 36)},
      {"G_0", {{0.0}}, Rational(56, 36)},
      {"G_1", {{1.0}}, Rational(46, 36)},
  };
  std::vector<DecisionSetPolicy> feasible;
  for (const auto& p : policies) {
    const StepCdf cdf = ewm_post_treatment_cdf(scm, units, "X", treatment, p.g);
    const WelfareValue w = gini_welfare(cdf);
    out << "  " << p.name << " = " << p.g.label() << ": " << describe(cdf) << '\n';
    out << "  W(" << p.name << ") = " << fraction(w, ewm_den) << '\n';
    checks.push_back({"W(" + p.name + ")", *w.exact, p.expected});
    feasible.push_back(p.g);
  }
  const EwmResult ewm = ewm_optimize(scm, units, "X", treatment, feasible, WelfareFunctional::Gini);
  out << "G*_EWM = " << policies[ewm.index].name << ", W = " << fraction(ewm.welfare, ewm_den) << '\n';
  checks.push_back({"index of G*_EWM", ewm.index, 1});

  // Counterfactual side
  out << "\nCF: post-treatment CDFs of the observed sample under unit assignments\n";
  const UnitAssignment ewm_as_units = assignment_from_decision_set(units, "X", ewm.policy);
  const UnitAssignment alternative({1, 0, 1, 0});
  for (const auto& [w, expected] : {std::pair{ewm_as_units, Rational(26, 16)},
                                    std::pair{alternative, Rational(32, 16)}}) {
    const StepCdf cdf = cf_post_treatment_cdf(po, w);
    const WelfareValue value = gini_welfare(cdf);
    out << "  " << w.label() << ": " << describe(cdf) << '\n';
    out << "  W_cf(" << w.label() << ") = " << fraction(value, cf_den) << '\n';
    checks.push_back({"W_cf(" + w.label() + ")", *value.exact, expected});
  }
  out << "  G*_EWM as a unit assignment: " << ewm_as_units.label() << '\n';

  const Budget budget{2};
  const CfResult cf = cf_optimize(po, budget, WelfareFunctional::Gini, SearchMode::Exhaustive, threads);
  const WelfareValue ewm_cf_value = gini_welfare(cf_post_treatment_cdf(po, ewm_as_units));
  out << "G*_CF (exhaustive, budget " << budget.max_treated << ", "
      << assignment_count(units.n(), budget.max_treated) << " assignments) = " << cf.assignment.label()
      << ", W = " << fraction(cf.welfare, cf_den) << '\n';
  checks.push_back({"W(G*_CF)", *cf.welfare.exact, 2});
  checks.push_back({"assignments enumerated", assignment_count(units.n(), budget.max_treated), 11});
  checks.push_back({"G*_CF is [1,0,1,0]", cf.assignment.label() == "[1,0,1,0]" ? 1 : 0, 1});
  const bool dominates = ewm_cf_value < cf.welfare;
  out << "W(G*_CF) = " << to_fraction_string(*cf.welfare.exact) << (dominates ? " > " : " <= ")
      << format_over(*ewm_cf_value.exact, cf_den) << " = W_cf(G*_EWM)\n";
  checks.push_back({"W(G*_CF) > W_cf(G*_EWM)", dominates ? 1 : 0, 1});

  if (!cfg.at("out").is_null()) {
    const std::filesystem::path dir = cfg.at("out").get<std::string>();
    prepare_output_dir(dir);
    for (const auto& p : policies) {
      write_file(dir / ("ewm_cdf_" + p.name + ".csv"), [&](std::ostream& f) {
        write_cdf_csv(f, ewm_post_treatment_cdf(scm, units, "X", treatment, p.g));
      });
    }
    write_file(dir / "cf_optimum.json", [&](std::ostream& f) { f << to_json(cf).dump(2) << '\n'; });
    write_file(dir / "config.json", [&](std::ostream& f) { f << cfg.dump(2) << '\n'; });
  }

  std::size_t failed = 0;
  for (const auto& c : checks) {
    if (c.got != c.expected) {
      ++failed;
      out << "MISMATCH " << c.name << ": got " << to_fraction_string(c.got) << ", expected "
          << to_fraction_string(c.expected) << '\n';
    }
  }
  out << "\n" << checks.size() - failed << "/" << checks.size() << " exact checks passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace forwardcf::cli
