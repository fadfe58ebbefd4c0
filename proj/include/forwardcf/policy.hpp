#pragma once

#include "forwardcf/distributions.hpp"
#include "forwardcf/scm.hpp"
#include "forwardcf/welfare.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace forwardcf {

class PolicyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Treat every unit whose covariate value lies in the set.
struct DecisionSetPolicy {
  std::set<double> decision_set;

  bool contains(double x) const { return decision_set.count(x) > 0; }
  /// "{}" or "{0,1}".
  std::string label() const;
};

/// Binary per-unit treatment vector.
struct UnitAssignment {
  std::vector<int> w;

  explicit UnitAssignment(std::vector<int> w);
  static UnitAssignment none(std::size_t n) { return UnitAssignment(std::vector<int>(n, 0)); }

  std::size_t size() const { return w.size(); }
  std::size_t treated() const;
  /// "[1,0,1,0]".
  std::string label() const;
};

struct Budget {
  std::size_t max_treated = 0;
};

/// How "treated" and "control" act on the treatment variable.
struct TreatmentTemplate {
  enum class Kind { Atomic, Shift };

  Kind kind = Kind::Atomic;
  std::string treatment = "Z";
  std::string outcome = "Y";
  double control_value = 0.0;  // Atomic
  double treated_value = 1.0;  // Atomic
  double delta = 1.0;          // Shift

  static TreatmentTemplate atomic(std::string treatment, std::string outcome,
                                  double control_value = 0.0, double treated_value = 1.0);
  static TreatmentTemplate shift(std::string treatment, std::string outcome, double delta);

  /// The intervention applying one arm to all `n` units.
  Intervention arm(bool treated, std::size_t n) const;
};

// ---------------------------------------------------------------------------
// Interventional (EWM) side

/// Population CDF of the outcome when units with covariate in G are treated:
///   P_G(y) = sum_x P(X = x) [P_{Y(1)|X=x}(y) 1{x in G} + P_{Y(0)|X=x}(y) 1{x not in G}].
/// Computed exactly by enumerating the joint noise support; throws PolicyError
/// when any noise is continuous. `sample` supplies the observed covariate
/// domain, which must contain G.
StepCdf ewm_post_treatment_cdf(const Scm& scm, const Sample& sample, const std::string& covariate,
                               const TreatmentTemplate& treatment, const DecisionSetPolicy& g);

/// Monte Carlo version for models with continuous noise: ECDF of `draws`
/// simulated units.
StepCdf ewm_post_treatment_cdf_mc(const Scm& scm, const std::string& covariate,
                                  const TreatmentTemplate& treatment, const DecisionSetPolicy& g,
                                  std::size_t draws = 100000, std::uint64_t seed = 0);

struct EwmResult {
  DecisionSetPolicy policy;
  WelfareValue welfare;
  std::size_t index = 0;  // position in the feasible list
};

/// Argmax of welfare over `feasible`; ties go to the earliest entry.
EwmResult ewm_optimize(const Scm& scm, const Sample& sample, const std::string& covariate,
                       const TreatmentTemplate& treatment,
                       const std::vector<DecisionSetPolicy>& feasible, WelfareFunctional welfare);

/// Unit assignment induced by a decision set on an observed sample.
UnitAssignment assignment_from_decision_set(const Sample& sample, const std::string& covariate,
                                            const DecisionSetPolicy& g);

// ---------------------------------------------------------------------------
// Counterfactual (CF) side

/// Per-unit counterfactual outcomes under the control and treated arms.
struct PotentialOutcomes {
  std::vector<double> control;
  std::vector<double> treated;

  std::size_t size() const { return control.size(); }
  std::vector<double> select(const UnitAssignment& w) const;
};

PotentialOutcomes potential_outcomes(const Scm& scm, const Sample& sample,
                                     const TreatmentTemplate& treatment);

/// Uniform mixture of the per-unit counterfactual point masses under w.
StepCdf cf_post_treatment_cdf(const Scm& scm, const Sample& sample, const UnitAssignment& w,
                              const TreatmentTemplate& treatment);
StepCdf cf_post_treatment_cdf(const PotentialOutcomes& outcomes, const UnitAssignment& w);

enum class SearchMode { Exhaustive, Greedy };
SearchMode parse_search_mode(std::string_view name);
std::string_view to_string(SearchMode mode);

/// Largest number of assignments exhaustive search will enumerate.
inline constexpr std::uint64_t kExhaustiveGuard = 10'000'000;

/// Number of assignments with at most `budget` treated units (saturates).
std::uint64_t assignment_count(std::size_t n, std::size_t budget);

struct CfResult {
  UnitAssignment assignment;
  WelfareValue welfare;
  SearchMode mode = SearchMode::Exhaustive;
  Budget budget;
  WelfareFunctional functional = WelfareFunctional::Gini;
};

/// {assignment, welfare_exact, welfare_float, mode, budget, welfare_functional}
nlohmann::json to_json(const CfResult& result);

/// Best assignment with at most budget.max_treated units.
///
/// Exhaustive mode enumerates every feasible assignment (guarded by
/// kExhaustiveGuard). Greedy mode adds the unit with the largest welfare gain
/// until the budget is spent or no unit improves welfare; it is a heuristic.
/// Ties prefer fewer treated units, then the lexicographically smallest list
/// of treated unit indices (lowest unit index first). Results do not depend
/// on `threads`.
CfResult cf_optimize(const PotentialOutcomes& outcomes, Budget budget, WelfareFunctional welfare,
                     SearchMode mode, unsigned threads = 1);
CfResult cf_optimize(const Scm& scm, const Sample& sample, const TreatmentTemplate& treatment,
                     Budget budget, WelfareFunctional welfare, SearchMode mode,
                     unsigned threads = 1);

}  // namespace forwardcf
