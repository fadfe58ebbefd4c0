#include "forwardcf/policy.hpp"

#include "forwardcf/parallel.hpp"

#include <algorithm>
#include <limits>

namespace forwardcf {

std::string DecisionSetPolicy::label() const {
  std::string out = "{";
  bool first = true;
  for (double x : decision_set) {
    if (!first) out += ",";
    out += format_decimal(x);
    first = false;
  }
  return out + "}";
}

UnitAssignment::UnitAssignment(std::vector<int> w_) : w(std::move(w_)) {
  for (int wi : w) {
    if (wi != 0 && wi != 1) throw PolicyError("unit assignments must be 0 or 1");
  }
}

std::size_t UnitAssignment::treated() const {
  return static_cast<std::size_t>(std::count(w.begin(), w.end(), 1));
}

std::string UnitAssignment::label() const {
  std::string out = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(w[i]);
  }
  return out + "]";
}

TreatmentTemplate TreatmentTemplate::atomic(std::string treatment, std::string outcome,
                                            double control_value, double treated_value) {
  TreatmentTemplate t;
  t.kind = Kind::Atomic;
  t.treatment = std::move(treatment);
  t.outcome = std::move(outcome);
  t.control_value = control_value;
  t.treated_value = treated_value;
  return t;
}

TreatmentTemplate TreatmentTemplate::shift(std::string treatment, std::string outcome,
                                           double delta) {
  TreatmentTemplate t;
  t.kind = Kind::Shift;
  t.treatment = std::move(treatment);
  t.outcome = std::move(outcome);
  t.delta = delta;
  return t;
}

Intervention TreatmentTemplate::arm(bool treated, std::size_t n) const {
  if (kind == Kind::Atomic) return forwardcf::atomic(treatment, treated ? treated_value : control_value);
  return shift_offsets(treatment, std::vector<double>(n, treated ? delta : 0.0));
}

// ---------------------------------------------------------------------------
// EWM

namespace {

void check_decision_set(const Sample& sample, const std::string& covariate,
                        const DecisionSetPolicy& g) {
  const auto column = sample.column(covariate);
  for (double x : g.decision_set) {
    if (std::find(column.begin(), column.end(), x) == column.end()) {
      throw PolicyError("decision set value " + format_decimal(x) + " is not an observed value of '" +
                        covariate + "'");
    }
  }
}

constexpr std::size_t kMaxEnumeratedAtoms = 1'000'000;

}  // namespace

StepCdf ewm_post_treatment_cdf(const Scm& scm, const Sample& sample, const std::string& covariate,
                               const TreatmentTemplate& treatment, const DecisionSetPolicy& g) {
  scm.index_of(covariate);
  scm.index_of(treatment.outcome);
  check_decision_set(sample, covariate, g);

  std::vector<std::vector<std::pair<double, Rational>>> atoms;
  std::size_t combos = 1;
  for (const auto& v : scm.variables()) {
    auto a = v.noise.atoms();
    if (!a) {
      throw PolicyError("exact EWM distribution needs finite noise supports; noise '" +
                        v.noise.name() + "' is continuous (use ewm_post_treatment_cdf_mc)");
    }
    combos *= a->size();
    if (combos > kMaxEnumeratedAtoms) throw PolicyError("joint noise support too large to enumerate");
    atoms.push_back(std::move(*a));
  }

  const Scm control = apply_intervention(scm, treatment.arm(false, 1));
  const Scm treated = apply_intervention(scm, treatment.arm(true, 1));
  const auto names = scm.noise_names();

  std::vector<std::pair<double, Rational>> outcome_atoms;
  outcome_atoms.reserve(combos);
  std::vector<std::size_t> digit(atoms.size(), 0);
  for (std::size_t c = 0; c < combos; ++c) {
    Rational prob = 1;
    std::vector<std::vector<double>> columns;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      prob *= atoms[i][digit[i]].second;
      columns.push_back({atoms[i][digit[i]].first});
    }
    const Table noise(names, std::move(columns));
    const double x = simulate(scm, noise).values.at(0, covariate);
    const Scm& arm = g.contains(x) ? treated : control;
    outcome_atoms.emplace_back(simulate(arm, noise).values.at(0, treatment.outcome), prob);

    for (std::size_t i = atoms.size(); i-- > 0;) {
      if (++digit[i] < atoms[i].size()) break;
      digit[i] = 0;
    }
  }
  return StepCdf::from_atoms(std::move(outcome_atoms));
}

StepCdf ewm_post_treatment_cdf_mc(const Scm& scm, const std::string& covariate,
                                  const TreatmentTemplate& treatment, const DecisionSetPolicy& g,
                                  std::size_t draws, std::uint64_t seed) {
  const Sample population = sample_observational(scm, draws, seed);
  const auto x = population.column(covariate);
  std::vector<int> w(draws);
  for (std::size_t i = 0; i < draws; ++i) w[i] = g.contains(x[i]) ? 1 : 0;
  const Sample control = simulate(apply_intervention(scm, treatment.arm(false, draws)), *population.noise);
  const Sample treated = simulate(apply_intervention(scm, treatment.arm(true, draws)), *population.noise);
  const auto y0 = control.column(treatment.outcome);
  const auto y1 = treated.column(treatment.outcome);
  std::vector<double> y(draws);
  for (std::size_t i = 0; i < draws; ++i) y[i] = w[i] ? y1[i] : y0[i];
  return mixture_of_pointmasses(y);
}

EwmResult ewm_optimize(const Scm& scm, const Sample& sample, const std::string& covariate,
                       const TreatmentTemplate& treatment,
                       const std::vector<DecisionSetPolicy>& feasible, WelfareFunctional welfare) {
  if (feasible.empty()) throw PolicyError("ewm_optimize: feasible set is empty");
  std::optional<EwmResult> best;
  for (std::size_t k = 0; k < feasible.size(); ++k) {
    WelfareValue value = welfare_functional(
        welfare, ewm_post_treatment_cdf(scm, sample, covariate, treatment, feasible[k]));
    if (!best || best->welfare < value) best = EwmResult{feasible[k], std::move(value), k};
  }
  return *best;
}

UnitAssignment assignment_from_decision_set(const Sample& sample, const std::string& covariate,
                                            const DecisionSetPolicy& g) {
  const auto x = sample.column(covariate);
  std::vector<int> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = g.contains(x[i]) ? 1 : 0;
  return UnitAssignment(std::move(w));
}

// ---------------------------------------------------------------------------
// CF

std::vector<double> PotentialOutcomes::select(const UnitAssignment& w) const {
  if (w.size() != size()) {
    throw PolicyError("assignment has " + std::to_string(w.size()) + " entries for " +
                      std::to_string(size()) + " units");
  }
  std::vector<double> y(size());
  for (std::size_t i = 0; i < size(); ++i) y[i] = w.w[i] ? treated[i] : control[i];
  return y;
}

PotentialOutcomes potential_outcomes(const Scm& scm, const Sample& sample,
                                     const TreatmentTemplate& treatment) {
  const std::size_t n = sample.n();
  const Sample y0 = counterfactual_sample(scm, sample, treatment.arm(false, n));
  const Sample y1 = counterfactual_sample(scm, sample, treatment.arm(true, n));
  const auto c0 = y0.column(treatment.outcome);
  const auto c1 = y1.column(treatment.outcome);
  return PotentialOutcomes{{c0.begin(), c0.end()}, {c1.begin(), c1.end()}};
}

StepCdf cf_post_treatment_cdf(const PotentialOutcomes& outcomes, const UnitAssignment& w) {
  return mixture_of_pointmasses(outcomes.select(w));
}

StepCdf cf_post_treatment_cdf(const Scm& scm, const Sample& sample, const UnitAssignment& w,
                              const TreatmentTemplate& treatment) {
  return cf_post_treatment_cdf(potential_outcomes(scm, sample, treatment), w);
}

SearchMode parse_search_mode(std::string_view name) {
  if (name == "exhaustive") return SearchMode::Exhaustive;
  if (name == "greedy") return SearchMode::Greedy;
  throw PolicyError("unknown search mode '" + std::string(name) + "'; supported: exhaustive, greedy");
}

std::string_view to_string(SearchMode mode) {
  return mode == SearchMode::Exhaustive ? "exhaustive" : "greedy";
}

__extension__ typedef unsigned __int128 u128;

std::uint64_t assignment_count(std::size_t n, std::size_t budget) {
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  u128 total = 0;
  u128 choose = 1;  // C(n, s)
  for (std::size_t s = 0; s <= std::min(budget, n); ++s) {
    if (s > 0) choose = choose * (n - s + 1) / s;
    total += choose;
    if (total > cap) return cap;
  }
  return static_cast<std::uint64_t>(total);
}

nlohmann::json to_json(const CfResult& result) {
  nlohmann::json j;
  j["assignment"] = result.assignment.w;
  j["welfare_exact"] = result.welfare.exact ? nlohmann::json(to_fraction_string(*result.welfare.exact))
                                            : nlohmann::json(nullptr);
  j["welfare_float"] = result.welfare.approx;
  j["mode"] = std::string(to_string(result.mode));
  j["budget"] = result.budget.max_treated;
  j["welfare_functional"] = std::string(to_string(result.functional));
  return j;
}

namespace {

struct Candidate {
  std::vector<std::size_t> treated;  // ascending unit indices
  WelfareValue welfare;
  bool valid = false;
};

// a strictly preferred to b.
bool preferred(const Candidate& a, const Candidate& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (b.welfare < a.welfare) return true;
  if (a.welfare < b.welfare) return false;
  if (a.treated.size() != b.treated.size()) return a.treated.size() < b.treated.size();
  return std::lexicographical_compare(a.treated.begin(), a.treated.end(), b.treated.begin(),
                                      b.treated.end());
}

class Evaluator {
 public:
  Evaluator(const PotentialOutcomes& outcomes, WelfareFunctional f) : outcomes_(outcomes), f_(f) {}

  WelfareValue operator()(std::span<const std::size_t> treated) {
    y_ = outcomes_.control;
    for (std::size_t i : treated) y_[i] = outcomes_.treated[i];
    return welfare_functional(f_, mixture_of_pointmasses(y_));
  }

 private:
  const PotentialOutcomes& outcomes_;
  WelfareFunctional f_;
  std::vector<double> y_;
};

UnitAssignment to_assignment(std::size_t n, const std::vector<std::size_t>& treated) {
  std::vector<int> w(n, 0);
  for (std::size_t i : treated) w[i] = 1;
  return UnitAssignment(std::move(w));
}

Candidate exhaustive(const PotentialOutcomes& outcomes, std::size_t budget, WelfareFunctional f,
                     unsigned threads) {
  const std::size_t n = outcomes.size();
  // One task per (size, first treated unit); the empty assignment is task 0.
  struct Task {
    std::size_t size;
    std::size_t first;
  };
  std::vector<Task> tasks{{0, 0}};
  for (std::size_t s = 1; s <= budget; ++s) {
    for (std::size_t first = 0; first + s <= n; ++first) tasks.push_back({s, first});
  }

  const unsigned workers = std::max(1u, threads);
  std::vector<Candidate> best(workers);
  parallel_for(tasks.size(), workers, [&](std::size_t t, unsigned worker) {
    Evaluator eval(outcomes, f);
    const Task task = tasks[t];
    std::vector<std::size_t> combo(task.size);
    if (task.size > 0) combo[0] = task.first;
    for (std::size_t k = 1; k < task.size; ++k) combo[k] = task.first + k;
    while (true) {
      Candidate c{combo, eval(combo), true};
      if (preferred(c, best[worker])) best[worker] = std::move(c);
      // Next combination with the same first element, in lexicographic order.
      std::size_t k = task.size;
      while (k > 1 && combo[k - 1] == n - task.size + (k - 1)) --k;
      if (k <= 1) break;
      ++combo[k - 1];
      for (std::size_t j = k; j < task.size; ++j) combo[j] = combo[j - 1] + 1;
    }
  });

  Candidate overall;
  for (auto& c : best) {
    if (preferred(c, overall)) overall = std::move(c);
  }
  return overall;
}

Candidate greedy(const PotentialOutcomes& outcomes, std::size_t budget, WelfareFunctional f) {
  const std::size_t n = outcomes.size();
  Evaluator eval(outcomes, f);
  Candidate current{{}, eval({}), true};
  std::vector<bool> in(n, false);
  for (std::size_t step = 0; step < budget; ++step) {
    Candidate best_next;
    for (std::size_t i = 0; i < n; ++i) {
      if (in[i]) continue;
      std::vector<std::size_t> trial = current.treated;
      trial.insert(std::upper_bound(trial.begin(), trial.end(), i), i);
      WelfareValue w = eval(trial);
      if (!best_next.valid || best_next.welfare < w) best_next = Candidate{std::move(trial), w, true};
    }
    if (!best_next.valid || !(current.welfare < best_next.welfare)) break;
    for (std::size_t i : best_next.treated) in[i] = true;
    current = std::move(best_next);
  }
  return current;
}

}  // namespace

CfResult cf_optimize(const PotentialOutcomes& outcomes, Budget budget, WelfareFunctional welfare,
                     SearchMode mode, unsigned threads) {
  const std::size_t n = outcomes.size();
  if (n == 0) throw PolicyError("cf_optimize: no units");
  if (outcomes.treated.size() != n) throw PolicyError("cf_optimize: potential outcome columns differ");
  if (budget.max_treated > n) {
    throw PolicyError("budget " + std::to_string(budget.max_treated) + " exceeds the " +
                      std::to_string(n) + " available units");
  }
  Candidate best;
  if (mode == SearchMode::Exhaustive) {
    const std::uint64_t count = assignment_count(n, budget.max_treated);
    if (count > kExhaustiveGuard) {
      throw PolicyError("exhaustive search would enumerate " + std::to_string(count) +
                        " assignments (guard " + std::to_string(kExhaustiveGuard) +
                        "); use greedy mode");
    }
    best = exhaustive(outcomes, budget.max_treated, welfare, threads);
  } else {
    best = greedy(outcomes, budget.max_treated, welfare);
  }
  return CfResult{to_assignment(n, best.treated), best.welfare, mode, budget, welfare};
}

CfResult cf_optimize(const Scm& scm, const Sample& sample, const TreatmentTemplate& treatment,
                     Budget budget, WelfareFunctional welfare, SearchMode mode, unsigned threads) {
  return cf_optimize(potential_outcomes(scm, sample, treatment), budget, welfare, mode, threads);
}

}  // namespace forwardcf
