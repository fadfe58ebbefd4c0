#include "forwardcf/distributions.hpp"
#include "forwardcf/forwardsim.hpp"
#include "forwardcf/kl.hpp"
#include "forwardcf/models.hpp"
#include "forwardcf/policy.hpp"
#include "forwardcf/scm.hpp"
#include "forwardcf/scm_json.hpp"
#include "forwardcf/welfare.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace forwardcf;

namespace {

// Opaque holder; the variant alternatives are not exposed individually.
struct PyIntervention {
  Intervention value;
};

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(py::int_(py::str(boost::multiprecision::numerator(r).str())),
             py::int_(py::str(boost::multiprecision::denominator(r).str())));
}

Rational rational(const py::handle& h) {
  py::object f = py::module_::import("fractions").attr("Fraction")(h);
  return Rational(BigInt(py::str(f.attr("numerator")).cast<std::string>()),
                  BigInt(py::str(f.attr("denominator")).cast<std::string>()));
}

py::dict table_to_dict(const Table& t) {
  py::dict d;
  for (const auto& name : t.names()) {
    auto col = t.column(name);
    d[py::str(name)] = std::vector<double>(col.begin(), col.end());
  }
  return d;
}

Table table_from_dict(const py::dict& d) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  for (auto item : d) {
    names.push_back(py::str(item.first));
    cols.push_back(item.second.cast<std::vector<double>>());
  }
  return Table(std::move(names), std::move(cols));
}

Sample sample_from_dict(const py::dict& d) { return Sample{table_from_dict(d), std::nullopt}; }

py::object welfare_to_py(const WelfareValue& w) {
  return w.exact ? fraction(*w.exact) : py::object(py::float_(w.approx));
}

py::dict two_step_to_dict(const TwoStepData& d) {
  py::dict out;
  out["z0"] = d.z0;
  out["y0"] = d.y0;
  out["w"] = d.w;
  out["z1"] = d.z1;
  out["y1_true"] = d.y1_true;
  out["y1_interventional"] = d.y1_interventional;
  out["y1_counterfactual"] = d.y1_counterfactual;
  out["mu_u"] = d.mu_u;
  out["u0"] = d.u0;
  out["u1"] = d.u1;
  return out;
}

TreatmentTemplate treatment_from(const std::string& kind, const std::string& treatment,
                                 const std::string& outcome, double control, double treated, double delta) {
  if (kind == "atomic") return TreatmentTemplate::atomic(treatment, outcome, control, treated);
  if (kind == "shift") return TreatmentTemplate::shift(treatment, outcome, delta);
  throw py::value_error("treatment kind must be 'atomic' or 'shift'");
}

}  // namespace

PYBIND11_MODULE(_forwardcf, m) {
  m.doc() = "Structural causal models, exact welfare and counterfactual treatment choice";

  py::register_exception<ScmError>(m, "ScmError", PyExc_ValueError);
  py::register_exception<DistributionError>(m, "DistributionError", PyExc_ValueError);
  py::register_exception<WelfareError>(m, "WelfareError", PyExc_ValueError);
  py::register_exception<PolicyError>(m, "PolicyError", PyExc_ValueError);
  py::register_exception<KlError>(m, "KlError", PyExc_ValueError);

  // scm
  py::class_<Scm>(m, "Scm")
      .def_property_readonly("variable_names", &Scm::variable_names)
      .def_property_readonly("noise_names", &Scm::noise_names)
      .def("__len__", &Scm::size)
      .def("__repr__", [](const Scm& s) {
        std::string out = "Scm([";
        for (const auto& n : s.variable_names()) out += (out.back() == '[' ? "" : ", ") + n;
        return out + "])";
      });

  py::class_<PyIntervention>(m, "Intervention")
      .def_property_readonly("target", [](const PyIntervention& i) { return target_of(i.value); });

  m.def("scm_from_json", [](const std::string& text) { return scm_from_json(nlohmann::json::parse(text)); },
        py::arg("text"));
  m.def("load_scm", &load_scm, py::arg("path"));
  m.def("welfare_example", &models::welfare_example);
  m.def("welfare_example_units", [] { return table_to_dict(models::welfare_example_units().values); });
  m.def("two_step_scm", &models::two_step, py::arg("mu_z") = 0.0, py::arg("sigma_z") = 1.0,
        py::arg("noise_variance") = 1.0);

  m.def("atomic", [](const std::string& v, double value) { return PyIntervention{atomic(v, value)}; },
        py::arg("variable"), py::arg("value"));
  m.def("shift",
        [](const std::string& v, double delta, const std::vector<int>& w) { return PyIntervention{shift(v, delta, w)}; },
        py::arg("variable"), py::arg("delta"), py::arg("w"));
  m.def("shift_offsets",
        [](const std::string& v, std::vector<double> offsets) {
          return PyIntervention{shift_offsets(v, std::move(offsets))};
        },
        py::arg("variable"), py::arg("offsets"));

  m.def("sample_observational",
        [](const Scm& scm, std::size_t n, std::uint64_t seed) {
          const Sample s = sample_observational(scm, n, seed);
          return py::make_tuple(table_to_dict(s.values), table_to_dict(*s.noise));
        },
        py::arg("scm"), py::arg("n"), py::arg("seed"), "Returns (values, noise) as dicts of columns.");
  m.def("apply_intervention", [](const Scm& scm, const PyIntervention& i) { return apply_intervention(scm, i.value); },
        py::arg("scm"), py::arg("intervention"));
  m.def("abduct", [](const Scm& scm, const py::dict& values) { return table_to_dict(abduct(scm, sample_from_dict(values))); },
        py::arg("scm"), py::arg("values"));
  m.def("simulate", [](const Scm& scm, const py::dict& noise) { return table_to_dict(simulate(scm, table_from_dict(noise)).values); },
        py::arg("scm"), py::arg("noise"));
  m.def("counterfactual_sample",
        [](const Scm& scm, const py::dict& values, const PyIntervention& i) {
          return table_to_dict(counterfactual_sample(scm, sample_from_dict(values), i.value).values);
        },
        py::arg("scm"), py::arg("values"), py::arg("intervention"));
  m.def("interventional_sample",
        [](const Scm& scm, const py::dict& values, const PyIntervention& i, const std::set<std::string>& resample,
           std::uint64_t seed) {
          return table_to_dict(interventional_sample(scm, sample_from_dict(values), i.value, resample, seed).values);
        },
        py::arg("scm"), py::arg("values"), py::arg("intervention"), py::arg("resample"), py::arg("seed"));

  // distributions
  py::class_<StepCdf>(m, "StepCdf")
      .def(py::init([](std::vector<double> support, const py::list& cum) {
             std::vector<Rational> c;
             for (auto v : cum) c.push_back(rational(v));
             return StepCdf(std::move(support), std::move(c));
           }),
           py::arg("support"), py::arg("cum"))
      .def_property_readonly("support", &StepCdf::support)
      .def_property_readonly("cum", [](const StepCdf& c) {
        py::list out;
        for (const auto& v : c.cum()) out.append(fraction(v));
        return out;
      })
      .def("__call__", [](const StepCdf& c, double y) { return fraction(c(y)); })
      .def("mean", [](const StepCdf& c) { return fraction(c.mean()); })
      .def("variance", [](const StepCdf& c) { return fraction(c.variance()); })
      .def("__eq__", [](const StepCdf& a, const StepCdf& b) { return a == b; })
      .def("__repr__", [](const StepCdf& c) {
        std::string out = "StepCdf(";
        for (std::size_t j = 0; j < c.steps(); ++j) {
          out += (j ? ", " : "") + format_decimal(c.support()[j]) + ": " + to_fraction_string(c.cum()[j]);
        }
        return out + ")";
      });

  m.def("mixture_of_pointmasses", [](const std::vector<double>& y) { return mixture_of_pointmasses(y); },
        py::arg("outcomes"));
  m.def("ecdf", [](std::vector<double> y) { return ecdf(EmpiricalDist(std::move(y))); }, py::arg("samples"));
  m.def("variance", [](std::vector<double> y) { return variance(EmpiricalDist(std::move(y))); }, py::arg("samples"));
  m.def("silverman_bandwidth", [](std::vector<double> y) { return silverman_bandwidth(EmpiricalDist(std::move(y))); },
        py::arg("samples"));
  m.def("kde_density",
        [](std::vector<double> y, std::optional<double> bandwidth, const std::vector<double>& grid) {
          std::vector<double> out;
          for (const auto& p : kde_density(EmpiricalDist(std::move(y)), bandwidth, grid)) out.push_back(p.density);
          return out;
        },
        py::arg("samples"), py::arg("bandwidth"), py::arg("grid"));

  // welfare
  m.def("gini_welfare", [](const StepCdf& c) { return welfare_to_py(gini_welfare(c)); }, py::arg("cdf"));
  m.def("welfare_functional",
        [](const std::string& name, const StepCdf& c) { return welfare_to_py(welfare_functional(name, c)); },
        py::arg("name"), py::arg("cdf"));

  // policy
  m.def("ewm_post_treatment_cdf",
        [](const Scm& scm, const py::dict& values, const std::string& covariate, const std::set<double>& g,
           const std::string& treatment, const std::string& outcome) {
          return ewm_post_treatment_cdf(scm, sample_from_dict(values), covariate,
                                        TreatmentTemplate::atomic(treatment, outcome), DecisionSetPolicy{g});
        },
        py::arg("scm"), py::arg("values"), py::arg("covariate"), py::arg("decision_set"),
        py::arg("treatment") = "Z", py::arg("outcome") = "Y");
  m.def("cf_post_treatment_cdf",
        [](const Scm& scm, const py::dict& values, const std::vector<int>& w, const std::string& treatment,
           const std::string& outcome) {
          return cf_post_treatment_cdf(scm, sample_from_dict(values), UnitAssignment(w),
                                       TreatmentTemplate::atomic(treatment, outcome));
        },
        py::arg("scm"), py::arg("values"), py::arg("w"), py::arg("treatment") = "Z", py::arg("outcome") = "Y");
  m.def("cf_optimize",
        [](const Scm& scm, const py::dict& values, std::size_t budget, const std::string& welfare,
           const std::string& mode, const std::string& kind, const std::string& treatment,
           const std::string& outcome, double delta, unsigned threads) {
          const CfResult r = cf_optimize(scm, sample_from_dict(values),
                                         treatment_from(kind, treatment, outcome, 0.0, 1.0, delta), Budget{budget},
                                         parse_welfare_functional(welfare), parse_search_mode(mode), threads);
          py::dict d = py::module_::import("json").attr("loads")(to_json(r).dump());
          if (r.welfare.exact) d["welfare_exact"] = fraction(*r.welfare.exact);
          return d;
        },
        py::arg("scm"), py::arg("values"), py::arg("budget"), py::arg("welfare") = "gini",
        py::arg("mode") = "exhaustive", py::arg("kind") = "atomic", py::arg("treatment") = "Z",
        py::arg("outcome") = "Y", py::arg("delta") = 1.0, py::arg("threads") = 1);

  // kl
  m.def("knn_kl", [](const std::vector<double>& p, const std::vector<double>& q, std::size_t k) {
          return knn_kl(p, q, k).value;
        },
        py::arg("p"), py::arg("q"), py::arg("k") = kDefaultNeighbors);

  // forwardsim
  py::class_<StabilityParams>(m, "StabilityParams")
      .def(py::init([](std::size_t n, double mu_z, double sigma_z, double sigma_u, double sigma_mu, double delta,
                       std::uint64_t seed) {
             StabilityParams p{n, mu_z, sigma_z, sigma_u, sigma_mu, delta, seed};
             p.validate();
             return p;
           }),
           py::arg("n") = 1000, py::arg("mu_z") = 0.0, py::arg("sigma_z") = 1.0, py::arg("sigma_u") = 0.0,
           py::arg("sigma_mu") = 0.0, py::arg("delta") = 1.0, py::arg("seed") = 0)
      .def_readwrite("n", &StabilityParams::n)
      .def_readwrite("mu_z", &StabilityParams::mu_z)
      .def_readwrite("sigma_z", &StabilityParams::sigma_z)
      .def_readwrite("sigma_u", &StabilityParams::sigma_u)
      .def_readwrite("sigma_mu", &StabilityParams::sigma_mu)
      .def_readwrite("delta", &StabilityParams::delta)
      .def_readwrite("seed", &StabilityParams::seed);

  m.def("simulate_two_step", [](const StabilityParams& p) { return two_step_to_dict(simulate_two_step(p)); },
        py::arg("params"));
  m.def("analytic_variances", [](const StabilityParams& p) {
    const AnalyticVariances a = analytic_variances(p);
    py::dict d;
    d["y0"] = a.y0;
    d["z1"] = a.z1;
    d["y1_true"] = a.y1_true;
    d["y1_counterfactual"] = a.y1_counterfactual;
    d["y1_interventional"] = a.y1_interventional;
    return d;
  }, py::arg("params"));
  m.def("run_grid",
        [](std::vector<double> sigma_u, std::vector<double> sigma_mu, std::vector<double> delta,
           const StabilityParams& base, std::size_t k, unsigned threads, std::size_t replicates) {
          py::list out;
          py::gil_scoped_release release;
          auto rows = run_grid({std::move(sigma_u), std::move(sigma_mu), std::move(delta)}, base, k, threads, replicates);
          py::gil_scoped_acquire acquire;
          for (const auto& r : rows) {
            py::dict d;
            d["sigma_u"] = r.sigma_u;
            d["sigma_mu"] = r.sigma_mu;
            d["delta"] = r.delta;
            d["n"] = r.n;
            d["seed"] = r.seed;
            d["kl_true_vs_int"] = r.kl_true_vs_int;
            d["kl_true_vs_cf"] = r.kl_true_vs_cf;
            d["var_y0"] = r.var_y0;
            d["var_y1_true"] = r.var_y1_true;
            d["var_y1_cf"] = r.var_y1_cf;
            d["var_y1_int"] = r.var_y1_int;
            out.append(d);
          }
          return out;
        },
        py::arg("sigma_u"), py::arg("sigma_mu"), py::arg("delta"), py::arg("base") = StabilityParams{},
        py::arg("k") = kDefaultNeighbors, py::arg("threads") = 1, py::arg("replicates") = 1);
}
