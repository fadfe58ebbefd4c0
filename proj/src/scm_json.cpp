#include "forwardcf/scm_json.hpp"

#include <fstream>

namespace forwardcf {

namespace {

const nlohmann::json& field(const nlohmann::json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ScmError(where + ": missing field '" + key + "'");
  return *it;
}

}  // namespace

NoiseSpec noise_from_json(const nlohmann::json& doc, const std::string& default_name) {
  if (!doc.is_object()) throw ScmError("noise must be a JSON object");
  const std::string name = doc.value("name", default_name);
  const std::string where = "noise '" + name + "'";
  const std::string law = field(doc, "law", where).get<std::string>();
  try {
    if (law == "normal") {
      return NoiseSpec(name, Normal{doc.value("mean", 0.0), doc.value("variance", 1.0)});
    }
    if (law == "bernoulli") return NoiseSpec(name, Bernoulli{field(doc, "p", where).get<double>()});
    if (law == "discrete_uniform") {
      return NoiseSpec(name,
                       DiscreteUniform{field(doc, "support", where).get<std::vector<double>>()});
    }
    if (law == "point_mass") {
      return NoiseSpec(name, PointMass{field(doc, "value", where).get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ScmError(where + ": " + e.what());
  }
  throw ScmError(where + ": unknown law '" + law +
                 "' (expected normal, bernoulli, discrete_uniform, point_mass)");
}

Scm scm_from_json(const nlohmann::json& doc) {
  const auto& vars = field(doc, "variables", "scm");
  if (!vars.is_array()) throw ScmError("scm: 'variables' must be an array");
  std::vector<Variable> variables;
  for (const auto& v : vars) {
    const std::string name = field(v, "name", "variable").get<std::string>();
    const std::string where = "variable '" + name + "'";
    try {
      auto parents = v.value("parents", std::vector<std::string>{});
      auto coeffs = v.value("coeffs", std::vector<double>{});
      if (coeffs.size() != parents.size()) {
        throw ScmError(where + ": 'coeffs' must have one entry per parent");
      }
      NoiseSpec noise = noise_from_json(field(v, "noise", where), "U_" + name);
      variables.push_back(Variable{
          StructuralEquation{name, std::move(parents),
                             additive_linear(std::move(coeffs), v.value("intercept", 0.0))},
          std::move(noise)});
    } catch (const nlohmann::json::exception& e) {
      throw ScmError(where + ": " + e.what());
    }
  }
  return Scm(std::move(variables));
}

Scm load_scm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScmError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ScmError(path.string() + ": " + e.what());
  }
  return scm_from_json(doc);
}

}  // namespace forwardcf
