#pragma once

#include "forwardcf/scm.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace forwardcf {

/// Builds an additive-linear SCM from a JSON document. Schema in
/// docs/scm_json.md:
///
///   {"variables": [{"name": "Y", "parents": ["X", "Z"], "coeffs": [1, 1],
///                   "intercept": 0,
///                   "noise": {"name": "U_Y", "law": "discrete_uniform",
///                             "support": [0, 1, 2]}}]}
Scm scm_from_json(const nlohmann::json& doc);
Scm load_scm(const std::filesystem::path& path);

NoiseSpec noise_from_json(const nlohmann::json& doc, const std::string& default_name);

}  // namespace forwardcf
