#pragma once

#include <nlohmann/json.hpp>

#include <ostream>

namespace forwardcf::cli {

// Each subcommand publishes its defaults (the keys a config file may set) and
// runs from a fully merged configuration. The return value is the exit code.

nlohmann::json ewm_example_defaults();
int run_ewm_example(const nlohmann::json& cfg, std::ostream& out);

nlohmann::json densities_defaults();
int run_densities(const nlohmann::json& cfg, std::ostream& out);

nlohmann::json sweep_kl_defaults();
int run_sweep_kl(const nlohmann::json& cfg, std::ostream& out);

nlohmann::json variance_table_defaults();
int run_variance_table(const nlohmann::json& cfg, std::ostream& out);

}  // namespace forwardcf::cli
