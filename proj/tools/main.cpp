#include "commands.hpp"
#include "config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <memory>

namespace {

using nlohmann::json;

struct Binding {
  CLI::Option* option;
  std::string key;
  std::function<json()> value;
};

struct Subcommand {
  CLI::App* app = nullptr;
  json defaults;
  int (*run)(const json&, std::ostream&) = nullptr;
  std::vector<Binding> bindings;
  std::string config_path;
  CLI::Option* config_option = nullptr;

  template <class T>
  void option(const std::string& name, const std::string& key, const std::string& help) {
    auto value = std::make_shared<T>();
    bindings.push_back({app->add_option(name, *value, help), key, [value] { return json(*value); }});
  }

  void grid(const std::string& name, const std::string& key, const std::string& help) {
    auto value = std::make_shared<std::string>();
    bindings.push_back({app->add_option(name, *value, help + " (start:stop:step or v1,v2,...)"), key,
                        [value] { return json(*value); }});
  }

  void common() {
    option<std::uint64_t>("--seed", "seed", "Master seed");
    option<std::string>("--out", "out", "Output directory");
    option<unsigned>("--threads", "threads", "Worker threads (results do not depend on it)");
    auto svg = std::make_shared<bool>(false);
    bindings.push_back({app->add_flag("--svg", *svg, "Also write SVG plots"), "svg", [] { return json(true); }});
    config_option = app->add_option("--config", config_path, "JSON config; flags take precedence");
  }

  void stability() {
    option<std::size_t>("--n", "n", "Units per simulation");
    option<double>("--mu-z", "mu_z", "Mean of Z0");
    option<double>("--sigma-z", "sigma_z", "Standard deviation of Z0");
  }

  int execute() const {
    json overrides = json::object();
    for (const auto& b : bindings) {
      if (b.option->count() > 0) overrides[b.key] = b.value();
    }
    std::optional<std::string> path;
    if (config_option->count() > 0) path = config_path;
    return run(forwardcf::cli::merge_config(defaults, path, overrides), std::cout);
  }
};

}  // namespace

int main(int argc, char** argv) {
  namespace cli = forwardcf::cli;
  CLI::App app{"Interventional versus counterfactual treatment choice experiments"};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Subcommand>> subs;
  auto add = [&](const char* name, const char* help, json defaults, int (*run)(const json&, std::ostream&)) {
    auto sub = std::make_unique<Subcommand>();
    sub->app = app.add_subcommand(name, help);
    sub->defaults = std::move(defaults);
    sub->run = run;
    sub->common();
    subs.push_back(std::move(sub));
    return subs.back().get();
  };

  add("ewm-example", "Exact EWM versus CF worked example on the four-unit sample",
      cli::ewm_example_defaults(), cli::run_ewm_example);

  auto* densities = add("densities", "True, counterfactual and interventional densities of Y1",
                        cli::densities_defaults(), cli::run_densities);
  densities->stability();
  densities->option<double>("--delta", "delta", "Treatment effect");
  densities->grid("--sigma-u", "sigma_u", "Within-unit noise sd values");
  densities->grid("--sigma-mu", "sigma_mu", "Across-unit mean sd values");
  densities->option<std::size_t>("--grid-points", "grid_points", "KDE evaluation points");
  densities->option<double>("--bandwidth", "bandwidth", "KDE bandwidth (default: Silverman)");

  auto* sweep = add("sweep-kl", "KL(true || estimate) over a parameter grid", cli::sweep_kl_defaults(),
                    cli::run_sweep_kl);
  sweep->stability();
  sweep->grid("--sigma-u", "sigma_u", "Within-unit noise sd values");
  sweep->grid("--sigma-mu", "sigma_mu", "Across-unit mean sd values");
  sweep->grid("--delta", "delta", "Treatment effects");
  sweep->option<std::size_t>("--k", "k", "Nearest-neighbour order");
  sweep->option<std::size_t>("--replicates", "replicates", "Independent runs per grid point");

  auto* variance = add("variance-table", "Variances of Y0, Y1 and both Y1 estimates",
                       cli::variance_table_defaults(), cli::run_variance_table);
  variance->stability();
  variance->option<double>("--sigma-u", "sigma_u", "Within-unit noise sd");
  variance->option<double>("--sigma-mu", "sigma_mu", "Across-unit mean sd");
  variance->option<double>("--delta", "delta", "Treatment effect");
  variance->option<std::size_t>("--replicates", "replicates", "Runs to average");
  variance->option<std::size_t>("--k", "k", "Nearest-neighbour order for the KL columns");
  variance->option<bool>("--assert-claim", "assert_claim", "Exit nonzero when the ordering check fails");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& sub : subs) {
      if (sub->app->parsed()) return sub->execute();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
