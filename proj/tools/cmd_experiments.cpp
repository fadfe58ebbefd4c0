#include "commands.hpp"
#include "config.hpp"

#include "forwardcf/forwardsim.hpp"
#include "forwardcf/parallel.hpp"
#include "forwardcf/rational.hpp"
#include "forwardcf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>

namespace forwardcf::cli {

namespace {

StabilityParams stability_params(const nlohmann::json& cfg) {
  StabilityParams p;
  p.n = cfg.at("n").get<std::size_t>();
  p.mu_z = cfg.at("mu_z").get<double>();
  p.sigma_z = cfg.at("sigma_z").get<double>();
  p.seed = cfg.at("seed").get<std::uint64_t>();
  p.validate();
  return p;
}

// Replaces grid strings with explicit arrays so the echoed config is exact.
nlohmann::json resolve_grids(nlohmann::json cfg, std::initializer_list<const char*> keys) {
  for (const char* key : keys) cfg[key] = grid_from_json(cfg.at(key), key);
  return cfg;
}

std::filesystem::path output_dir(const nlohmann::json& cfg) {
  const std::filesystem::path dir = cfg.at("out").get<std::string>();
  prepare_output_dir(dir);
  return dir;
}

void echo_config(const std::filesystem::path& dir, const nlohmann::json& cfg) {
  write_file(dir / "config.json", [&](std::ostream& f) { f << cfg.dump(2) << '\n'; });
}

nlohmann::json stability_defaults(const char* out) {
  return {{"out", out}, {"threads", 1},   {"seed", 0},        {"svg", false},
          {"n", 1000},  {"mu_z", 0.0},    {"sigma_z", 1.0}};
}

}  // namespace

// ---------------------------------------------------------------------------
// densities

nlohmann::json densities_defaults() {
  nlohmann::json d = stability_defaults("out/densities");
  d["delta"] = 1.0;
  d["sigma_u"] = {0.0, 0.5, 5.0};
  d["sigma_mu"] = {0.0, 0.5, 5.0};
  d["grid_points"] = 512;
  d["bandwidth"] = nullptr;
  return d;
}

int run_densities(const nlohmann::json& raw, std::ostream& out) {
  const nlohmann::json cfg = resolve_grids(raw, {"sigma_u", "sigma_mu"});
  const StabilityParams base = stability_params(cfg);
  const double delta = cfg.at("delta").get<double>();
  const auto sigma_u = cfg.at("sigma_u").get<std::vector<double>>();
  const auto sigma_mu = cfg.at("sigma_mu").get<std::vector<double>>();
  const auto points = cfg.at("grid_points").get<std::size_t>();
  if (points < 2) throw ConfigError("grid_points must be at least 2");
  std::optional<double> bandwidth;
  if (!cfg.at("bandwidth").is_null()) {
    bandwidth = cfg.at("bandwidth").get<double>();
    if (!(*bandwidth > 0)) throw ConfigError("bandwidth must be positive");
  }
  const bool svg = cfg.at("svg").get<bool>();
  const auto dir = output_dir(cfg);
  echo_config(dir, cfg);

  struct Cell {
    StabilityParams p;
    std::filesystem::path dir;
  };
  std::vector<Cell> cells;
  for (double smu : sigma_mu) {
    for (double su : sigma_u) {
      StabilityParams p = base;
      p.sigma_u = su;
      p.sigma_mu = smu;
      p.delta = delta;
      p.seed = grid_point_seed(base.seed, su, smu, delta, 0);
      p.validate();
      cells.push_back({p, dir / ("sigma_u=" + tag(su) + "_sigma_mu=" + tag(smu))});
    }
  }

  parallel_for(cells.size(), cfg.at("threads").get<unsigned>(), [&](std::size_t t, unsigned) {
    const Cell& cell = cells[t];
    prepare_output_dir(cell.dir);
    const TwoStepData d = simulate_two_step(cell.p);
    const EmpiricalDist truth(d.y1_true), cf(d.y1_counterfactual), intv(d.y1_interventional);
    double lo = truth.samples()[0], hi = lo, widest = 0;
    for (const EmpiricalDist* e : {&truth, &cf, &intv}) {
      const auto [mn, mx] = std::minmax_element(e->samples().begin(), e->samples().end());
      lo = std::min(lo, *mn);
      hi = std::max(hi, *mx);
      widest = std::max(widest, bandwidth.value_or(silverman_bandwidth(*e)));
    }
    const auto grid = linspace(lo - 5 * widest, hi + 5 * widest, points);
    const auto k_true = kde_density(truth, bandwidth, grid);
    const auto k_cf = kde_density(cf, bandwidth, grid);
    const auto k_int = kde_density(intv, bandwidth, grid);
    write_file(cell.dir / "density_true.csv", [&](std::ostream& f) { write_density_csv(f, k_true); });
    write_file(cell.dir / "density_cf.csv", [&](std::ostream& f) { write_density_csv(f, k_cf); });
    write_file(cell.dir / "density_int.csv", [&](std::ostream& f) { write_density_csv(f, k_int); });
    write_file(cell.dir / "scatter.csv", [&](std::ostream& f) { write_scatter_csv(f, d); });
    if (svg) {
      auto series = [&](const std::vector<DensityPoint>& curve, std::string label, std::size_t c,
                        bool dashed) {
        svg::Series s{std::move(label), {}, {}, svg::palette(c), dashed, false};
        for (const auto& pt : curve) {
          s.x.push_back(pt.y);
          s.y.push_back(pt.density);
        }
        return s;
      };
      const svg::PlotOptions opts{"sigma_U = " + tag(cell.p.sigma_u) + ", sigma_mu = " +
                                      tag(cell.p.sigma_mu) + ", delta = " + tag(cell.p.delta),
                                  "Y1", "density"};
      write_file(cell.dir / "densities.svg", [&](std::ostream& f) {
        svg::write_plot(f,
                        {series(k_true, "true", 0, false), series(k_cf, "counterfactual", 1, true),
                         series(k_int, "interventional", 2, false)},
                        opts);
      });
      svg::Series scatter{"units", d.y0, d.y1_true, svg::palette(0), false, true};
      write_file(cell.dir / "scatter.svg", [&](std::ostream& f) {
        svg::write_plot(f, {scatter}, {opts.title, "Y0", "Y1 (true)"});
      });
    }
  });

  write_file(dir / "cells.csv", [&](std::ostream& f) {
    f << "sigma_u,sigma_mu,delta,n,seed,dir\n";
    for (const auto& c : cells) {
      f << tag(c.p.sigma_u) << ',' << tag(c.p.sigma_mu) << ',' << tag(c.p.delta) << ',' << c.p.n << ','
        << c.p.seed << ',' << c.dir.filename().string() << '\n';
    }
  });
  out << "wrote " << cells.size() << " cells to " << dir.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// sweep-kl

nlohmann::json sweep_kl_defaults() {
  nlohmann::json d = stability_defaults("out/sweep-kl");
  d["sigma_u"] = "0:5:0.1";
  d["sigma_mu"] = {0.0, 0.5, 1.0, 5.0};
  d["delta"] = {1.0};
  d["k"] = 10;
  d["replicates"] = 1;
  return d;
}

int run_sweep_kl(const nlohmann::json& raw, std::ostream& out) {
  const nlohmann::json cfg = resolve_grids(raw, {"sigma_u", "sigma_mu", "delta"});
  const StabilityParams base = stability_params(cfg);
  const Grid grid{cfg.at("sigma_u").get<std::vector<double>>(),
                  cfg.at("sigma_mu").get<std::vector<double>>(),
                  cfg.at("delta").get<std::vector<double>>()};
  const auto k = cfg.at("k").get<std::size_t>();
  const auto replicates = cfg.at("replicates").get<std::size_t>();
  const auto dir = output_dir(cfg);
  echo_config(dir, cfg);

  const auto rows = run_grid(grid, base, k, cfg.at("threads").get<unsigned>(), replicates);
  write_file(dir / "kl_sweep.csv", [&](std::ostream& f) { write_grid_csv(f, rows); });

  if (cfg.at("svg").get<bool>()) {
    // Replicates are averaged into one point per sigma_U.
    std::map<std::pair<double, double>, std::map<double, std::array<double, 3>>> curves;
    for (const auto& r : rows) {
      auto& acc = curves[{r.delta, r.sigma_mu}][r.sigma_u];
      acc[0] += r.kl_true_vs_int;
      acc[1] += r.kl_true_vs_cf;
      acc[2] += 1;
    }
    for (const auto& [key, curve] : curves) {
      svg::Series s_int{"interventional", {}, {}, svg::palette(2), false, false};
      svg::Series s_cf{"counterfactual", {}, {}, svg::palette(1), true, false};
      for (const auto& [su, acc] : curve) {
        s_int.x.push_back(su);
        s_int.y.push_back(acc[0] / acc[2]);
        s_cf.x.push_back(su);
        s_cf.y.push_back(acc[1] / acc[2]);
      }
      const std::string name = "kl_delta=" + tag(key.first) + "_sigma_mu=" + tag(key.second);
      write_file(dir / (name + ".svg"), [&](std::ostream& f) {
        svg::write_plot(f, {s_int, s_cf},
                        {"KL(true || estimate), delta = " + tag(key.first) + ", sigma_mu = " +
                             tag(key.second),
                         "sigma_U", "KL (nats)"});
      });
    }
  }
  out << "wrote " << rows.size() << " rows to " << (dir / "kl_sweep.csv").string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// variance-table

nlohmann::json variance_table_defaults() {
  nlohmann::json d = stability_defaults("out/variance-table");
  d["sigma_u"] = 5.0;
  d["sigma_mu"] = 5.0;
  d["delta"] = 1.0;
  d["replicates"] = 50;
  d["k"] = 10;
  d["assert_claim"] = true;
  return d;
}

int run_variance_table(const nlohmann::json& cfg, std::ostream& out) {
  StabilityParams base = stability_params(cfg);
  base.sigma_u = cfg.at("sigma_u").get<double>();
  base.sigma_mu = cfg.at("sigma_mu").get<double>();
  base.delta = cfg.at("delta").get<double>();
  base.validate();
  const auto replicates = cfg.at("replicates").get<std::size_t>();
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  const auto dir = output_dir(cfg);
  echo_config(dir, cfg);

  const auto rows = run_grid({{base.sigma_u}, {base.sigma_mu}, {base.delta}}, base,
                             cfg.at("k").get<std::size_t>(), cfg.at("threads").get<unsigned>(),
                             replicates);
  write_file(dir / "variance_runs.csv", [&](std::ostream& f) { write_grid_csv(f, rows); });

  std::array<double, 4> avg{};
  for (const auto& r : rows) {
    avg[0] += r.var_y0;
    avg[1] += r.var_y1_true;
    avg[2] += r.var_y1_cf;
    avg[3] += r.var_y1_int;
  }
  for (double& a : avg) a /= static_cast<double>(rows.size());
  const AnalyticVariances an = analytic_variances(base);
  const std::array<double, 4> analytic{an.y0, an.y1_true, an.y1_counterfactual, an.y1_interventional};
  const std::array<const char*, 4> names{"Y0", "Y1 true", "Y1 counterfactual", "Y1 interventional"};
  const std::array<const char*, 4> keys{"y0", "y1_true", "y1_cf", "y1_int"};

  write_file(dir / "variance_table.csv", [&](std::ostream& f) {
    f << "quantity,first_run,mean,analytic,replicates\n";
    for (std::size_t j = 0; j < 4; ++j) {
      const double first[] = {rows[0].var_y0, rows[0].var_y1_true, rows[0].var_y1_cf, rows[0].var_y1_int};
      f << keys[j] << ',' << format_decimal(first[j]) << ',' << format_decimal(avg[j]) << ','
        << format_decimal(analytic[j]) << ',' << rows.size() << '\n';
    }
  });

  out << "Variance of each distribution (sigma_U = " << tag(base.sigma_u) << ", sigma_mu = "
      << tag(base.sigma_mu) << ", delta = " << tag(base.delta) << ", n = " << base.n << ", "
      << rows.size() << " runs)\n";
  out << std::left << std::setw(20) << "distribution" << std::right << std::setw(12) << "first run"
      << std::setw(12) << "mean" << std::setw(12) << "analytic" << '\n';
  out << std::fixed << std::setprecision(3);
  const double first[] = {rows[0].var_y0, rows[0].var_y1_true, rows[0].var_y1_cf, rows[0].var_y1_int};
  for (std::size_t j = 0; j < 4; ++j) {
    out << std::left << std::setw(20) << names[j] << std::right << std::setw(12) << first[j]
        << std::setw(12) << avg[j] << std::setw(12) << analytic[j] << '\n';
  }
  out.unsetf(std::ios::fixed);
  out << std::setprecision(6);

  const bool claim = avg[3] > avg[0] && avg[1] < avg[0] && avg[2] < avg[0];
  out << "interventional > Y0 > true, counterfactual: " << (claim ? "holds" : "FAILS") << '\n';
  return claim || !cfg.at("assert_claim").get<bool>() ? 0 : 1;
}

}  // namespace forwardcf::cli
