// nsdecay: scenario runner for the perturbation solver.
//
//   nsdecay simulate <config>
//   nsdecay sweep <config...> [--jobs N]
//   nsdecay decompose <vorticity-file> [--t0 X]
//   nsdecay check-heat <config>
//
// Exit status: 0 pass, 1 check failure, 2 usage/config error, 3 numerical abort.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "nsdecay/config.hpp"
#include "nsdecay/decomposition.hpp"
#include "nsdecay/error.hpp"
#include "nsdecay/heat.hpp"
#include "nsdecay/scenario.hpp"
#include "nsdecay/spectral.hpp"

using namespace nsdecay;

namespace {

int cmd_simulate(const std::string& path) {
  auto cfg = load_config(path);
  apply_environment(cfg);
  const auto res = run_scenario(cfg);
  std::cout << res.report.to_text();
  std::fprintf(stderr, "output: %s (%.1f s)\n", cfg.output_dir.c_str(), res.wall_time);
  if (res.exit_code == 3) std::fprintf(stderr, "numerical abort: %s\n", res.message.c_str());
  return res.exit_code;
}

int cmd_sweep(const std::vector<std::string>& paths, int jobs) {
  std::vector<ScenarioConfig> configs;
  for (const auto& p : paths) {
    try {
      configs.push_back(load_config(p));
    } catch (const ConfigError& e) {
      throw ConfigError(p + ": " + e.what());
    }
  }
  std::string dir = configs.empty() ? std::string("out") : configs.front().output_dir;
  if (const char* env = std::getenv("NSDECAY_OUTPUT_DIR"); env && *env) dir = env;
  std::vector<SweepRow> rows;
  const int status = run_sweep(configs, jobs, dir, &rows);
  std::cout << sweep_csv(rows);
  return status;
}

int cmd_decompose(const std::string& path, double t0) {
  const auto file = read_vorticity_file(path);
  Decomposition d;
  try {
    d = radial_energy_decompose(from_physical(file.omega, file.grid), t0);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto& g = file.grid;
  std::printf("alpha=%.17g\n", d.vortex.alpha);
  std::printf("vortex.t0=%.17g\n", d.vortex.t0);
  std::printf("residual_circulation=%.17g\n", d.residual_circulation);
  std::printf("u0_energy=%.17g\n", energy(d.u0));
  std::vector<double> radii;
  const double lo = 0.13 * g.length, hi = 0.23 * g.length;
  for (int i = 0; i < 8; ++i) radii.push_back(lo * std::pow(hi / lo, i / 7.0));
  const auto ff = far_field_exponent(d.u0, radii);
  std::printf("far_field_slope=%.17g\n", ff.slope);
  std::printf("localized=%s\n", ff.localized ? "true" : "false");
  return 0;
}

int cmd_check_heat(const std::string& path) {
  auto cfg = load_config(path);
  RadialVortexParams vortex;
  const auto u0 = build_initial_data(cfg, vortex);
  std::pair<double, double> window{10.0, std::min(100.0, cfg.grid.validity_time())};
  if (cfg.fit_t_min) window = {*cfg.fit_t_min, *cfg.fit_t_max};
  if (energy(u0) == 0.0) {
    std::printf("gamma=nan\nverdict=skipped (zero data)\n");
    return 0;
  }
  HeatDecayProfile prof;
  try {
    prof = estimate_heat_exponent(u0, window, 32);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::printf("gamma=%.17g\nraw_gamma=%.17g\nstderr=%.17g\nfit_t_min=%.17g\nfit_t_max=%.17g\nalgebraic=%s\n",
              prof.gamma, prof.raw_gamma, prof.stderr_gamma, window.first, window.second,
              prof.algebraic ? "true" : "false");
  if (cfg.init_kind != InitKind::prescribed_gamma) return 0;
  const bool ok = std::abs(prof.gamma - cfg.gamma) <= 0.1;
  std::printf("gamma_target=%.17g\nverdict=%s\n", cfg.gamma, ok ? "pass" : "fail");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy decay experiments for 2D flows around a radial vortex"};
  app.require_subcommand(1);

  std::string config_path;
  auto* sim = app.add_subcommand("simulate", "run one scenario");
  sim->add_option("config", config_path, "config file")->required();

  std::vector<std::string> sweep_paths;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "run several scenarios");
  sweep->add_option("configs", sweep_paths, "config files");
  sweep->add_option("--jobs,-j", jobs, "parallel scenarios")->check(CLI::PositiveNumber);

  std::string vort_path;
  double t0 = 1.0;
  auto* dec = app.add_subcommand("decompose", "radial energy decomposition of a vorticity file");
  dec->add_option("vorticity-file", vort_path, "vorticity snapshot")->required();
  dec->add_option("--t0", t0, "core time of the Gaussian vortex");

  std::string heat_path;
  auto* heat = app.add_subcommand("check-heat", "heat-decay exponent of the initial data");
  heat->add_option("config", heat_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim) return cmd_simulate(config_path);
    if (*sweep) return cmd_sweep(sweep_paths, jobs);
    if (*dec) return cmd_decompose(vort_path, t0);
    if (*heat) return cmd_check_heat(heat_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericalAbort& e) {
    std::fprintf(stderr, "numerical abort: %s (row %ld)\n", e.what(), e.row());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
