#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nsdecay/analysis.hpp"
#include "nsdecay/config.hpp"
#include "nsdecay/field.hpp"

namespace nsdecay {

/// Vorticity snapshot files: a header line `n,length`, then n^2 reals in
/// row-major order, entry i*n + j being w(-L/2 + i h, -L/2 + j h).
struct VorticityFile {
  GridSpec grid;
  PhysicalField omega;  // wrapped (origin-first) storage
};
VorticityFile read_vorticity_file(const std::filesystem::path& path);
void write_vorticity_file(const std::filesystem::path& path, const PhysicalField& omega);

/// Initial velocity for a scenario. For vorticity files the circulation is
/// moved into `vortex` (radial energy decomposition with core time vortex.t0).
VelocityField build_initial_data(const ScenarioConfig& config, RadialVortexParams& vortex);

struct ScenarioResult {
  EnergySeries series;
  DecayReport report;
  /// 0 all checks pass, 1 a check failed, 3 numerical abort.
  int exit_code = 0;
  std::string message;
  long abort_row = -1;
  double wall_time = 0.0;
};

/// Runs the scenario and writes series.csv, report.txt and report.csv into
/// `config.output_dir`. Config and I/O problems throw ConfigError.
ScenarioResult run_scenario(const ScenarioConfig& config);

inline constexpr const char* kSeriesHeader = "t,E,D,Tv,v_inf,E_low,E_high,r2";
std::string series_csv(const EnergySeries& series);

struct SweepRow {
  std::string config_hash;
  double gamma_target = 0.0;
  double gamma_fitted = 0.0;
  double apriori_constant = 0.0;
  std::size_t violations = 0;
  std::string status;  // pass, fail, abort, error
  double wall_time = 0.0;
};

inline constexpr const char* kSweepHeader =
    "config_hash,gamma_target,gamma_fitted,apriori_constant,violations,status,wall_time";
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Runs every config on `jobs` worker threads. Scenario i writes into
/// `dir/<i>-<hash>/`; the summary goes to `dir/sweep.csv` in input order.
/// Returns 0 when every scenario passes, 1 otherwise.
int run_sweep(const std::vector<ScenarioConfig>& configs, int jobs, const std::filesystem::path& dir,
              std::vector<SweepRow>* rows = nullptr);

}  // namespace nsdecay
