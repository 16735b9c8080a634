#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "nsdecay/grid.hpp"
#include "nsdecay/solver.hpp"
#include "nsdecay/vortex.hpp"

namespace nsdecay {

enum class InitKind { prescribed_gamma, vorticity_file, taylor_green, zero };

std::string to_string(InitKind k);
InitKind init_kind_from_string(const std::string& s);

/// Flat `section.key = value` scenario description.
struct ScenarioConfig {
  GridSpec grid{256, 256.0};

  double dt = 0.01;
  double t_end = 100.0;
  double sample_interval = 0.1;
  /// Start of the a priori bound window (t0 of the decay estimates).
  double t0 = 1.0;

  RadialVortexParams vortex;

  InitKind init_kind = InitKind::prescribed_gamma;
  double gamma = 1.0;
  std::uint64_t seed = 1;
  double amplitude = 0.1;
  std::string init_file;

  Mode mode = Mode::perturbation;

  std::optional<double> fit_t_min;
  std::optional<double> fit_t_max;

  double C0 = 1.0;
  double q = 4.0;

  std::string output_dir = "out";

  /// Throws ConfigError naming the offending key.
  void validate() const;
  [[nodiscard]] SolverConfig solver_config() const;
  /// Explicit window, or [10, min(100, validity time, t_end)] when unset.
  /// Empty (nullopt) when the default window does not fit the run.
  [[nodiscard]] std::optional<std::pair<double, double>> fit_window() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates; unknown keys and malformed lines are ConfigErrors
/// carrying the line number.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical text: every key in a fixed order, numbers with 17 significant
/// digits, unset optional keys omitted. parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// FNV-1a of the canonical text without output.dir.
std::uint64_t config_hash(const ScenarioConfig& config);
std::string hash_hex(std::uint64_t h);

/// Applies NSDECAY_OUTPUT_DIR when set.
void apply_environment(ScenarioConfig& config);

}  // namespace nsdecay
