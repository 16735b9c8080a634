#include "nsdecay/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "nsdecay/decomposition.hpp"
#include "nsdecay/error.hpp"
#include "nsdecay/heat.hpp"
#include "nsdecay/spectral.hpp"

namespace nsdecay {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

int wrap_index(int i, int n) { return (i + n / 2) % n; }

VelocityField taylor_green(const GridSpec& g, double amplitude) {
  const double k0 = g.dk();
  PhysicalField a(g), b(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double x = k0 * g.coord(i), y = k0 * g.coord(j);
      a(i, j) = amplitude * std::sin(x) * std::cos(y);
      b(i, j) = -amplitude * std::cos(x) * std::sin(y);
    }
  return VelocityField(from_physical(a), from_physical(b));
}

/// Up to `count` sample indices, log-spaced between t_lo and t_end.
std::set<long> snapshot_indices(double t_lo, double t_end, double interval, int count) {
  std::set<long> out;
  const long last = std::lround(t_end / interval);
  for (int i = 0; i < count; ++i) {
    const double t = t_lo * std::pow(t_end / t_lo, count == 1 ? 1.0 : static_cast<double>(i) / (count - 1));
    out.insert(std::clamp<long>(std::lround(t / interval), 1, last));
  }
  return out;
}

}  // namespace

VorticityFile read_vorticity_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read vorticity file '" + path.string() + "'");
  std::string header;
  std::getline(in, header);
  const auto comma = header.find(',');
  if (comma == std::string::npos) throw ConfigError(path.string() + ": line 1: expected header 'n,length'");
  VorticityFile f;
  try {
    std::size_t used = 0;
    const std::string ns = header.substr(0, comma), ls = header.substr(comma + 1);
    f.grid.n = std::stoi(ns, &used);
    if (used != ns.size()) throw std::invalid_argument("n");
    f.grid.length = std::stod(ls, &used);
    if (ls.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("length");
    f.grid.validate();
  } catch (const std::exception&) {
    throw ConfigError(path.string() + ": line 1: invalid header '" + header + "'");
  }
  const int n = f.grid.n;
  f.omega = PhysicalField(f.grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = 0.0;
      if (!(in >> x) || !std::isfinite(x))
        throw ConfigError(path.string() + ": expected " + std::to_string(static_cast<long>(n) * n) +
                          " finite values, value " + std::to_string(static_cast<long>(i) * n + j) + " is missing or invalid");
      f.omega(wrap_index(i, n), wrap_index(j, n)) = x;
    }
  std::string extra;
  if (in >> extra) throw ConfigError(path.string() + ": trailing data after " + std::to_string(static_cast<long>(n) * n) + " values");
  return f;
}

void write_vorticity_file(const std::filesystem::path& path, const PhysicalField& omega) {
  const auto& g = omega.grid();
  std::ostringstream os;
  os << g.n << ',' << fmt17(g.length) << '\n';
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) os << (j ? " " : "") << fmt17(omega(wrap_index(i, g.n), wrap_index(j, g.n)));
    os << '\n';
  }
  write_file(path, os.str());
}

VelocityField build_initial_data(const ScenarioConfig& config, RadialVortexParams& vortex) {
  vortex = config.vortex;
  const auto& g = config.grid;
  switch (config.init_kind) {
    case InitKind::prescribed_gamma:
      try {
        return make_initial_data(config.gamma, g, config.seed, config.amplitude);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("init: ") + e.what());
      }
    case InitKind::taylor_green: return taylor_green(g, config.amplitude);
    case InitKind::zero: return VelocityField(g);
    case InitKind::vorticity_file: {
      const auto file = read_vorticity_file(config.init_file);
      if (!(file.grid.n == g.n && file.grid.length == g.length))
        throw ConfigError("init.file: grid " + std::to_string(file.grid.n) + "," + fmt17(file.grid.length) +
                          " does not match grid.n/grid.length");
      try {
        auto d = radial_energy_decompose(from_physical(file.omega, g), config.vortex.t0);
        vortex = d.vortex;
        return d.u0;
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("init.file: ") + e.what());
      }
    }
  }
  throw ConfigError("init.kind: unsupported");
}

std::string series_csv(const EnergySeries& series) {
  std::string out = std::string(kSeriesHeader) + "\n";
  for (const auto& r : series.rows) {
    out += fmt17(r.t) + ',' + fmt17(r.E) + ',' + fmt17(r.D) + ',' + fmt17(r.Tv) + ',' + fmt17(r.v_inf) + ',' +
           fmt17(r.E_low) + ',' + fmt17(r.E_high) + ',' + fmt17(r.r2) + '\n';
  }
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig& config_in) {
  const auto start = std::chrono::steady_clock::now();
  config_in.validate();
  ScenarioConfig config = config_in;
  const std::filesystem::path dir = config.output_dir;
  ensure_dir(dir);

  RadialVortexParams vortex;
  const VelocityField u0 = build_initial_data(config, vortex);
  config.vortex = vortex;
  SolverConfig scfg = config.solver_config();

  ScenarioResult result;
  DecayReport& rep = result.report;
  rep.C0 = config.C0;
  rep.extras.emplace_back("config_hash", hash_hex(config_hash(config_in)));
  rep.extras.emplace_back("run.mode", to_string(config.mode));
  rep.extras.emplace_back("init.kind", to_string(config.init_kind));
  rep.extras.emplace_back("vortex.alpha", fmt17(vortex.alpha));

  // Snapshot schedule for the pressure and Gallay-Wayne checks.
  const auto snap_idx = snapshot_indices(std::max(config.t0, config.sample_interval), config.t_end,
                                         config.sample_interval, 20);
  std::vector<Snapshot> snapshots;

  // Duhamel low-mode record at >= 16 samples per unit time.
  const long duhamel_stride = static_cast<long>(std::floor(1.0 / (kMinDuhamelRate * config.dt) + 1e-9));
  std::optional<DuhamelRecorder> duhamel;
  if (duhamel_stride >= 1) duhamel.emplace(scfg);

  // Taylor-Green is an exact solution whenever v = 0.
  const bool tg_exact = config.init_kind == InitKind::taylor_green && !scfg.has_background();
  const double k0sq = config.grid.dk() * config.grid.dk();
  double tg_error = 0.0;
  const double tg_norm = std::sqrt(energy(u0));
  VelocityField tg_ref;

  SimulationHooks hooks;
  hooks.on_step = [&](const SolverState& s) {
    if (duhamel && s.step % duhamel_stride == 0) duhamel->record(s);
  };
  hooks.on_sample = [&](const SolverState& s, const EnergyRow&) {
    const long k = std::lround(s.t / config.sample_interval);
    if (snap_idx.count(k)) snapshots.push_back({s.t, s.u});
    if (tg_exact) {
      if (tg_ref.u1.coeffs().empty()) tg_ref = s.u;  // projected initial state
      VelocityField diff = s.u;
      VelocityField exact = tg_ref;
      exact *= std::exp(-2.0 * k0sq * s.t);
      diff.u1 -= exact.u1;
      diff.u2 -= exact.u2;
      if (tg_norm > 0.0) tg_error = std::max(tg_error, std::sqrt(energy(diff)) / tg_norm);
    }
  };

  try {
    result.series = simulate(u0, scfg, hooks);
  } catch (const NumericalAbort& e) {
    result.exit_code = 3;
    result.abort_row = e.row();
    result.message = std::string(e.what()) + " (last completed row " + std::to_string(e.row()) + ")";
    rep.extras.emplace_back("abort", result.message);
    rep.verdicts.emplace_back("numerical_stability", false);
    write_file(dir / "report.txt", rep.to_text());
    write_file(dir / "report.csv", DecayReport::csv_header() + "\n" + rep.to_csv_row() + "\n");
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }
  const auto& series = result.series;

  // Decay rate.
  rep.gamma_target = config.init_kind == InitKind::prescribed_gamma ? config.gamma
                                                                    : std::numeric_limits<double>::quiet_NaN();
  rep.gamma_fitted = rep.gamma_stderr = rep.compensated_ratio = std::numeric_limits<double>::quiet_NaN();
  if (const auto window = config.fit_window()) {
    rep.fit_window = *window;
    try {
      const auto fit = fit_decay_rate(series, *window);
      rep.gamma_fitted = -fit.slope;
      rep.gamma_stderr = fit.stderr_slope;
      if (config.init_kind == InitKind::prescribed_gamma) {
        rep.compensated_ratio = compensated_ratio(series, *window, config.gamma);
        const bool ok = std::abs(rep.gamma_fitted - config.gamma) <= kRateTolerance &&
                        rep.compensated_ratio <= kCompensatedRatioLimit;
        rep.verdicts.emplace_back("decay_rate", ok);
      }
    } catch (const std::invalid_argument& e) {
      rep.extras.emplace_back("decay_rate", std::string("skipped: ") + e.what());
      if (config.init_kind == InitKind::prescribed_gamma) rep.verdicts.emplace_back("decay_rate", false);
    }
  } else {
    rep.fit_window = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    rep.extras.emplace_back("decay_rate", "skipped: run shorter than the default fit window");
  }

  const auto apriori = apriori_bound_check(series, config.t0);
  rep.apriori_constant = apriori.constant;
  rep.verdicts.emplace_back("apriori_bound", apriori.pass);

  rep.splitting_violations = count_split_violations(series);
  for (const auto& s : snapshots)
    if (!fourier_split_check(s.u, s.t, config.C0).holds) ++rep.splitting_violations;
  rep.verdicts.emplace_back("fourier_splitting", rep.splitting_violations == 0);

  const auto ineq = energy_inequality_check(series);
  rep.energy_violations = ineq.violations;
  rep.extras.emplace_back("energy_inequality_worst", fmt17(ineq.worst_excess));
  rep.verdicts.emplace_back("energy_inequality", ineq.violations == 0);

  double pressure_ratio = 0.0;
  for (const auto& s : snapshots) {
    const auto pr = pressure_bound_check(s.u, s.t, vortex, scfg.has_background());
    rep.pressure_violations += pr.violations;
    pressure_ratio = std::max(pressure_ratio, pr.max_ratio);
  }
  rep.extras.emplace_back("pressure_snapshots", std::to_string(snapshots.size()));
  rep.extras.emplace_back("pressure_max_ratio", fmt17(pressure_ratio));
  rep.verdicts.emplace_back("pressure_bound", rep.pressure_violations == 0);

  if (duhamel) {
    const auto d = duhamel_lowmode_check(duhamel->samples(), duhamel->wavenumbers());
    rep.duhamel_violations = d.violations;
    rep.extras.emplace_back("duhamel_modes", std::to_string(duhamel->modes()));
    rep.extras.emplace_back("duhamel_checked", std::to_string(d.checked));
    rep.verdicts.emplace_back("duhamel_lowmode", d.pass);
  } else {
    rep.extras.emplace_back("duhamel_lowmode", "skipped: time.dt above 1/16");
  }

  rep.gw_first = rep.gw_last = std::numeric_limits<double>::quiet_NaN();
  if (config.mode == Mode::perturbation && !snapshots.empty()) {
    const auto gw = gallay_wayne_check(snapshots, config.q);
    rep.gw_first = gw.first_average;
    rep.gw_last = gw.last_average;
    rep.verdicts.emplace_back("gallay_wayne", gw.pass);
  }

  if (tg_exact) {
    rep.extras.emplace_back("tg_error", fmt17(tg_error));
    rep.verdicts.emplace_back("taylor_green", tg_error <= 1e-8);
  }

  write_file(dir / "series.csv", series_csv(series));
  write_file(dir / "report.txt", rep.to_text());
  write_file(dir / "report.csv", DecayReport::csv_header() + "\n" + rep.to_csv_row() + "\n");
  result.exit_code = rep.pass() ? 0 : 1;
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepHeader) + "\n";
  for (const auto& r : rows) {
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", r.wall_time);
    out += r.config_hash + ',' + fmt17(r.gamma_target) + ',' + fmt17(r.gamma_fitted) + ',' + fmt17(r.apriori_constant) +
           ',' + std::to_string(r.violations) + ',' + r.status + ',' + wall + '\n';
  }
  return out;
}

int run_sweep(const std::vector<ScenarioConfig>& configs, int jobs, const std::filesystem::path& dir,
              std::vector<SweepRow>* rows_out) {
  if (jobs < 1) throw ConfigError("--jobs must be >= 1");
  ensure_dir(dir);
  std::vector<SweepRow> rows(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      ScenarioConfig cfg = configs[i];
      SweepRow& row = rows[i];
      row.config_hash = hash_hex(config_hash(cfg));
      row.gamma_target = cfg.gamma;
      row.gamma_fitted = row.apriori_constant = std::numeric_limits<double>::quiet_NaN();
      cfg.output_dir = (dir / (std::to_string(i) + "-" + row.config_hash)).string();
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto res = run_scenario(cfg);
        row.gamma_fitted = res.report.gamma_fitted;
        row.apriori_constant = res.report.apriori_constant;
        row.violations = res.report.splitting_violations + res.report.energy_violations +
                         res.report.pressure_violations + res.report.duhamel_violations;
        row.status = res.exit_code == 0 ? "pass" : res.exit_code == 3 ? "abort" : "fail";
      } catch (const std::exception& e) {
        row.status = "error";
        std::fprintf(stderr, "scenario %zu: %s\n", i, e.what());
      }
      row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  {
    std::vector<std::jthread> pool;
    const int n = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(configs.size(), 1)));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  write_file(dir / "sweep.csv", sweep_csv(rows));
  if (rows_out) *rows_out = rows;
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.status == "pass"; }) ? 0 : 1;
}

}  // namespace nsdecay
