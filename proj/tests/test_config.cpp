#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nsdecay/config.hpp"
#include "nsdecay/error.hpp"
#include "nsdecay/scenario.hpp"
#include "nsdecay/spectral.hpp"
#include "oracles.hpp"

using namespace nsdecay;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("nsdecay_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NSDECAY_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// A quick scenario: small box, short run.
std::string small_config(const fs::path& out, const std::string& extra = "") {
  return "grid.n = 32\ngrid.length = 32\ntime.dt = 0.02\ntime.t_end = 2\ntime.sample_interval = 0.1\n"
         "time.t0 = 0.5\nvortex.alpha = 1\noutput.dir = " +
         out.string() + "\n" + extra;
}
}  // namespace

TEST_CASE("config defaults") {
  const auto c = parse_config("");
  CHECK(c.grid.n == 256);
  CHECK(c.grid.length == 256.0);
  CHECK(c.dt == 0.01);
  CHECK(c.t_end == 100.0);
  CHECK(c.sample_interval == 0.1);
  CHECK(c.vortex.alpha == 1.0);
  CHECK(c.vortex.t0 == 1.0);
  CHECK(c.init_kind == InitKind::prescribed_gamma);
  CHECK(c.gamma == 1.0);
  CHECK(c.mode == Mode::perturbation);
  CHECK(c.C0 == 1.0);
  CHECK(c.q == 4.0);
  CHECK(c.output_dir == "out");
  CHECK_FALSE(c.fit_t_min.has_value());
  const auto w = c.fit_window();
  REQUIRE(w.has_value());
  CHECK(w->first == 10.0);
  CHECK(w->second == 100.0);
  CHECK(parse_config("# comment only\n\n   \n") == c);
}

TEST_CASE("config errors name the line and the key") {
  CHECK(error_of("grid.n = 64\nbogus.key = 1\n").find("line 2") != std::string::npos);
  CHECK(error_of("grid.n = 64\nbogus.key = 1\n").find("bogus.key") != std::string::npos);
  CHECK(error_of("time.dt = 0.01\ntime.dt = 0.02\n").find("duplicate") != std::string::npos);
  CHECK(error_of("time.dt = abc\n").find("time.dt") != std::string::npos);
  CHECK(error_of("time.dt = 0.01x\n").find("line 1") != std::string::npos);
  CHECK(error_of("grid.n\n").find("line 1") != std::string::npos);
  CHECK(error_of("grid.n = 100\n").find("grid.n") != std::string::npos);
  CHECK(error_of("time.dt = -1\n").find("time.dt") != std::string::npos);
  CHECK(error_of("time.sample_interval = 0.015\n").find("time.sample_interval") != std::string::npos);
  CHECK(error_of("init.gamma = 1.5\n").find("init.gamma") != std::string::npos);
  CHECK(error_of("init.kind = spiral\n").find("init.kind") != std::string::npos);
  CHECK(error_of("run.mode = euler\n").find("run.mode") != std::string::npos);
  CHECK(error_of("fit.t_min = 10\n").find("fit.t") != std::string::npos);
  CHECK(error_of("fit.t_min = 20\nfit.t_max = 10\n").find("fit.t_max") != std::string::npos);
  CHECK(error_of("grid.length = 32\nfit.t_min = 10\nfit.t_max = 100\n").find("validity") != std::string::npos);
  CHECK(error_of("init.kind = vorticity_file\n").find("init.file") != std::string::npos);
  CHECK(error_of("analysis.q = 2\n").find("analysis.q") != std::string::npos);
  CHECK(error_of("init.seed = -3\n").find("init.seed") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("serialization round-trips arbitrary valid configs") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int it = 0; it < 300; ++it) {
    ScenarioConfig c;
    c.grid.n = 8 << (rng() % 6);
    c.grid.length = 10.0 + 500.0 * u(rng);
    c.dt = 1e-3 * (1 + rng() % 50);
    c.sample_interval = c.dt * static_cast<double>(1 + rng() % 20);
    c.t_end = c.sample_interval * static_cast<double>(20 + rng() % 2000);
    c.t0 = c.t_end * (0.01 + 0.5 * u(rng));
    c.vortex.alpha = -5.0 + 10.0 * u(rng);
    c.vortex.t0 = 0.1 + 3.0 * u(rng);
    c.init_kind = static_cast<InitKind>(rng() % 4);
    if (c.init_kind == InitKind::vorticity_file) c.init_file = "data/w" + std::to_string(rng() % 100) + ".txt";
    c.gamma = c.init_kind == InitKind::prescribed_gamma ? 0.01 + 0.99 * u(rng) : u(rng);
    c.seed = rng();
    c.amplitude = 1e-3 + u(rng);
    c.mode = static_cast<Mode>(rng() % 3);
    if (rng() % 2) {
      const double hi = std::min(c.t_end, c.grid.validity_time());
      if (hi > c.t0) {
        c.fit_t_min = c.t0 + (hi - c.t0) * 0.3 * u(rng);
        c.fit_t_max = *c.fit_t_min + (hi - *c.fit_t_min) * (0.5 + 0.5 * u(rng));
      }
    }
    c.C0 = 0.1 + 5.0 * u(rng);
    c.q = 2.5 + 10.0 * u(rng);
    c.output_dir = "runs/r" + std::to_string(it);
    REQUIRE_NOTHROW(c.validate());
    const auto text = serialize_config(c);
    const auto back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
    CHECK(config_hash(back) == config_hash(c));
  }
}

TEST_CASE("config hash ignores the output directory only") {
  auto a = parse_config("grid.n = 64\n");
  auto b = a;
  b.output_dir = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(hash_hex(0xabcull) == "0000000000000abc");
  CHECK(hash_hex(config_hash(a)).size() == 16u);

  ::setenv("NSDECAY_OUTPUT_DIR", "/tmp/from-env", 1);
  apply_environment(a);
  ::unsetenv("NSDECAY_OUTPUT_DIR");
  CHECK(a.output_dir == "/tmp/from-env");
}

TEST_CASE("vorticity files: round trip, centred ordering, malformed input") {
  const auto dir = scratch("vort");
  GridSpec g;
  g.n = 16;
  g.length = 8.0;
  const auto w = oracle::gaussian(g, 1.0, 0.3, 1.0, -0.5);
  write_vorticity_file(dir / "w.txt", w);
  const auto back = read_vorticity_file(dir / "w.txt");
  CHECK(back.grid == g);
  CHECK(oracle::max_abs_diff(back.omega, w) == 0.0);

  // Entry 0 of the file is the corner (-L/2, -L/2).
  std::ifstream in(dir / "w.txt");
  std::string header;
  double first = 0.0;
  in >> header >> first;
  CHECK(first == w(g.n / 2, g.n / 2));

  spit(dir / "short.txt", "16,8\n1 2 3\n");
  CHECK_THROWS_AS(read_vorticity_file(dir / "short.txt"), ConfigError);
  spit(dir / "header.txt", "sixteen\n");
  CHECK_THROWS_AS(read_vorticity_file(dir / "header.txt"), ConfigError);
  CHECK_THROWS_AS(read_vorticity_file(dir / "missing.txt"), ConfigError);
}

TEST_CASE("scenarios are deterministic and write their outputs") {
  const auto dir = scratch("det");
  const auto a = run_scenario(parse_config(small_config(dir / "a")));
  const auto b = run_scenario(parse_config(small_config(dir / "b")));
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.series.rows.size() == 21u);
  const auto sa = slurp(dir / "a" / "series.csv");
  CHECK(sa.substr(0, sa.find('\n')) == kSeriesHeader);
  CHECK(sa == slurp(dir / "b" / "series.csv"));
  CHECK(slurp(dir / "a" / "report.txt") == slurp(dir / "b" / "report.txt"));
  CHECK(fs::exists(dir / "a" / "report.csv"));
  CHECK(slurp(dir / "a" / "report.txt").find("check.apriori_bound=") != std::string::npos);
}

TEST_CASE("Taylor-Green scenario reports the exact-solution error") {
  const auto dir = scratch("tg");
  const auto res = run_scenario(parse_config(small_config(dir / "tg", "init.kind = taylor_green\nrun.mode = navier_stokes\n")));
  const auto text = res.report.to_text();
  CHECK(text.find("check.taylor_green=pass") != std::string::npos);
  CHECK(res.exit_code == 0);
}

TEST_CASE("vorticity-file scenarios move the circulation into the vortex") {
  const auto dir = scratch("vf");
  GridSpec g;
  g.n = 32;
  g.length = 32.0;
  write_vorticity_file(dir / "w.txt", oracle::gaussian(g, 2.0, 1.0, 1.0, 0.0));
  auto cfg = parse_config(small_config(dir / "out", "init.kind = vorticity_file\ninit.file = " + (dir / "w.txt").string() + "\n"));
  RadialVortexParams v;
  const auto u0 = build_initial_data(cfg, v);
  CHECK(v.alpha == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(energy(u0) > 0.0);
  cfg.grid.n = 64;
  CHECK_THROWS_AS(build_initial_data(cfg, v), ConfigError);
}

TEST_CASE("zero data passes trivially in every mode") {
  const auto dir = scratch("zero");
  for (const char* mode : {"perturbation", "navier_stokes", "heat"}) {
    const auto res = run_scenario(
        parse_config(small_config(dir / mode, std::string("init.kind = zero\nrun.mode = ") + mode + "\n")));
    INFO(mode);
    CHECK(res.exit_code == 0);
    for (const auto& r : res.series.rows) CHECK(r.E == 0.0);
  }
}

TEST_CASE("empty sweep writes an empty table") {
  const auto dir = scratch("empty");
  std::vector<SweepRow> rows;
  CHECK(run_sweep({}, 4, dir, &rows) == 0);
  CHECK(rows.empty());
  CHECK(slurp(dir / "sweep.csv") == std::string(kSweepHeader) + "\n");
}

TEST_CASE("sweeps do not depend on the number of jobs") {
  const auto dir = scratch("sweep");
  std::vector<ScenarioConfig> cfgs;
  for (int seed = 1; seed <= 3; ++seed) cfgs.push_back(parse_config(small_config(dir, "init.seed = " + std::to_string(seed) + "\n")));
  std::vector<SweepRow> r1, r3;
  run_sweep(cfgs, 1, dir / "j1", &r1);
  run_sweep(cfgs, 3, dir / "j3", &r3);
  REQUIRE(r1.size() == 3u);
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].config_hash == r3[i].config_hash);
    CHECK(std::memcmp(&r1[i].gamma_fitted, &r3[i].gamma_fitted, sizeof(double)) == 0);
    CHECK(r1[i].apriori_constant == r3[i].apriori_constant);
    CHECK(r1[i].violations == r3[i].violations);
    CHECK(r1[i].status == r3[i].status);
    const auto sub = std::to_string(i) + "-" + r1[i].config_hash;
    CHECK(slurp(dir / "j1" / sub / "series.csv") == slurp(dir / "j3" / sub / "series.csv"));
  }
  const auto csv = slurp(dir / "j1" / "sweep.csv");
  CHECK(csv.substr(0, csv.find('\n')) == kSweepHeader);
  CHECK_THROWS_AS(run_sweep(cfgs, 0, dir / "j0"), ConfigError);
}

TEST_CASE("command-line exit codes") {
  const auto dir = scratch("cli");
  spit(dir / "ok.cfg", small_config(dir / "ok"));
  spit(dir / "bad.cfg", "grid.n = 100\n");
  spit(dir / "unknown.cfg", "nonsense = 1\n");
  // A step far above the stability bound.
  spit(dir / "unstable.cfg", small_config(dir / "unstable", "init.amplitude = 500\n"));
  const int ok = run_cli("simulate " + (dir / "ok.cfg").string());
  CHECK((ok == 0 || ok == 1));
  CHECK(run_cli("simulate " + (dir / "bad.cfg").string()) == 2);
  CHECK(run_cli("simulate " + (dir / "unknown.cfg").string()) == 2);
  CHECK(run_cli("simulate " + (dir / "missing.cfg").string()) == 2);
  CHECK(run_cli("simulate") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("simulate " + (dir / "unstable.cfg").string()) == 3);
  CHECK(fs::exists(dir / "unstable" / "report.txt"));
  CHECK(run_cli("--help") == 0);
  spit(dir / "w.txt", "8,4\n" + std::string(64 * 2, ' '));
  CHECK(run_cli("decompose " + (dir / "w.txt").string()) == 2);
}
