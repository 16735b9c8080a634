#include "nsdecay/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "nsdecay/error.hpp"

namespace nsdecay {

std::string to_string(InitKind k) {
  switch (k) {
    case InitKind::prescribed_gamma: return "prescribed_gamma";
    case InitKind::vorticity_file: return "vorticity_file";
    case InitKind::taylor_green: return "taylor_green";
    case InitKind::zero: return "zero";
  }
  return "unknown";
}

InitKind init_kind_from_string(const std::string& s) {
  if (s == "prescribed_gamma") return InitKind::prescribed_gamma;
  if (s == "vorticity_file") return InitKind::vorticity_file;
  if (s == "taylor_green") return InitKind::taylor_green;
  if (s == "zero") return InitKind::zero;
  throw std::invalid_argument("unknown init kind '" + s + "'");
}

namespace {

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end || std::isnan(x)) throw std::invalid_argument("invalid number '" + std::string(v) + "'");
  return x;
}

std::uint64_t parse_uint(std::string_view v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("invalid non-negative integer '" + std::string(v) + "'");
  return x;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"grid.n", [](auto& c, auto v) {
         const auto n = parse_uint(v);
         if (n > (1u << 20)) throw std::invalid_argument("too large");
         c.grid.n = static_cast<int>(n);
       }},
      {"grid.length", [](auto& c, auto v) { c.grid.length = parse_double(v); }},
      {"time.dt", [](auto& c, auto v) { c.dt = parse_double(v); }},
      {"time.t_end", [](auto& c, auto v) { c.t_end = parse_double(v); }},
      {"time.sample_interval", [](auto& c, auto v) { c.sample_interval = parse_double(v); }},
      {"time.t0", [](auto& c, auto v) { c.t0 = parse_double(v); }},
      {"vortex.alpha", [](auto& c, auto v) { c.vortex.alpha = parse_double(v); }},
      {"vortex.t0", [](auto& c, auto v) { c.vortex.t0 = parse_double(v); }},
      {"init.kind", [](auto& c, auto v) { c.init_kind = init_kind_from_string(std::string(v)); }},
      {"init.gamma", [](auto& c, auto v) { c.gamma = parse_double(v); }},
      {"init.seed", [](auto& c, auto v) { c.seed = parse_uint(v); }},
      {"init.amplitude", [](auto& c, auto v) { c.amplitude = parse_double(v); }},
      {"init.file", [](auto& c, auto v) { c.init_file = std::string(v); }},
      {"run.mode", [](auto& c, auto v) { c.mode = mode_from_string(std::string(v)); }},
      {"fit.t_min", [](auto& c, auto v) { c.fit_t_min = parse_double(v); }},
      {"fit.t_max", [](auto& c, auto v) { c.fit_t_max = parse_double(v); }},
      {"analysis.C0", [](auto& c, auto v) { c.C0 = parse_double(v); }},
      {"analysis.q", [](auto& c, auto v) { c.q = parse_double(v); }},
      {"output.dir", [](auto& c, auto v) { c.output_dir = std::string(v); }},
  };
  return table;
}

[[noreturn]] void bad(const std::string& key, const std::string& why) { throw ConfigError(key + ": " + why); }

}  // namespace

void ScenarioConfig::validate() const {
  if (grid.n < 8 || (grid.n & (grid.n - 1)) != 0) bad("grid.n", "must be a power of two >= 8");
  if (!(grid.length > 0.0) || !std::isfinite(grid.length)) bad("grid.length", "must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) bad("time.dt", "must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) bad("time.t_end", "must be positive");
  if (!(sample_interval >= dt) || !std::isfinite(sample_interval)) bad("time.sample_interval", "must be >= time.dt");
  try {
    (void)solver_config().steps_per_sample();
  } catch (const std::invalid_argument&) {
    bad("time.sample_interval", "must be an integer multiple of time.dt");
  }
  try {
    (void)solver_config().sample_count();
  } catch (const std::invalid_argument&) {
    bad("time.t_end", "must be an integer multiple of time.sample_interval");
  }
  if (!(t0 > 0.0) || !(t0 < t_end)) bad("time.t0", "must lie in (0, time.t_end)");
  if (!std::isfinite(vortex.alpha)) bad("vortex.alpha", "must be finite");
  if (!(vortex.t0 > 0.0) || !std::isfinite(vortex.t0)) bad("vortex.t0", "must be positive");
  if (init_kind == InitKind::prescribed_gamma && !(gamma > 0.0 && gamma <= 1.0))
    bad("init.gamma", "must be in (0, 1] for prescribed_gamma data");
  if (!(gamma >= 0.0 && gamma <= 1.0)) bad("init.gamma", "must be in [0, 1]");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) bad("init.amplitude", "must be positive");
  if (init_kind == InitKind::vorticity_file && init_file.empty()) bad("init.file", "required for vorticity_file data");
  auto plain_text = [](const std::string& v) {
    return v.find_first_of("#\n\r") == std::string::npos && trim(v) == std::string_view(v);
  };
  if (!plain_text(init_file)) bad("init.file", "must not contain '#', line breaks or surrounding blanks");
  if (output_dir.empty() || !plain_text(output_dir))
    bad("output.dir", "must be non-empty without '#', line breaks or surrounding blanks");
  if (!(C0 > 0.0) || !std::isfinite(C0)) bad("analysis.C0", "must be positive");
  if (!(q > 2.0)) bad("analysis.q", "must exceed 2");
  if (fit_t_min.has_value() != fit_t_max.has_value()) bad(fit_t_min ? "fit.t_max" : "fit.t_min", "fit.t_min and fit.t_max go together");
  if (fit_t_min) {
    if (!(*fit_t_min >= t0)) bad("fit.t_min", "must be >= time.t0");
    if (!(*fit_t_max > *fit_t_min)) bad("fit.t_max", "must exceed fit.t_min");
    if (!(*fit_t_max <= t_end)) bad("fit.t_max", "must be <= time.t_end");
    if (!(*fit_t_max <= grid.validity_time())) bad("fit.t_max", "must lie inside the box-validity window (L/2pi)^2/4");
  }
  try {
    solver_config().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

SolverConfig ScenarioConfig::solver_config() const {
  SolverConfig s;
  s.grid = grid;
  s.dt = dt;
  s.t_end = t_end;
  s.sample_interval = sample_interval;
  s.mode = mode;
  s.vortex = vortex;
  s.C0 = C0;
  return s;
}

std::optional<std::pair<double, double>> ScenarioConfig::fit_window() const {
  if (fit_t_min && fit_t_max) return std::pair{*fit_t_min, *fit_t_max};
  const double lo = std::max(10.0, t0);
  const double hi = std::min({100.0, grid.validity_time(), t_end});
  if (!(hi > lo)) return std::nullopt;
  return std::pair{lo, hi};
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig c;
  std::map<std::string, int> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'section.key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto& table = setters();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
    if (it == table.end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (seen.count(key))
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "' (first on line " +
                        std::to_string(seen[key]) + ")");
    seen[key] = line_no;
    if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": missing value");
    try {
      it->second(c, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {
std::string serialize_impl(const ScenarioConfig& c, bool with_output) {
  std::ostringstream os;
  os << "grid.n = " << c.grid.n << "\n"
     << "grid.length = " << num(c.grid.length) << "\n"
     << "time.dt = " << num(c.dt) << "\n"
     << "time.t_end = " << num(c.t_end) << "\n"
     << "time.sample_interval = " << num(c.sample_interval) << "\n"
     << "time.t0 = " << num(c.t0) << "\n"
     << "vortex.alpha = " << num(c.vortex.alpha) << "\n"
     << "vortex.t0 = " << num(c.vortex.t0) << "\n"
     << "init.kind = " << to_string(c.init_kind) << "\n"
     << "init.gamma = " << num(c.gamma) << "\n"
     << "init.seed = " << c.seed << "\n"
     << "init.amplitude = " << num(c.amplitude) << "\n";
  if (!c.init_file.empty()) os << "init.file = " << c.init_file << "\n";
  os << "run.mode = " << to_string(c.mode) << "\n";
  if (c.fit_t_min) os << "fit.t_min = " << num(*c.fit_t_min) << "\n";
  if (c.fit_t_max) os << "fit.t_max = " << num(*c.fit_t_max) << "\n";
  os << "analysis.C0 = " << num(c.C0) << "\n"
     << "analysis.q = " << num(c.q) << "\n";
  if (with_output) os << "output.dir = " << c.output_dir << "\n";
  return os.str();
}
}  // namespace

std::string serialize_config(const ScenarioConfig& config) { return serialize_impl(config, true); }

std::uint64_t config_hash(const ScenarioConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : serialize_impl(config, false)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void apply_environment(ScenarioConfig& config) {
  if (const char* dir = std::getenv("NSDECAY_OUTPUT_DIR"); dir && *dir) config.output_dir = dir;
}

}  // namespace nsdecay
