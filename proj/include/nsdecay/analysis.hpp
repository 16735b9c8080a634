#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nsdecay/field.hpp"
#include "nsdecay/solver.hpp"
#include "nsdecay/vortex.hpp"

namespace nsdecay {

/// Least-squares slope of log E against log(1 + t) over the rows in `window`.
struct DecayFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  std::pair<double, double> window;
  std::size_t samples = 0;
};
DecayFit fit_decay_rate(const EnergySeries& series, std::pair<double, double> window);

/// max/min of E(t) (1 + t)^gamma over the rows in `window`.
double compensated_ratio(const EnergySeries& series, std::pair<double, double> window, double gamma);

/// Fourier splitting at r^2 = (1 + C0) / (t + 1): lhs = r^2 E_high, rhs = ||grad u||^2.
struct SplitCheck {
  double r2 = 0.0;
  double E_low = 0.0;
  double E_high = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};
inline constexpr double kSplitTolerance = 1e-10;
SplitCheck fourier_split_check(const VelocityField& u, double t, double C0);
/// Same inequality for every recorded row; returns the number of violations.
std::size_t count_split_violations(const EnergySeries& series);

/// sup_{t >= t0} E(t) / (1 + t); passes when finite and the last-decade sup
/// does not exceed the first-decade sup.
struct AprioriReport {
  double constant = 0.0;
  double first_decade_sup = 0.0;
  double last_decade_sup = 0.0;
  bool pass = true;
};
AprioriReport apriori_bound_check(const EnergySeries& series, double t0);

/// dE/dt (centred differences of the series) against -2 D + 2 |Tv| at the
/// interior rows. The tolerance per row is twice the estimated truncation
/// error of the difference quotient plus 1e-8 of the local budget scale.
struct InequalityReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  // max (lhs - rhs) / tolerance over the checked rows
  std::vector<std::size_t> violating_rows;
};
InequalityReport energy_inequality_check(const EnergySeries& series);

/// Spectra of the stress tensors at one instant: the diagnostic pressure
/// p_hat = -k_i k_j T_hat_ij / |k|^2 with T = u(x)u + v(x)u + u(x)v, and the
/// Frobenius norms |(u(x)u)_hat| and |(v(x)u)_hat| per retained mode.
struct StressSpectra {
  SpectralField pressure;
  std::vector<double> uu_norm;
  std::vector<double> vu_norm;
};
/// `background` may be null (v = 0).
StressSpectra stress_spectra(const VelocityField& u, const BackgroundSnapshot* background);

/// Counts retained modes with |p_hat| > 2 |(v(x)u)_hat| + |(u(x)u)_hat| + 1e-10 * scale.
struct PressureReport {
  std::size_t modes = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;  // max |p_hat| / bound over modes with a nonzero bound
};
PressureReport pressure_bound_check(const VelocityField& u, double t, const RadialVortexParams& vortex,
                                    bool with_background = true);

/// Low-mode Duhamel bound
///   |u_hat(k,t)| <= e^{-|k|^2 t} |u0_hat(k)|
///                  + int_0^t e^{-|k|^2 (t-s)} |k| (2 |(v(x)u)_hat| + |(u(x)u)_hat| + |p_hat|) ds
/// on a strided subset of the modes with 0 < |k| < 1.
struct DuhamelSample {
  double t = 0.0;
  std::vector<double> amplitude;  // |u_hat(k, t)| per tracked mode
  std::vector<double> forcing;    // |k| (2 |vu| + |uu| + |p|) per tracked mode
};

class DuhamelRecorder {
 public:
  DuhamelRecorder(const SolverConfig& config, std::size_t max_modes = 256);
  /// Appends a sample; call at t = 0 and then at least 16 times per unit time.
  void record(const SolverState& state);
  [[nodiscard]] const std::vector<DuhamelSample>& samples() const { return samples_; }
  [[nodiscard]] const std::vector<double>& wavenumbers() const { return kabs_; }
  [[nodiscard]] std::size_t modes() const { return index_.size(); }

 private:
  SolverConfig cfg_;
  std::vector<std::size_t> index_;  // flat indices into the half spectrum
  std::vector<double> kabs_;
  std::vector<DuhamelSample> samples_;
};

struct DuhamelReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double min_margin = 0.0;  // min (rhs - lhs + tol) / scale
  bool pass = true;
};
inline constexpr double kMinDuhamelRate = 16.0;
DuhamelReport duhamel_lowmode_check(const std::vector<DuhamelSample>& samples, const std::vector<double>& kabs);

/// t^(1/2 - 1/q) ||u(t)||_q over the snapshots; passes when the last-decade
/// average is below the first-decade average (or everything vanishes).
struct Snapshot {
  double t = 0.0;
  VelocityField u;
};
struct TrendReport {
  std::vector<double> times;
  std::vector<double> values;
  double first_average = 0.0;
  double last_average = 0.0;
  bool pass = true;
};
TrendReport gallay_wayne_check(const std::vector<Snapshot>& snapshots, double q);

/// Everything a scenario reports about the decay of u.
struct DecayReport {
  double gamma_target = 0.0;
  double gamma_fitted = 0.0;
  double gamma_stderr = 0.0;
  std::pair<double, double> fit_window;
  double compensated_ratio = 0.0;
  double apriori_constant = 0.0;
  std::size_t splitting_violations = 0;
  std::size_t energy_violations = 0;
  std::size_t pressure_violations = 0;
  std::size_t duhamel_violations = 0;
  double C0 = 1.0;
  double gw_first = 0.0;
  double gw_last = 0.0;
  /// Named pass/fail verdicts in a fixed order.
  std::vector<std::pair<std::string, bool>> verdicts;
  /// Extra key=value lines (exact-solution errors and the like).
  std::vector<std::pair<std::string, std::string>> extras;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] std::string to_text() const;
  [[nodiscard]] static std::string csv_header();
  [[nodiscard]] std::string to_csv_row() const;
};

inline constexpr double kRateTolerance = 0.15;
inline constexpr double kCompensatedRatioLimit = 10.0;

}  // namespace nsdecay
