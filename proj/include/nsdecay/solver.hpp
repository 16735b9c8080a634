#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nsdecay/field.hpp"
#include "nsdecay/vortex.hpp"

namespace nsdecay {

enum class Mode { perturbation, navier_stokes, heat };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct SolverConfig {
  GridSpec grid;
  double dt = 0.01;
  double t_end = 100.0;
  double sample_interval = 0.1;
  Mode mode = Mode::perturbation;
  RadialVortexParams vortex;
  /// Constant in the splitting radius r^2 = (1 + C0) / (t + 1).
  double C0 = 1.0;

  void validate() const;
  [[nodiscard]] long steps_per_sample() const;
  [[nodiscard]] long sample_count() const;  // rows after the initial one
  /// True when the background v is active in the dynamics.
  [[nodiscard]] bool has_background() const { return mode == Mode::perturbation && vortex.alpha != 0.0; }
};

struct SolverState {
  VelocityField u;
  double t = 0.0;
  double dt = 0.0;
  Mode mode = Mode::perturbation;
  RadialVortexParams vortex;
  long step = 0;
};

/// One row of the sampled energy budget.
struct EnergyRow {
  double t = 0.0;
  double E = 0.0;       // ||u||_2^2
  double D = 0.0;       // ||grad u||_2^2
  double Tv = 0.0;      // <u . grad v, u>, as exchanged by the discrete dynamics
  double v_inf = 0.0;   // ||v(t)||_inf on the grid
  double E_low = 0.0;   // energy with |k| < r
  double E_high = 0.0;  // energy with |k| >= r
  double r2 = 0.0;      // (1 + C0) / (t + 1)
};

struct EnergySeries {
  std::vector<EnergyRow> rows;
};

/// Grid quadrature of <a . grad b, c> with products formed pseudo-spectrally.
/// For band-limited (dealiased) fields the quadrature is exact.
double advection_transfer(const VelocityField& a, const VelocityField& b, const VelocityField& c);

/// Pseudo-spectral integrator for
///   u_t + u.grad u + grad p - Lap u = -u.grad v - v.grad u,   div u = 0,
/// with v the analytic Oseen background, plus the v = 0 and linear variants.
///
/// The diffusion is integrated exactly (integrating-factor RK4); products are
/// formed on the grid and 2/3-dealiased. Transport is evaluated in rotational
/// form, (w + W) u_perp + w v_perp with w = curl u, W = curl v, so the
/// self-advection exchanges no energy on the grid and the semi-discrete
/// budget is exactly dE/dt = -2 D - 2 Tv with Tv = <w, v x u>.
/// A solver instance owns mutable scratch space; use one per thread.
class PerturbationSolver {
 public:
  explicit PerturbationSolver(const SolverConfig& config);
  ~PerturbationSolver();
  PerturbationSolver(PerturbationSolver&&) noexcept;
  PerturbationSolver& operator=(PerturbationSolver&&) noexcept;

  [[nodiscard]] const SolverConfig& config() const;

  /// Projected, dealiased nonlinear tendency (everything except Lap u).
  VelocityField nonlinear(const VelocityField& u, double t);
  /// Full tendency: nonlinear(u, t) + Lap u.
  VelocityField rhs(const VelocityField& u, double t);

  /// Advances the state by one step in place.
  void advance(SolverState& state);
  /// Functional form of advance.
  SolverState step(const SolverState& state);

  [[nodiscard]] SolverState initial_state(const VelocityField& u0) const;

  EnergyRow diagnostics(const SolverState& state);

  /// max|u| + max|v| on the grid at the state's time.
  double max_speed(const SolverState& state);
  /// 0.5 * min(h / max_speed, 1).
  double stability_bound(const SolverState& state);

  /// Cached background samples (v and W, no gradient) at time t.
  const BackgroundSnapshot& background(double t);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SimulationHooks {
  /// Called for every series row, including t = 0.
  std::function<void(const SolverState&, const EnergyRow&)> on_sample;
  /// Called after every step and once for the initial state.
  std::function<void(const SolverState&)> on_step;
};

/// Runs from t = 0 to t_end and returns one row per sample_interval.
/// Throws NumericalAbort on non-finite energy or when dt exceeds the
/// stability bound (checked at every sample).
EnergySeries simulate(const VelocityField& u0, const SolverConfig& config, const SimulationHooks& hooks = {});

}  // namespace nsdecay
