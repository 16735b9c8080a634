#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nsdecay/spectral.hpp"
#include "nsdecay/vortex.hpp"
#include "oracles.hpp"

using namespace nsdecay;
constexpr double kPi = std::numbers::pi;

namespace {
GridSpec box(int n, double L) {
  GridSpec g;
  g.n = n;
  g.length = L;
  return g;
}

std::vector<BackgroundSnapshot> snapshots(const RadialVortexParams& p, const GridSpec& g, int count) {
  std::vector<BackgroundSnapshot> out;
  for (int i = 0; i < count; ++i) out.push_back(sample_background(p, g, std::pow(100.0, i / (count - 1.0))));
  return out;
}
}  // namespace

TEST_CASE("Oseen vortex: closed form, orthogonality, vorticity and divergence") {
  const RadialVortexParams p{2.0, 1.0};
  // t = 0, x = (1, 0): v = (alpha / 2 pi)(0, 1)(1 - e^{-1/4}).
  const auto v = oseen_velocity(p, {1.0, 0.0}, 0.0);
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(2.0 / (2.0 * kPi) * (1.0 - std::exp(-0.25))).epsilon(1e-14));
  CHECK(radial_vorticity(p, {0.0, 0.0}, 1.0) == doctest::Approx(2.0 / (8.0 * kPi)).epsilon(1e-14));
  const auto o = oseen_velocity(p, {0.0, 0.0}, 0.5);
  CHECK(o[0] == 0.0);
  CHECK(o[1] == 0.0);

  for (Vec2 x : {Vec2{0.3, -0.2}, Vec2{1e-4, 2e-4}, Vec2{3.0, 4.0}, Vec2{-20.0, 7.0}}) {
    for (double t : {0.0, 0.7, 30.0}) {
      const auto w = oseen_velocity(p, x, t);
      CHECK(std::abs(x[0] * w[0] + x[1] * w[1]) < 1e-15 * std::hypot(x[0], x[1]));
      const auto gr = oseen_gradient(p, x, t);
      const double scale = gr.frobenius() + 1e-300;
      CHECK(std::abs(gr.d1v1 + gr.d2v2) < 1e-12 * scale);
      CHECK(gr.d1v2 - gr.d2v1 == doctest::Approx(radial_vorticity(p, x, t)).epsilon(1e-10));
      // Centred differences of the velocity.
      const double d = 1e-5 * std::max(1.0, std::hypot(x[0], x[1]));
      const auto a = oseen_velocity(p, {x[0] + d, x[1]}, t), b = oseen_velocity(p, {x[0] - d, x[1]}, t);
      const auto c = oseen_velocity(p, {x[0], x[1] + d}, t), e = oseen_velocity(p, {x[0], x[1] - d}, t);
      CHECK(std::abs((a[0] - b[0]) / (2 * d) - gr.d1v1) < 1e-6 * scale);
      CHECK(std::abs((a[1] - b[1]) / (2 * d) - gr.d1v2) < 1e-6 * scale);
      CHECK(std::abs((c[0] - e[0]) / (2 * d) - gr.d2v1) < 1e-6 * scale);
      CHECK(std::abs((c[1] - e[1]) / (2 * d) - gr.d2v2) < 1e-6 * scale);
    }
  }
  // alpha = 2 pi, 4 (t + t0) = 1, x = (1, 0) -> (0, 1 - 1/e).
  const auto ex = oseen_velocity({2.0 * kPi, 0.25}, {1.0, 0.0}, 0.0);
  CHECK(ex[1] == doctest::Approx(0.63212055882855767).epsilon(1e-14));
  // Far field: point vortex up to the Gaussian tail; near field: linear.
  const auto far = oseen_velocity(p, {0.0, 30.0}, 1.0);
  CHECK(std::abs(far[0] + 2.0 / (2.0 * kPi * 30.0)) <= 1e-14);
  const auto n1 = oseen_velocity(p, {1e-4, 0.0}, 1.0), n2 = oseen_velocity(p, {2e-4, 0.0}, 1.0);
  CHECK(n2[1] / n1[1] == doctest::Approx(2.0).epsilon(1e-7));
  CHECK_THROWS_AS((RadialVortexParams{1.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS(radial_vorticity(p, {0.0, 0.0}, -1.0), std::invalid_argument);
}

TEST_CASE("radial profiles: quadrature matches Gaussian and top-hat closed forms") {
  const RadialVortexParams p{1.5, 2.0};
  const double t = 1.0;
  auto gauss = [&](double s) { return radial_vorticity(p, {s, 0.0}, t); };
  for (Vec2 x : {Vec2{0.1, 0.0}, Vec2{2.0, -1.0}, Vec2{8.0, 9.0}}) {
    const auto q = radial_velocity_from_profile(gauss, x);
    const auto e = oseen_velocity(p, x, t);
    CHECK(q[0] == doctest::Approx(e[0]).epsilon(1e-9));
    CHECK(q[1] == doctest::Approx(e[1]).epsilon(1e-9));
  }
  const auto zero = radial_velocity_from_profile([](double) { return 0.0; }, {1.0, 2.0});
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
  // Solid-body core of radius R, irrotational outside.
  const double R = 2.0;
  auto hat = [&](double s) { return s < R ? 1.0 : 0.0; };
  const auto in = radial_velocity_from_profile(hat, {1.0, 0.5});
  CHECK(in[0] == doctest::Approx(-0.25).epsilon(1e-8));
  CHECK(in[1] == doctest::Approx(0.5).epsilon(1e-8));
  const auto out = radial_velocity_from_profile(hat, {0.0, 4.0});
  CHECK(out[0] == doctest::Approx(-R * R / (2.0 * 4.0)).epsilon(1e-8));
  CHECK(std::abs(out[1]) < 1e-14);
}

TEST_CASE("periodic Biot-Savart: closed-form examples") {
  const auto g = box(32, 2.0 * kPi);
  PhysicalField w(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) w(i, j) = std::sin(g.coord(i));
  const auto u = biot_savart_spectral(from_physical(w));
  double err = 0.0;
  const auto u2 = to_physical(u.u2);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) err = std::max(err, std::abs(u2(i, j) + std::cos(g.coord(i))));
  CHECK(err < 1e-14);
  CHECK(u.u1.max_abs() < 1e-15);
  const auto z = biot_savart_spectral(SpectralField(g));
  CHECK(z.u1.max_abs() == 0.0);
  CHECK(z.u2.max_abs() == 0.0);
}

TEST_CASE("periodic Biot-Savart: direct quadrature oracle, curl identity, divergence") {
  const auto g = box(32, 10.0);
  const auto w = oracle::smooth_field(g, 4, 4);
  const auto u = biot_savart_spectral(from_physical(w));
  const auto [d1, d2] = oracle::biot_savart_direct(w);
  const double scale = std::max(oracle::max_abs(d1), oracle::max_abs(d2));
  CHECK(oracle::max_abs_diff(to_physical(u.u1), d1) <= 1e-6 * scale);
  CHECK(oracle::max_abs_diff(to_physical(u.u2), d2) <= 1e-6 * scale);
  CHECK(max_divergence(u) < 1e-12 * scale);
  const auto back = to_physical(curl2d(u));
  CHECK(oracle::max_abs_diff(back, w) <= 1e-12 * oracle::max_abs(w));

  // A random field loses exactly its mean and its Nyquist content.
  const auto r = from_physical(oracle::random_field(g, 5));
  auto expect = r;
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.half(); ++b)
      if ((a == 0 && b == 0) || g.is_nyquist(a, b)) expect(a, b) = {};
  CHECK((curl2d(biot_savart_spectral(r)) - expect).max_abs() <= 1e-12 * r.max_abs());
}

TEST_CASE("Biot-Savart of a sampled Gaussian approaches the Oseen velocity") {
  // The periodic correction of a compact, zero-circulation-compensated Gaussian
  // is small near the centre of a large box.
  const auto g = box(256, 128.0);
  const RadialVortexParams p{1.0, 1.0};
  auto w = sample_radial_vorticity(p, g, 0.0);
  const auto u = biot_savart_spectral(from_physical(w));
  const auto uf = to_physical(u.u2);
  double err = 0.0, ref = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto e = oseen_velocity(p, {g.coord(i), 0.0}, 0.0);
    err = std::max(err, std::abs(uf(i, 0) - e[1]));
    ref = std::max(ref, std::abs(e[1]));
  }
  // The mean removal adds a uniform shear of order alpha x / L^2.
  CHECK(err < 0.02 * ref);
}

TEST_CASE("sampled background agrees with the pointwise formulas") {
  const auto g = box(64, 40.0);
  const RadialVortexParams p{-3.0, 0.5};
  const auto b = sample_background(p, g, 2.0);
  const auto lite = sample_background(p, g, 2.0, false);
  CHECK(lite.d1v1.values().empty());
  double err = 0.0;
  for (int i = 0; i < g.n; i += 3)
    for (int j = 0; j < g.n; j += 5) {
      const Vec2 x{g.coord(i), g.coord(j)};
      const auto v = oseen_velocity(p, x, 2.0);
      const auto gr = oseen_gradient(p, x, 2.0);
      err = std::max({err, std::abs(b.v1(i, j) - v[0]), std::abs(b.v2(i, j) - v[1]),
                      std::abs(b.omega(i, j) - radial_vorticity(p, x, 2.0)), std::abs(b.d1v1(i, j) - gr.d1v1),
                      std::abs(b.d2v1(i, j) - gr.d2v1), std::abs(b.d1v2(i, j) - gr.d1v2),
                      std::abs(b.d2v2(i, j) - gr.d2v2), std::abs(lite.v1(i, j) - v[0])});
    }
  CHECK(err < 1e-14);
  CHECK(oracle::max_abs_diff(sample_radial_vorticity(p, g, 2.0), b.omega) == 0.0);
}

TEST_CASE("scaled background norms stay bounded and match the sup oracle") {
  const auto g = box(256, 64.0);
  const RadialVortexParams p{1.0, 1.0};
  const auto snaps = snapshots(p, g, 21);

  const auto sup = vass_check(snaps, kInfinity, 0);
  CHECK(sup.pass);
  CHECK(sup.growth <= kGrowthTolerance);
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const double t = snaps[i].t;
    const double expect = std::sqrt(t) * oracle::oseen_sup(p.alpha, t, p.t0);
    CHECK(sup.scaled[i] == doctest::Approx(expect).epsilon(0.01));
  }
  // Large-time limit of t^(1/2) ||v||_inf: 0.0508 |alpha|.
  CHECK(std::sqrt(1e6) * oracle::oseen_sup(p.alpha, 1e6, p.t0) == doctest::Approx(0.0508).epsilon(2e-3));

  const auto grad = vass_check(snaps, kInfinity, 1);
  CHECK(grad.pass);
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const double t = snaps[i].t;
    CHECK(grad.scaled[i] == doctest::Approx(t * oracle::oseen_grad_sup(p.alpha, t, p.t0)).epsilon(0.01));
  }

  for (double eta : {4.0, 8.0}) {
    const auto r = vass_check(snaps, eta, 0);
    INFO("eta = " << eta);
    CHECK(r.pass);
  }
  // No circulation: every norm vanishes and the check passes.
  const auto none = snapshots({0.0, 1.0}, box(32, 16.0), 5);
  const auto zero = vass_check(none, kInfinity, 0);
  CHECK(zero.pass);
  CHECK(zero.sup == 0.0);
  CHECK(vass_check(none, kInfinity, 1).pass);
  CHECK_THROWS_AS(vass_check(snaps, 2.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(vass_check(snaps, 4.0, 1), std::invalid_argument);
}

TEST_CASE("interpolation ratio is scale invariant and finite") {
  const auto g = box(256, 100.0);
  const auto small = interpolation_bound_check(from_physical(oracle::dipole(g, 1.0, 1.0, 4.0)), 1.0, kInfinity);
  const auto large = interpolation_bound_check(from_physical(oracle::dipole(g, 1.0, 4.0, 8.0)), 1.0, kInfinity);
  CHECK(small.a == doctest::Approx(0.5));
  CHECK(std::isfinite(small.ratio));
  CHECK(small.ratio > 0.0);
  CHECK(large.ratio == doctest::Approx(small.ratio).epsilon(0.02));
  const auto mid = interpolation_bound_check(from_physical(oracle::dipole(g, 1.0, 1.0, 4.0)), 1.5, 4.0);
  CHECK(mid.a == doctest::Approx((0.5 - 0.25) / (1.0 / 1.5 - 0.25)));
  CHECK_THROWS_AS(interpolation_bound_check(from_physical(oracle::gaussian(g, 1.0, 1.0)), 1.0, kInfinity),
                  std::invalid_argument);
}
