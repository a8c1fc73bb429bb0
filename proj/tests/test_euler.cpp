#include <doctest.h>

#include "mmdwr/euler.hpp"
#include "test_support.hpp"

using namespace mmdwr;
using namespace mmdwr::test;

TEST_CASE("pressure and energy invert the equation of state") {
  const double rho = 1.3, vx = 0.4, vy = -0.2, p = 0.9;
  const State u(rho, rho * vx, rho * vy, p / 0.4 + 0.5 * rho * (vx * vx + vy * vy));
  CHECK(pressure(u, 1.4) == doctest::Approx(p).epsilon(1e-14));
}

TEST_CASE("Lax-Friedrichs flux is consistent with the physical flux") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const State u = random_state(rng);
    const Vec2 n = random_normal(rng);
    const State h = lax_friedrichs_flux(u, u, n, 1.4);
    const State f = normal_flux(u, n, 1.4);
    CHECK((h - f).norm() <= 1e-14 * std::max(1.0, f.norm()));
  }
}

TEST_CASE("Lax-Friedrichs flux is conservative: H(a,b,n) = -H(b,a,-n)") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const State a = random_state(rng), b = random_state(rng);
    const Vec2 n = random_normal(rng);
    const State h1 = lax_friedrichs_flux(a, b, n, 1.4);
    const State h2 = lax_friedrichs_flux(b, a, -n, 1.4);
    CHECK((h1 + h2).norm() <= 1e-13 * std::max(1.0, h1.norm()));
  }
}

TEST_CASE("wave speed is |v.n| + c") {
  const State u(1.0, 0.3, 0.4, 1.0 / 0.4 + 0.125);
  const Vec2 n(0.6, 0.8);
  const double c = std::sqrt(1.4 * pressure(u, 1.4));
  CHECK(max_wave_speed(u, n, 1.4) == doctest::Approx(std::abs(0.3 * 0.6 + 0.4 * 0.8) + c).epsilon(1e-14));
}

TEST_CASE("normal flux Jacobian matches central differences") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const State u = random_state(rng);
    const Vec2 n = random_normal(rng);
    const Block4 fd = fd_jacobian([&](const State& s) { return normal_flux(s, n, 1.4); }, u);
    CHECK(rel_err(normal_flux_jacobian(u, n, 1.4), fd) < 1e-7);
  }
}

TEST_CASE("frozen-wave-speed Jacobians match differences with the wave speed held fixed") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    const State a = random_state(rng), b = random_state(rng);
    const Vec2 n = random_normal(rng);
    const double lam = std::max(max_wave_speed(a, n, 1.4), max_wave_speed(b, n, 1.4));
    // The frozen flux: central average plus fixed dissipation.
    auto flux = [&](const State& l, const State& r) {
      return State(0.5 * (normal_flux(l, n, 1.4) + normal_flux(r, n, 1.4)) - 0.5 * lam * (r - l));
    };
    const FluxJacobians J = flux_jacobians(a, b, n, 1.4, Linearization::FrozenWaveSpeed);
    CHECK(rel_err(J.dL, fd_jacobian([&](const State& s) { return flux(s, b); }, a)) < 1e-6);
    CHECK(rel_err(J.dR, fd_jacobian([&](const State& s) { return flux(a, s); }, b)) < 1e-6);
  }
}

TEST_CASE("exact Jacobians match differences of the full flux away from wave-speed ties") {
  std::mt19937_64 rng(15);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const State a = random_state(rng), b = random_state(rng);
    const Vec2 n = random_normal(rng);
    if (std::abs(max_wave_speed(a, n, 1.4) - max_wave_speed(b, n, 1.4)) < 1e-3) continue;
    const FluxJacobians J = flux_jacobians(a, b, n, 1.4, Linearization::Exact);
    CHECK(rel_err(J.dL, fd_jacobian([&](const State& s) { return lax_friedrichs_flux(s, b, n, 1.4); }, a)) < 1e-6);
    CHECK(rel_err(J.dR, fd_jacobian([&](const State& s) { return lax_friedrichs_flux(a, s, n, 1.4); }, b)) < 1e-6);
    ++checked;
  }
  CHECK(checked > 90);
}

TEST_CASE("flux is rotationally invariant") {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 50; ++i) {
    const State a = random_state(rng), b = random_state(rng);
    const Vec2 n = random_normal(rng);
    const double th = 0.37;
    const Eigen::Matrix2d R{{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}};
    auto rot = [&](const State& s) {
      State r = s;
      r.segment<2>(1) = R * s.segment<2>(1);
      return r;
    };
    const State h = lax_friedrichs_flux(a, b, n, 1.4);
    const State hr = lax_friedrichs_flux(rot(a), rot(b), R * n, 1.4);
    CHECK((rot(h) - hr).norm() <= 1e-13 * std::max(1.0, h.norm()));
  }
}

TEST_CASE("wall ghost mirrors the normal velocity and keeps density and energy") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const State u = random_state(rng);
    const Vec2 n = random_normal(rng);
    const State g = wall_ghost(u, n);
    CHECK(g[0] == u[0]);
    CHECK(g[3] == u[3]);
    const Vec2 m(u[1], u[2]), mg(g[1], g[2]);
    CHECK((m + mg).dot(n) == doctest::Approx(0.0).epsilon(1e-13).scale(1.0));
    CHECK(mg.norm() == doctest::Approx(m.norm()).epsilon(1e-13));
    CHECK(rel_err(wall_ghost_jacobian(n), fd_jacobian([&](const State& s) { return wall_ghost(s, n); }, u)) < 1e-8);
    // Only pressure crosses a slip wall: no mass or energy flux.
    const State h = lax_friedrichs_flux(u, g, n, 1.4);
    CHECK(std::abs(h[0]) < 1e-12);
    CHECK(std::abs(h[3]) < 1e-12);
  }
}

TEST_CASE("far-field ghost returns the freestream for freestream input") {
  std::mt19937_64 rng(18);
  for (double mach : {0.3, 0.8, 1.5}) {
    FreestreamSpec fs;
    fs.mach = mach;
    fs.attack_angle = 0.2;
    for (int i = 0; i < 20; ++i) {
      const Vec2 n = random_normal(rng);
      const State g = farfield_ghost(fs.state(), n, fs);
      CHECK((g - fs.state()).norm() < 1e-13);
    }
  }
}

TEST_CASE("far-field ghost Jacobian matches central differences in every regime") {
  std::mt19937_64 rng(19);
  FreestreamSpec fs;
  fs.mach = 0.6;
  fs.attack_angle = 0.1;
  for (int i = 0; i < 200; ++i) {
    const State u = random_state(rng, 1.8);
    const Vec2 n = random_normal(rng);
    const Block4 fd = fd_jacobian([&](const State& s) { return farfield_ghost(s, n, fs); }, u, 1e-7);
    CHECK(rel_err(farfield_ghost_jacobian(u, n, fs), fd) < 1e-5);
  }
}

TEST_CASE("far-field ghost is continuous across the inflow/outflow switch") {
  FreestreamSpec fs;
  fs.mach = 0.5;
  const Vec2 n(0.0, 1.0);
  State prev;
  bool first = true;
  for (int i = -200; i <= 200; ++i) {
    const double vn = 0.002 * i;
    const State u(1.0, 0.5, vn, 1.0 / 0.4 + 0.5 * (0.25 + vn * vn));
    const State g = farfield_ghost(u, n, fs);
    if (!first) CHECK((g - prev).norm() < 1e-2);
    prev = g;
    first = false;
  }
}
