#pragma once

// Physical model of the 2D compressible Euler equations: conservative
// variables, ideal-gas equation of state, fluxes, Lax-Friedrichs numerical
// flux with its Jacobians, and boundary ghost states.

#include <Eigen/Core>

namespace mmdwr {

/// Conservative variables (rho, rho*u_x, rho*u_y, E) of one control volume.
using State = Eigen::Vector4d;
using Block4 = Eigen::Matrix4d;
using Vec2 = Eigen::Vector2d;
/// Columns are the x and y flux components.
using FluxTensor = Eigen::Matrix<double, 4, 2>;

inline constexpr double kVacuumGuard = 1e-12;

struct FreestreamSpec {
  double mach = 0.5;
  double attack_angle = 0.0;  // radians
  double p_inf = 1.0;
  double rho_inf = 1.0;
  double gamma = 1.4;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  double sound_speed() const;
  Vec2 velocity() const;
  State state() const;
};

double pressure(const State& u, double gamma);
FluxTensor physical_flux(const State& u, double gamma);
/// F(u)·n
State normal_flux(const State& u, const Vec2& n, double gamma);
/// d(F(u)·n)/du
Block4 normal_flux_jacobian(const State& u, const Vec2& n, double gamma);
double max_wave_speed(const State& u, const Vec2& n, double gamma);

State lax_friedrichs_flux(const State& uL, const State& uR, const Vec2& n, double gamma);

enum class Linearization {
  /// Dissipation coefficient held constant while differentiating.
  FrozenWaveSpeed,
  /// Includes the derivative of the dissipation coefficient (one-sided at ties).
  Exact,
};

struct FluxJacobians {
  Block4 dL;
  Block4 dR;
};

FluxJacobians flux_jacobians(const State& uL, const State& uR, const Vec2& n, double gamma,
                             Linearization lin = Linearization::FrozenWaveSpeed);

/// Mirror state for a slip wall with outward normal n.
State wall_ghost(const State& u, const Vec2& n);
Block4 wall_ghost_jacobian(const Vec2& n);

/// Characteristic far-field ghost state.
State farfield_ghost(const State& u, const Vec2& n, const FreestreamSpec& fs);
Block4 farfield_ghost_jacobian(const State& u, const Vec2& n, const FreestreamSpec& fs);

}  // namespace mmdwr
