#include "mmdwr/euler.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/AutoDiff>

#include "mmdwr/errors.hpp"

namespace mmdwr {

namespace {

using AD = Eigen::AutoDiffScalar<Eigen::Vector4d>;

double value_of(double x) { return x; }
double value_of(const AD& x) { return x.value(); }

template <typename T>
T pressure_of(const T& rho, const T& mx, const T& my, const T& E, double gamma) {
  if (value_of(rho) < kVacuumGuard) throw NonphysicalState("density below vacuum guard");
  T p = (gamma - 1.0) * (E - (mx * mx + my * my) / (2.0 * rho));
  if (value_of(p) < kVacuumGuard) throw NonphysicalState("pressure below vacuum guard");
  return p;
}

// Characteristic far-field closure, templated so the Jacobian can be taken
// with forward-mode automatic differentiation.
template <typename T>
void farfield_impl(const T (&u)[4], const Vec2& n, const FreestreamSpec& fs, T (&out)[4]) {
  using std::pow;
  using std::sqrt;
  const double g = fs.gamma;
  const double g1 = g - 1.0;
  const T& rho = u[0];
  const T p = pressure_of(u[0], u[1], u[2], u[3], g);
  const T vx = u[1] / rho;
  const T vy = u[2] / rho;
  const T vn = vx * n.x() + vy * n.y();
  const T vt = -vx * n.y() + vy * n.x();
  const T c = sqrt(g * p / rho);

  const double c_inf = fs.sound_speed();
  const Vec2 v_inf = fs.velocity();
  const double vn_inf = v_inf.dot(n);
  const double vt_inf = -v_inf.x() * n.y() + v_inf.y() * n.x();

  if (value_of(vn) <= -value_of(c)) {
    const State s = fs.state();
    for (int k = 0; k < 4; ++k) out[k] = T(s[k]);
    return;
  }
  if (value_of(vn) >= value_of(c)) {
    for (int k = 0; k < 4; ++k) out[k] = u[k];
    return;
  }
  const T r_plus = vn + 2.0 * c / g1;
  auto assemble = [&](const T& rho_b, const T& p_b, const T& vn_b, const T& vt_b, T (&dst)[4]) {
    const T vx_b = vn_b * n.x() - vt_b * n.y();
    const T vy_b = vn_b * n.y() + vt_b * n.x();
    dst[0] = rho_b;
    dst[1] = rho_b * vx_b;
    dst[2] = rho_b * vy_b;
    dst[3] = p_b / g1 + 0.5 * rho_b * (vx_b * vx_b + vy_b * vy_b);
  };
  auto inflow = [&](T (&dst)[4]) {
    const double r_minus = vn_inf - 2.0 * c_inf / g1;
    const T vn_b = 0.5 * (r_plus + r_minus);
    const T c_b = 0.25 * g1 * (r_plus - r_minus);
    const double entropy = fs.p_inf / std::pow(fs.rho_inf, g);
    const T rho_b = pow(c_b * c_b / (g * entropy), 1.0 / g1);
    const T p_b = rho_b * c_b * c_b / g;
    assemble(rho_b, p_b, vn_b, T(vt_inf), dst);
  };
  auto outflow = [&](T (&dst)[4]) {
    const T p_b = T(fs.p_inf);
    const T entropy = p / pow(rho, g);
    const T rho_b = pow(fs.p_inf / entropy, 1.0 / g);
    const T c_b = sqrt(g * p_b / rho_b);
    assemble(rho_b, p_b, r_plus - 2.0 * c_b / g1, vt, dst);
  };
  // The two subsonic branches are blended with a C1 smoothstep across
  // |vn| < kBlend * c so the ghost state stays differentiable where the
  // flow is tangential to the boundary.
  constexpr double kBlend = 0.1;
  const T t = vn / (kBlend * c);
  if (value_of(t) <= -1.0) {
    inflow(out);
    return;
  }
  if (value_of(t) >= 1.0) {
    outflow(out);
    return;
  }
  T a[4], b[4];
  inflow(a);
  outflow(b);
  const T s = 0.5 * (t + 1.0);
  const T w = s * s * (3.0 - 2.0 * s);
  for (int k = 0; k < 4; ++k) out[k] = (1.0 - w) * a[k] + w * b[k];
}

Eigen::RowVector4d pressure_gradient(const State& u, double gamma) {
  const double vx = u[1] / u[0];
  const double vy = u[2] / u[0];
  return (gamma - 1.0) * Eigen::RowVector4d(0.5 * (vx * vx + vy * vy), -vx, -vy, 1.0);
}

Eigen::RowVector4d wave_speed_gradient(const State& u, const Vec2& n, double gamma) {
  const double rho = u[0];
  const double p = pressure(u, gamma);
  const double vn = (u[1] * n.x() + u[2] * n.y()) / rho;
  const double c = std::sqrt(gamma * p / rho);
  Eigen::RowVector4d dvn(-vn / rho, n.x() / rho, n.y() / rho, 0.0);
  Eigen::RowVector4d dc = pressure_gradient(u, gamma);
  dc[0] -= p / rho;
  dc *= gamma / (2.0 * c * rho);
  const double sign = vn >= 0.0 ? 1.0 : -1.0;
  return sign * dvn + dc;
}

}  // namespace

void FreestreamSpec::validate() const {
  if (!(mach > 0.0)) throw std::invalid_argument("freestream mach must be > 0");
  if (!(p_inf > 0.0)) throw std::invalid_argument("freestream p_inf must be > 0");
  if (!(rho_inf > 0.0)) throw std::invalid_argument("freestream rho_inf must be > 0");
  if (!(gamma > 1.0)) throw std::invalid_argument("freestream gamma must be > 1");
}

double FreestreamSpec::sound_speed() const { return std::sqrt(gamma * p_inf / rho_inf); }

Vec2 FreestreamSpec::velocity() const {
  const double speed = mach * sound_speed();
  return {speed * std::cos(attack_angle), speed * std::sin(attack_angle)};
}

State FreestreamSpec::state() const {
  const Vec2 v = velocity();
  return {rho_inf, rho_inf * v.x(), rho_inf * v.y(),
          p_inf / (gamma - 1.0) + 0.5 * rho_inf * v.squaredNorm()};
}

double pressure(const State& u, double gamma) { return pressure_of(u[0], u[1], u[2], u[3], gamma); }

FluxTensor physical_flux(const State& u, double gamma) {
  const double p = pressure(u, gamma);
  const double vx = u[1] / u[0];
  const double vy = u[2] / u[0];
  FluxTensor f;
  f << u[1], u[2],
       u[1] * vx + p, u[1] * vy,
       u[2] * vx, u[2] * vy + p,
       vx * (u[3] + p), vy * (u[3] + p);
  return f;
}

State normal_flux(const State& u, const Vec2& n, double gamma) {
  const double p = pressure(u, gamma);
  const double vn = (u[1] * n.x() + u[2] * n.y()) / u[0];
  return {u[0] * vn, u[1] * vn + p * n.x(), u[2] * vn + p * n.y(), (u[3] + p) * vn};
}

Block4 normal_flux_jacobian(const State& u, const Vec2& n, double gamma) {
  const double g1 = gamma - 1.0;
  const double rho = u[0];
  const double vx = u[1] / rho;
  const double vy = u[2] / rho;
  const double p = pressure(u, gamma);
  const double q2 = vx * vx + vy * vy;
  const double vn = vx * n.x() + vy * n.y();
  const double h = (u[3] + p) / rho;
  const double nx = n.x();
  const double ny = n.y();
  Block4 a;
  a << 0.0, nx, ny, 0.0,
       0.5 * g1 * q2 * nx - vx * vn, vn + vx * nx - g1 * vx * nx, vx * ny - g1 * vy * nx, g1 * nx,
       0.5 * g1 * q2 * ny - vy * vn, vy * nx - g1 * vx * ny, vn + vy * ny - g1 * vy * ny, g1 * ny,
       (0.5 * g1 * q2 - h) * vn, h * nx - g1 * vx * vn, h * ny - g1 * vy * vn, gamma * vn;
  return a;
}

double max_wave_speed(const State& u, const Vec2& n, double gamma) {
  const double p = pressure(u, gamma);
  const double vn = (u[1] * n.x() + u[2] * n.y()) / u[0];
  return std::abs(vn) + std::sqrt(gamma * p / u[0]);
}

State lax_friedrichs_flux(const State& uL, const State& uR, const Vec2& n, double gamma) {
  const double lambda = std::max(max_wave_speed(uL, n, gamma), max_wave_speed(uR, n, gamma));
  return 0.5 * (normal_flux(uL, n, gamma) + normal_flux(uR, n, gamma)) - 0.5 * lambda * (uR - uL);
}

FluxJacobians flux_jacobians(const State& uL, const State& uR, const Vec2& n, double gamma,
                             Linearization lin) {
  const double lambda_l = max_wave_speed(uL, n, gamma);
  const double lambda_r = max_wave_speed(uR, n, gamma);
  const double lambda = std::max(lambda_l, lambda_r);
  FluxJacobians jac;
  jac.dL = 0.5 * normal_flux_jacobian(uL, n, gamma);
  jac.dR = 0.5 * normal_flux_jacobian(uR, n, gamma);
  jac.dL.diagonal().array() += 0.5 * lambda;
  jac.dR.diagonal().array() -= 0.5 * lambda;
  if (lin == Linearization::Exact) {
    const State jump = uR - uL;
    if (lambda_l >= lambda_r) {
      jac.dL -= 0.5 * jump * wave_speed_gradient(uL, n, gamma);
    } else {
      jac.dR -= 0.5 * jump * wave_speed_gradient(uR, n, gamma);
    }
  }
  return jac;
}

State wall_ghost(const State& u, const Vec2& n) {
  const Vec2 m(u[1], u[2]);
  const Vec2 r = m - 2.0 * m.dot(n) * n;
  return {u[0], r.x(), r.y(), u[3]};
}

Block4 wall_ghost_jacobian(const Vec2& n) {
  Block4 g = Block4::Identity();
  g.block<2, 2>(1, 1) -= 2.0 * n * n.transpose();
  return g;
}

State farfield_ghost(const State& u, const Vec2& n, const FreestreamSpec& fs) {
  const double in[4] = {u[0], u[1], u[2], u[3]};
  double out[4];
  farfield_impl(in, n, fs, out);
  State g(out[0], out[1], out[2], out[3]);
  if (g[0] < kVacuumGuard) throw NonphysicalState("far-field ghost density below vacuum guard");
  pressure(g, fs.gamma);
  return g;
}

Block4 farfield_ghost_jacobian(const State& u, const Vec2& n, const FreestreamSpec& fs) {
  AD in[4];
  for (int k = 0; k < 4; ++k) in[k] = AD(u[k], 4, k);
  AD out[4];
  farfield_impl(in, n, fs, out);
  Block4 jac;
  for (int k = 0; k < 4; ++k) {
    if (out[k].derivatives().size() == 0) {
      jac.row(k).setZero();
    } else {
      jac.row(k) = out[k].derivatives().transpose();
    }
  }
  return jac;
}

}  // namespace mmdwr
