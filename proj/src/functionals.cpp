#include "mmdwr/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "mmdwr/errors.hpp"

namespace mmdwr {

const char* to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::Lift: return "lift";
    case FunctionalKind::Drag: return "drag";
    case FunctionalKind::Moment: return "moment";
  }
  return "?";
}

FunctionalKind functional_kind_from_string(const std::string& text) {
  if (text == "lift") return FunctionalKind::Lift;
  if (text == "drag") return FunctionalKind::Drag;
  if (text == "moment") return FunctionalKind::Moment;
  throw std::invalid_argument("unknown functional kind '" + text + "'");
}

double TargetFunctional::c_inf() const {
  const double c = gamma * p_inf * mach * mach * chord / 2.0;
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("normalization C_inf must be positive");
  return c;
}

TargetFunctional TargetFunctional::make(FunctionalKind kind, const std::string& marker,
                                        const FreestreamSpec& fs, double chord, std::string name) {
  TargetFunctional t;
  t.kind = kind;
  t.marker = marker;
  t.attack_angle = fs.attack_angle;
  t.gamma = fs.gamma;
  t.p_inf = fs.p_inf;
  t.mach = fs.mach;
  t.chord = chord;
  t.name = name.empty() ? std::string(to_string(kind)) + ":" + marker : std::move(name);
  return t;
}

Vec2 beta_vector(FunctionalKind kind, double alpha, double c_inf) {
  if (!(c_inf > 0.0)) throw std::invalid_argument("C_inf must be positive");
  switch (kind) {
    case FunctionalKind::Drag: return Vec2(std::cos(alpha), std::sin(alpha)) / c_inf;
    case FunctionalKind::Lift: return Vec2(-std::sin(alpha), std::cos(alpha)) / c_inf;
    case FunctionalKind::Moment: break;
  }
  throw std::invalid_argument("moment functionals have no force direction");
}

Eigen::RowVector4d pressure_gradient(const State& u, double gamma) {
  const double vx = u[1] / u[0];
  const double vy = u[2] / u[0];
  return (gamma - 1.0) * Eigen::RowVector4d(0.5 * (vx * vx + vy * vy), -vx, -vy, 1.0);
}

namespace {

int require_marker(const LeafMesh& mesh, const std::string& marker) {
  const int m = mesh.marker_index(marker);
  if (m < 0) throw UnknownBoundaryMarker("no boundary marker named '" + marker + "'");
  return m;
}

// Weight w such that the face contribution is p * w.
double face_weight(const Face& f, const TargetFunctional& spec, const Vec2& beta, double c_inf) {
  if (spec.kind == FunctionalKind::Moment) {
    const Vec2 r = f.midpoint - spec.x_ref;
    return f.length * (r.x() * f.normal.y() - r.y() * f.normal.x()) / c_inf;
  }
  return f.length * f.normal.dot(beta);
}

}  // namespace

double evaluate(const LeafMesh& mesh, const CellField& u, const TargetFunctional& spec) {
  u.check(mesh);
  const int m = require_marker(mesh, spec.marker);
  const double c = spec.c_inf();
  const Vec2 beta = spec.kind == FunctionalKind::Moment ? Vec2::Zero() : beta_vector(spec.kind, spec.attack_angle, c);
  double sum = 0.0;
  for (const auto& f : mesh.faces()) {
    if (f.marker != m) continue;
    sum += pressure(u[f.left], spec.gamma) * face_weight(f, spec, beta, c);
  }
  return sum;
}

CellField gradient(const LeafMesh& mesh, const CellField& u, const TargetFunctional& spec) {
  u.check(mesh);
  const int m = require_marker(mesh, spec.marker);
  const double c = spec.c_inf();
  const Vec2 beta = spec.kind == FunctionalKind::Moment ? Vec2::Zero() : beta_vector(spec.kind, spec.attack_angle, c);
  CellField g(mesh, State::Zero());
  for (const auto& f : mesh.faces()) {
    if (f.marker != m) continue;
    pressure(u[f.left], spec.gamma);  // vacuum guard
    g[f.left] += face_weight(f, spec, beta, c) * pressure_gradient(u[f.left], spec.gamma).transpose();
  }
  return g;
}

CompositeFunctional CompositeFunctional::product(std::vector<TargetFunctional> parts,
                                                 std::vector<double> exponents) {
  CompositeFunctional c{CompositeKind::Product, std::move(parts), std::move(exponents)};
  c.validate();
  return c;
}

CompositeFunctional CompositeFunctional::ratio(TargetFunctional numerator, TargetFunctional denominator) {
  return product({std::move(numerator), std::move(denominator)}, {1.0, -1.0});
}

CompositeFunctional CompositeFunctional::linear(std::vector<TargetFunctional> parts, std::vector<double> weights) {
  CompositeFunctional c{CompositeKind::LinearCombination, std::move(parts), std::move(weights)};
  c.validate();
  return c;
}

void CompositeFunctional::validate() const {
  if (components.empty()) throw std::invalid_argument("composite functional needs at least one component");
  if (coefficients.size() != components.size()) {
    throw std::invalid_argument("composite functional needs one coefficient per component");
  }
  if (kind == CompositeKind::Product) {
    for (double e : coefficients) {
      if (e != 1.0 && e != -1.0) throw std::invalid_argument("product exponents must be +1 or -1");
    }
  }
}

double composite_evaluate(const std::vector<double>& values, const CompositeFunctional& comp) {
  comp.validate();
  if (values.size() != comp.size()) throw std::invalid_argument("one value per component expected");
  if (comp.kind == CompositeKind::LinearCombination) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += comp.coefficients[i] * values[i];
    return s;
  }
  double p = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (comp.coefficients[i] < 0.0) {
      if (values[i] == 0.0) throw DivisionByZero("inverse component '" + comp.components[i].name + "' is zero");
      p /= values[i];
    } else {
      p *= values[i];
    }
  }
  return p;
}

std::vector<double> composite_weights(const std::vector<double>& values, const CompositeFunctional& comp) {
  comp.validate();
  if (values.size() != comp.size()) throw std::invalid_argument("one value per component expected");
  std::vector<double> w(values.size());
  if (comp.kind == CompositeKind::LinearCombination) return comp.coefficients;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double others = 1.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (j == i) continue;
      if (comp.coefficients[j] < 0.0) {
        if (values[j] == 0.0) throw DivisionByZero("inverse component '" + comp.components[j].name + "' is zero");
        others /= values[j];
      } else {
        others *= values[j];
      }
    }
    if (comp.coefficients[i] < 0.0) {
      if (values[i] == 0.0) throw DivisionByZero("inverse component '" + comp.components[i].name + "' is zero");
      w[i] = -others / (values[i] * values[i]);
    } else {
      w[i] = others;
    }
  }
  return w;
}

}  // namespace mmdwr
