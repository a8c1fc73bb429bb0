#pragma once

// Boundary force functionals (lift, drag, pitching moment), their discrete
// gradients, and separable composites of several of them.

#include <string>
#include <vector>

#include "mmdwr/leaf_mesh.hpp"

namespace mmdwr {

enum class FunctionalKind { Lift, Drag, Moment };

const char* to_string(FunctionalKind kind);
FunctionalKind functional_kind_from_string(const std::string& text);

struct TargetFunctional {
  std::string name;    // label used in reports
  FunctionalKind kind = FunctionalKind::Drag;
  std::string marker = "wall";
  double attack_angle = 0.0;  // radians
  double gamma = 1.4;
  double p_inf = 1.0;
  double mach = 0.5;
  double chord = 1.0;
  Vec2 x_ref{0.25, 0.0};  // moment reference point

  /// gamma * p_inf * mach^2 * chord / 2; throws std::invalid_argument unless positive.
  double c_inf() const;
  /// Normalization and angle taken from the freestream.
  static TargetFunctional make(FunctionalKind kind, const std::string& marker, const FreestreamSpec& fs,
                               double chord = 1.0, std::string name = {});
};

/// Drag (cos a, sin a)/C, lift (-sin a, cos a)/C. Moment has no direction and
/// throws std::invalid_argument.
Vec2 beta_vector(FunctionalKind kind, double alpha, double c_inf);

/// Wall-pressure integral over the faces of spec.marker, with the pressure of
/// the adjacent cell. Throws UnknownBoundaryMarker.
double evaluate(const LeafMesh& mesh, const CellField& u, const TargetFunctional& spec);
/// d evaluate / d u, nonzero only in cells touching the marked wall.
CellField gradient(const LeafMesh& mesh, const CellField& u, const TargetFunctional& spec);

/// dp/du = (gamma-1)(|v|^2/2, -v_x, -v_y, 1).
Eigen::RowVector4d pressure_gradient(const State& u, double gamma);

enum class CompositeKind { Product, LinearCombination };

/// Product of components raised to +1/-1, or a weighted sum.
struct CompositeFunctional {
  CompositeKind kind = CompositeKind::Product;
  std::vector<TargetFunctional> components;
  /// Exponents (+1 or -1) for products, weights for linear combinations.
  std::vector<double> coefficients;

  static CompositeFunctional product(std::vector<TargetFunctional> parts, std::vector<double> exponents);
  static CompositeFunctional ratio(TargetFunctional numerator, TargetFunctional denominator);
  static CompositeFunctional linear(std::vector<TargetFunctional> parts, std::vector<double> weights);
  std::size_t size() const { return components.size(); }
  /// Throws std::invalid_argument on mismatched lengths or bad exponents.
  void validate() const;
};

double composite_evaluate(const std::vector<double>& values, const CompositeFunctional& comp);
/// d composite / d value_i at the given values.
std::vector<double> composite_weights(const std::vector<double>& values, const CompositeFunctional& comp);

}  // namespace mmdwr
