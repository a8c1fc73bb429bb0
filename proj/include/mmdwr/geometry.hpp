#pragma once

// Analytic boundary curves used to place new boundary vertices during
// refinement, and the root (initial) triangulation they decorate.

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mmdwr/euler.hpp"

namespace mmdwr {

/// A parametrized boundary curve. New boundary midpoints are placed at
/// point_at(midpoint_parameter(ta, tb)).
class BoundaryCurve {
 public:
  virtual ~BoundaryCurve() = default;
  virtual double parameter_of(const Vec2& p) const = 0;
  virtual Vec2 point_at(double t) const = 0;
  virtual double midpoint_parameter(double ta, double tb) const { return 0.5 * (ta + tb); }
  /// One GEOMETRY line of the ASCII mesh format, without the marker.
  virtual std::string describe() const = 0;
};

class CircleCurve final : public BoundaryCurve {
 public:
  CircleCurve(Vec2 center, double radius) : center_(center), radius_(radius) {}
  double parameter_of(const Vec2& p) const override;
  Vec2 point_at(double t) const override;
  double midpoint_parameter(double ta, double tb) const override;
  std::string describe() const override;
  const Vec2& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Vec2 center_;
  double radius_;
};

/// NACA 4-digit section with a closed trailing edge. Parameter theta in
/// [0, 2pi): x = x0 + chord*(1+cos theta)/2, upper surface for theta in [0, pi].
class Naca4Curve final : public BoundaryCurve {
 public:
  Naca4Curve(std::string code, double chord, Vec2 origin);
  double parameter_of(const Vec2& p) const override;
  Vec2 point_at(double t) const override;
  double midpoint_parameter(double ta, double tb) const override;
  std::string describe() const override;
  /// Half thickness at chord fraction xc in [0, 1].
  double half_thickness(double xc) const;

 private:
  Vec2 surface(double xc, bool upper) const;
  std::string code_;
  double chord_;
  Vec2 origin_;
  double camber_;     // m
  double camber_pos_; // p
  double thickness_;  // t
};

/// Piecewise-linear curve parametrized by arc length.
class PolylineCurve final : public BoundaryCurve {
 public:
  PolylineCurve(std::vector<Vec2> points, bool closed, std::string source = {});
  double parameter_of(const Vec2& p) const override;
  Vec2 point_at(double t) const override;
  double midpoint_parameter(double ta, double tb) const override;
  std::string describe() const override;

 private:
  std::vector<Vec2> points_;
  std::vector<double> arclength_;
  bool closed_;
  std::string source_;
};

/// Graph y = y0 + height * exp(-((x - x0)/width)^2), parametrized by x.
class GaussianBumpCurve final : public BoundaryCurve {
 public:
  GaussianBumpCurve(double height, double width, double x0, double y0 = 0.0)
      : height_(height), width_(width), x0_(x0), y0_(y0) {}
  double parameter_of(const Vec2& p) const override { return p.x(); }
  Vec2 point_at(double t) const override;
  std::string describe() const override;
  double height_at(double x) const;

 private:
  double height_, width_, x0_, y0_;
};

/// Parses "circle cx cy r", "naca4 code chord x0 y0", "polyline file",
/// "bump height width x0 [y0]". Relative polyline paths resolve against base_dir.
std::shared_ptr<const BoundaryCurve> parse_curve(const std::string& line,
                                                 const std::string& base_dir = ".");

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  int marker = 0;  // index into RootMesh::markers
};

enum class BoundaryKind { Wall, FarField };

/// Markers whose name starts with "farfield" are far-field boundaries; every
/// other marker is a slip wall.
BoundaryKind boundary_kind(const std::string& marker);

/// Initial conforming triangulation; the roots of every hierarchical tree.
struct RootMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary;
  std::vector<std::string> markers;
  /// Indexed like markers; null when the marker has no analytic curve.
  std::vector<std::shared_ptr<const BoundaryCurve>> curves;

  int marker_index(const std::string& name) const;  // -1 when absent
  int add_marker(const std::string& name);
  /// Checks counterclockwise orientation and that the marked edges are
  /// exactly the edges owned by a single triangle.
  void validate() const;
  bool same_geometry(const RootMesh& other) const;
  double area() const;
};

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace mmdwr
