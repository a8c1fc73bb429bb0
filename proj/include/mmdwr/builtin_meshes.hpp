#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "mmdwr/tree.hpp"

namespace mmdwr {

struct RectangleOptions {
  int nx = 4;
  int ny = 4;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  // Boundary markers: bottom, right, top, left.
  std::string bottom = "farfield", right = "farfield", top = "farfield", left = "farfield";
};

/// Structured rectangle, each cell split along its (i,j)-(i+1,j+1) diagonal.
std::shared_ptr<const RootMesh> rectangle_mesh(const RectangleOptions& opts);

struct BumpSpec {
  double center = 0.0;
  double height = 0.05;
  double width = 0.5;
  std::string marker = "wall";
  /// Lower-wall edges farther than this from the centre carry
  /// ChannelOptions::flat_marker instead.
  double extent = std::numeric_limits<double>::infinity();
};

struct ChannelOptions {
  int nx = 32;
  int ny = 8;
  double x0 = -2.0, x1 = 2.0, height = 1.0;
  /// Lower-wall bumps; each lower-wall edge takes the marker (and curve) of
  /// the bump whose centre is nearest.
  std::vector<BumpSpec> bumps{BumpSpec{}};
  std::string flat_marker = "wall";
  std::string inlet_marker = "farfield";
  std::string outlet_marker = "farfield";
  std::string top_marker = "farfield";
};

/// Channel with Gaussian bumps on the lower wall; inlet, outlet and top are
/// far-field boundaries.
std::shared_ptr<const RootMesh> channel_mesh(const ChannelOptions& opts);

/// Single Gaussian bump (width 0.5) on the lower wall of [-2,2]x[0,1].
HierarchicalTree builtin_channel_bump(int nx, int ny, double bump_height);

struct AirfoilOptions {
  std::string code = "0012";
  int n_around = 64;
  int n_radial = 24;
  double outer_radius = 35.0;
  double chord = 1.0;
};

/// O-grid between a NACA 4-digit airfoil (marker "wall", leading edge at the
/// origin) and an outer circle centred at the origin (marker "farfield").
std::shared_ptr<const RootMesh> airfoil_omesh(const AirfoilOptions& opts);
HierarchicalTree builtin_airfoil_omesh(const std::string& code, int n_around, int n_radial,
                                       double outer_radius);

}  // namespace mmdwr
