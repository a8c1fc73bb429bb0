#include "mmdwr/builtin_meshes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmdwr {

namespace {

int grid_index(int i, int j, int nx) { return j * (nx + 1) + i; }

void add_structured_triangles(RootMesh& mesh, int nx, int ny) {
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = grid_index(i, j, nx);
      const int b = grid_index(i + 1, j, nx);
      const int c = grid_index(i + 1, j + 1, nx);
      const int d = grid_index(i, j + 1, nx);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
}

void add_box_boundary(RootMesh& mesh, int nx, int ny, const std::vector<int>& bottom_markers,
                      int right, int top, int left) {
  for (int i = 0; i < nx; ++i) {
    mesh.boundary.push_back({grid_index(i, 0, nx), grid_index(i + 1, 0, nx), bottom_markers[i]});
    mesh.boundary.push_back({grid_index(i + 1, ny, nx), grid_index(i, ny, nx), top});
  }
  for (int j = 0; j < ny; ++j) {
    mesh.boundary.push_back({grid_index(nx, j, nx), grid_index(nx, j + 1, nx), right});
    mesh.boundary.push_back({grid_index(0, j + 1, nx), grid_index(0, j, nx), left});
  }
}

}  // namespace

std::shared_ptr<const RootMesh> rectangle_mesh(const RectangleOptions& o) {
  if (o.nx < 1 || o.ny < 1) throw std::invalid_argument("rectangle needs nx, ny >= 1");
  auto mesh = std::make_shared<RootMesh>();
  for (int j = 0; j <= o.ny; ++j) {
    for (int i = 0; i <= o.nx; ++i) {
      mesh->vertices.emplace_back(o.x0 + (o.x1 - o.x0) * i / o.nx, o.y0 + (o.y1 - o.y0) * j / o.ny);
    }
  }
  add_structured_triangles(*mesh, o.nx, o.ny);
  const int bottom = mesh->add_marker(o.bottom);
  const int right = mesh->add_marker(o.right);
  const int top = mesh->add_marker(o.top);
  const int left = mesh->add_marker(o.left);
  add_box_boundary(*mesh, o.nx, o.ny, std::vector<int>(static_cast<std::size_t>(o.nx), bottom), right, top, left);
  mesh->validate();
  return mesh;
}

std::shared_ptr<const RootMesh> channel_mesh(const ChannelOptions& o) {
  if (o.nx < 4 || o.ny < 4) throw std::invalid_argument("channel needs nx, ny >= 4");
  if (o.bumps.empty()) throw std::invalid_argument("channel needs at least one wall segment");
  auto mesh = std::make_shared<RootMesh>();
  std::vector<int> bump_marker;
  std::vector<std::shared_ptr<const GaussianBumpCurve>> curves;
  for (const auto& b : o.bumps) {
    auto curve = std::make_shared<GaussianBumpCurve>(b.height, b.width, b.center);
    const int m = mesh->add_marker(b.marker);
    mesh->curves[static_cast<std::size_t>(m)] = curve;
    bump_marker.push_back(m);
    curves.push_back(curve);
  }
  auto owner = [&](double x) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < o.bumps.size(); ++k) {
      if (std::abs(x - o.bumps[k].center) < std::abs(x - o.bumps[best].center)) best = k;
    }
    return best;
  };
  for (int j = 0; j <= o.ny; ++j) {
    for (int i = 0; i <= o.nx; ++i) {
      const double x = o.x0 + (o.x1 - o.x0) * i / o.nx;
      const double yw = curves[owner(x)]->height_at(x);
      mesh->vertices.emplace_back(x, yw + (o.height - yw) * j / o.ny);
    }
  }
  add_structured_triangles(*mesh, o.nx, o.ny);
  int flat = -1;
  std::vector<int> bottom(static_cast<std::size_t>(o.nx));
  for (int i = 0; i < o.nx; ++i) {
    const double xm = o.x0 + (o.x1 - o.x0) * (i + 0.5) / o.nx;
    const std::size_t b = owner(xm);
    if (std::abs(xm - o.bumps[b].center) <= o.bumps[b].extent) {
      bottom[i] = bump_marker[b];
      continue;
    }
    if (flat < 0) {
      flat = mesh->marker_index(o.flat_marker);
      if (flat < 0) {
        flat = mesh->add_marker(o.flat_marker);
        // Flat stretches lie on a single bump's tail only when there is one bump.
        if (o.bumps.size() == 1) mesh->curves[static_cast<std::size_t>(flat)] = curves[b];
      }
    }
    bottom[i] = flat;
  }
  const int outlet = mesh->add_marker(o.outlet_marker);
  const int top = mesh->add_marker(o.top_marker);
  const int inlet = mesh->add_marker(o.inlet_marker);
  add_box_boundary(*mesh, o.nx, o.ny, bottom, outlet, top, inlet);
  mesh->validate();
  return mesh;
}

HierarchicalTree builtin_channel_bump(int nx, int ny, double bump_height) {
  ChannelOptions o;
  o.nx = nx;
  o.ny = ny;
  o.bumps = {BumpSpec{0.0, bump_height, 0.5, "wall"}};
  return HierarchicalTree::from_root(channel_mesh(o));
}

std::shared_ptr<const RootMesh> airfoil_omesh(const AirfoilOptions& o) {
  if (o.n_around < 32 || o.n_around % 2 != 0) throw std::invalid_argument("n_around must be even and >= 32");
  if (o.n_radial < 8) throw std::invalid_argument("n_radial must be >= 8");
  auto mesh = std::make_shared<RootMesh>();
  auto wall_curve = std::make_shared<Naca4Curve>(o.code, o.chord, Vec2(0.0, 0.0));
  auto far_curve = std::make_shared<CircleCurve>(Vec2(0.0, 0.0), o.outer_radius);
  const int wall = mesh->add_marker("wall");
  const int far = mesh->add_marker("farfield");
  mesh->curves[static_cast<std::size_t>(wall)] = wall_curve;
  mesh->curves[static_cast<std::size_t>(far)] = far_curve;

  const int n = o.n_around;
  const int m = o.n_radial;
  // Geometric radial stretching with a first layer close to the mean wall spacing.
  const double first = 2.0 * o.chord / n;
  const double span = o.outer_radius;
  double lo = 1.0 + 1e-9;
  double hi = 4.0;
  for (int it = 0; it < 200; ++it) {
    const double q = 0.5 * (lo + hi);
    const double total = first * (std::pow(q, m) - 1.0) / (q - 1.0);
    (total > span ? hi : lo) = q;
  }
  const double q = 0.5 * (lo + hi);
  std::vector<double> s(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) s[j] = (std::pow(q, j) - 1.0) / (std::pow(q, m) - 1.0);

  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * std::numbers::pi * i / n;
      const Vec2 inner = wall_curve->point_at(t);
      const Vec2 outer = far_curve->point_at(t);
      mesh->vertices.push_back(j == m ? outer : Vec2(inner + s[j] * (outer - inner)));
    }
  }
  auto id = [n](int i, int j) { return j * n + (i % n); };
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      mesh->triangles.push_back({a, d, c});
      mesh->triangles.push_back({a, c, b});
    }
  }
  for (int i = 0; i < n; ++i) {
    mesh->boundary.push_back({id(i, 0), id(i + 1, 0), wall});
    mesh->boundary.push_back({id(i + 1, m), id(i, m), far});
  }
  mesh->validate();
  return mesh;
}

HierarchicalTree builtin_airfoil_omesh(const std::string& code, int n_around, int n_radial,
                                       double outer_radius) {
  AirfoilOptions o;
  o.code = code;
  o.n_around = n_around;
  o.n_radial = n_radial;
  o.outer_radius = outer_radius;
  return HierarchicalTree::from_root(airfoil_omesh(o));
}

}  // namespace mmdwr
