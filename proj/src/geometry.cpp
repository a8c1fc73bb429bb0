#include "mmdwr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "mmdwr/errors.hpp"

namespace mmdwr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double periodic_midpoint(double ta, double tb, double period) {
  double d = std::fmod(tb - ta, period);
  if (d > 0.5 * period) d -= period;
  if (d < -0.5 * period) d += period;
  double mid = ta + 0.5 * d;
  mid = std::fmod(mid, period);
  if (mid < 0.0) mid += period;
  return mid;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// Nearest parameter on a periodic curve by sampling followed by ternary search.
template <typename PointAt>
double nearest_parameter(const Vec2& p, double period, PointAt&& point_at) {
  constexpr int kSamples = 4096;
  const double dt = period / kSamples;
  int best = 0;
  double best_dist = (point_at(0.0) - p).squaredNorm();
  for (int i = 1; i < kSamples; ++i) {
    const double d = (point_at(i * dt) - p).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  double lo = (best - 1) * dt;
  double hi = (best + 1) * dt;
  for (int it = 0; it < 100; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if ((point_at(m1) - p).squaredNorm() < (point_at(m2) - p).squaredNorm()) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  double t = std::fmod(0.5 * (lo + hi), period);
  if (t < 0.0) t += period;
  return t;
}

}  // namespace

double CircleCurve::parameter_of(const Vec2& p) const {
  double t = std::atan2(p.y() - center_.y(), p.x() - center_.x());
  if (t < 0.0) t += kTwoPi;
  return t;
}

Vec2 CircleCurve::point_at(double t) const {
  return center_ + radius_ * Vec2(std::cos(t), std::sin(t));
}

double CircleCurve::midpoint_parameter(double ta, double tb) const {
  return periodic_midpoint(ta, tb, kTwoPi);
}

std::string CircleCurve::describe() const {
  return "circle " + format_double(center_.x()) + " " + format_double(center_.y()) + " " +
         format_double(radius_);
}

Naca4Curve::Naca4Curve(std::string code, double chord, Vec2 origin)
    : code_(std::move(code)), chord_(chord), origin_(origin) {
  if (code_.size() != 4 || !std::all_of(code_.begin(), code_.end(), ::isdigit)) {
    throw std::invalid_argument("NACA 4-digit code must have four digits: " + code_);
  }
  if (!(chord_ > 0.0)) throw std::invalid_argument("NACA chord must be positive");
  camber_ = (code_[0] - '0') / 100.0;
  camber_pos_ = (code_[1] - '0') / 10.0;
  thickness_ = std::stoi(code_.substr(2)) / 100.0;
}

double Naca4Curve::half_thickness(double xc) const {
  xc = std::clamp(xc, 0.0, 1.0);
  return 5.0 * thickness_ *
         (0.2969 * std::sqrt(xc) - 0.1260 * xc - 0.3516 * xc * xc + 0.2843 * xc * xc * xc -
          0.1036 * xc * xc * xc * xc);
}

Vec2 Naca4Curve::surface(double xc, bool upper) const {
  const double yt = half_thickness(xc);
  double yc = 0.0;
  double slope = 0.0;
  if (camber_ > 0.0 && camber_pos_ > 0.0) {
    const double m = camber_;
    const double p = camber_pos_;
    if (xc < p) {
      yc = m / (p * p) * (2.0 * p * xc - xc * xc);
      slope = 2.0 * m / (p * p) * (p - xc);
    } else {
      yc = m / ((1.0 - p) * (1.0 - p)) * ((1.0 - 2.0 * p) + 2.0 * p * xc - xc * xc);
      slope = 2.0 * m / ((1.0 - p) * (1.0 - p)) * (p - xc);
    }
  }
  const double th = std::atan(slope);
  const double sign = upper ? 1.0 : -1.0;
  const double x = xc - sign * yt * std::sin(th);
  const double y = yc + sign * yt * std::cos(th);
  return origin_ + chord_ * Vec2(x, y);
}

Vec2 Naca4Curve::point_at(double t) const {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  const double xc = 0.5 * (1.0 + std::cos(t));
  return surface(xc, t <= std::numbers::pi);
}

double Naca4Curve::parameter_of(const Vec2& p) const {
  if (camber_ == 0.0) {
    const double xc = std::clamp((p.x() - origin_.x()) / chord_, 0.0, 1.0);
    const double t = std::acos(std::clamp(2.0 * xc - 1.0, -1.0, 1.0));
    return p.y() >= origin_.y() ? t : (t == 0.0 ? 0.0 : kTwoPi - t);
  }
  return nearest_parameter(p, kTwoPi, [this](double t) { return point_at(t); });
}

double Naca4Curve::midpoint_parameter(double ta, double tb) const {
  return periodic_midpoint(ta, tb, kTwoPi);
}

std::string Naca4Curve::describe() const {
  return "naca4 " + code_ + " " + format_double(chord_) + " " + format_double(origin_.x()) + " " +
         format_double(origin_.y());
}

PolylineCurve::PolylineCurve(std::vector<Vec2> points, bool closed, std::string source)
    : points_(std::move(points)), closed_(closed), source_(std::move(source)) {
  if (points_.size() < 2) throw std::invalid_argument("polyline needs at least two points");
  if (closed_ && (points_.front() - points_.back()).norm() > 0.0) points_.push_back(points_.front());
  arclength_.assign(points_.size(), 0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    arclength_[i] = arclength_[i - 1] + (points_[i] - points_[i - 1]).norm();
  }
}

double PolylineCurve::parameter_of(const Vec2& p) const {
  double best_t = 0.0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Vec2 seg = points_[i + 1] - points_[i];
    const double len2 = seg.squaredNorm();
    const double s = len2 > 0.0 ? std::clamp((p - points_[i]).dot(seg) / len2, 0.0, 1.0) : 0.0;
    const double d = (points_[i] + s * seg - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best_t = arclength_[i] + s * std::sqrt(len2);
    }
  }
  return best_t;
}

Vec2 PolylineCurve::point_at(double t) const {
  const double total = arclength_.back();
  if (closed_) {
    t = std::fmod(t, total);
    if (t < 0.0) t += total;
  } else {
    t = std::clamp(t, 0.0, total);
  }
  auto it = std::upper_bound(arclength_.begin(), arclength_.end(), t);
  std::size_t i = it == arclength_.begin() ? 0 : static_cast<std::size_t>(it - arclength_.begin()) - 1;
  if (i + 1 >= points_.size()) i = points_.size() - 2;
  const double len = arclength_[i + 1] - arclength_[i];
  const double s = len > 0.0 ? (t - arclength_[i]) / len : 0.0;
  return points_[i] + s * (points_[i + 1] - points_[i]);
}

double PolylineCurve::midpoint_parameter(double ta, double tb) const {
  return closed_ ? periodic_midpoint(ta, tb, arclength_.back()) : 0.5 * (ta + tb);
}

std::string PolylineCurve::describe() const { return "polyline " + source_; }

double GaussianBumpCurve::height_at(double x) const {
  const double s = (x - x0_) / width_;
  return y0_ + height_ * std::exp(-s * s);
}

Vec2 GaussianBumpCurve::point_at(double t) const { return {t, height_at(t)}; }

std::string GaussianBumpCurve::describe() const {
  return "bump " + format_double(height_) + " " + format_double(width_) + " " + format_double(x0_) +
         " " + format_double(y0_);
}

std::shared_ptr<const BoundaryCurve> parse_curve(const std::string& line,
                                                 const std::string& base_dir) {
  std::istringstream is(line);
  std::string kind;
  is >> kind;
  auto fail = [&]() -> std::shared_ptr<const BoundaryCurve> {
    throw IoError("malformed geometry description: " + line);
  };
  if (kind == "circle") {
    double cx, cy, r;
    if (!(is >> cx >> cy >> r)) return fail();
    return std::make_shared<CircleCurve>(Vec2(cx, cy), r);
  }
  if (kind == "naca4") {
    std::string code;
    double chord, x0, y0;
    if (!(is >> code >> chord >> x0 >> y0)) return fail();
    return std::make_shared<Naca4Curve>(code, chord, Vec2(x0, y0));
  }
  if (kind == "bump") {
    double h, w, x0;
    if (!(is >> h >> w >> x0)) return fail();
    double y0 = 0.0;
    is >> y0;
    return std::make_shared<GaussianBumpCurve>(h, w, x0, y0);
  }
  if (kind == "polyline") {
    std::string file;
    if (!(is >> file)) return fail();
    std::filesystem::path path(file);
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    std::ifstream in(path);
    if (!in) throw IoError("cannot open polyline file " + path.string());
    std::vector<Vec2> pts;
    std::string row;
    while (std::getline(in, row)) {
      if (row.empty() || row[0] == '#') continue;
      std::istringstream rs(row);
      double x, y;
      if (rs >> x >> y) pts.emplace_back(x, y);
    }
    const bool closed = pts.size() > 2 && (pts.front() - pts.back()).norm() < 1e-12;
    return std::make_shared<PolylineCurve>(std::move(pts), closed, file);
  }
  return fail();
}

BoundaryKind boundary_kind(const std::string& marker) {
  return marker.rfind("farfield", 0) == 0 ? BoundaryKind::FarField : BoundaryKind::Wall;
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

int RootMesh::marker_index(const std::string& name) const {
  for (std::size_t i = 0; i < markers.size(); ++i) {
    if (markers[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int RootMesh::add_marker(const std::string& name) {
  int idx = marker_index(name);
  if (idx >= 0) return idx;
  markers.push_back(name);
  curves.emplace_back();
  return static_cast<int>(markers.size()) - 1;
}

void RootMesh::validate() const {
  const int nv = static_cast<int>(vertices.size());
  std::map<std::pair<int, int>, int> edge_count;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) throw IoError("triangle " + std::to_string(t) + " references a missing vertex");
    }
    if (signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]) <= 0.0) {
      throw IoError("triangle " + std::to_string(t) + " is not counterclockwise");
    }
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      ++edge_count[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::set<std::pair<int, int>> marked;
  for (const auto& e : boundary) {
    const std::pair<int, int> key{std::min(e.a, e.b), std::max(e.a, e.b)};
    auto it = edge_count.find(key);
    if (it == edge_count.end() || it->second != 1) {
      throw IoError("boundary edge " + std::to_string(e.a) + "-" + std::to_string(e.b) +
                    " does not belong to exactly one triangle");
    }
    if (e.marker < 0 || e.marker >= static_cast<int>(markers.size())) {
      throw IoError("boundary edge has an unknown marker");
    }
    if (!marked.insert(key).second) throw IoError("boundary edge listed twice");
  }
  for (const auto& [key, count] : edge_count) {
    if (count > 2) throw IoError("edge shared by more than two triangles");
    if (count == 1 && !marked.count(key)) {
      throw IoError("edge " + std::to_string(key.first) + "-" + std::to_string(key.second) +
                    " lies on the boundary but carries no marker");
    }
  }
  if (curves.size() != markers.size()) throw IoError("curve table does not match markers");
}

bool RootMesh::same_geometry(const RootMesh& other) const {
  if (vertices.size() != other.vertices.size() || triangles != other.triangles ||
      boundary.size() != other.boundary.size() || markers != other.markers) {
    return false;
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] != other.vertices[i]) return false;
  }
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const auto& a = boundary[i];
    const auto& b = other.boundary[i];
    if (a.a != b.a || a.b != b.b || a.marker != b.marker) return false;
  }
  return true;
}

double RootMesh::area() const {
  double total = 0.0;
  for (const auto& t : triangles) total += signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
  return total;
}

}  // namespace mmdwr
