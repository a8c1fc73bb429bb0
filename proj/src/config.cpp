#include "mmdwr/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "mmdwr/errors.hpp"
#include "mmdwr/mesh_io.hpp"

namespace mmdwr {

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

template <class T>
const char* type_name() {
  if constexpr (std::is_same_v<T, bool>) return "a boolean";
  else if constexpr (std::is_integral_v<T>) return "an integer";
  else if constexpr (std::is_floating_point_v<T>) return "a number";
  else return "a string";
}

class Reader {
 public:
  std::vector<ConfigIssue> issues;
  std::map<std::string, int> lines;  // dotted key path -> source line

  void issue(int line, std::string msg) { issues.push_back({line, std::move(msg)}); }

  /// False (with an issue) unless n is a map; flags keys outside `allowed`.
  bool map(const YAML::Node& n, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!n.IsMap()) {
      issue(line_of(n), path + " must be a mapping");
      return false;
    }
    for (const auto& kv : n) {
      const std::string key = kv.first.as<std::string>();
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (!known) issue(line_of(kv.first), "unknown key '" + (path.empty() ? key : path + "." + key) + "'");
    }
    return true;
  }

  template <class T>
  bool get(const YAML::Node& n, const char* key, const std::string& path, T& out) {
    const YAML::Node v = n[key];
    if (!v) return false;
    const std::string full = path.empty() ? std::string(key) : path + "." + key;
    lines[full] = line_of(v);
    try {
      if (!v.IsScalar()) throw YAML::Exception(v.Mark(), "not a scalar");
      out = v.as<T>();
      return true;
    } catch (const YAML::Exception&) {
      issue(line_of(v), full + " must be " + type_name<T>());
      return false;
    }
  }

  bool get_list(const YAML::Node& n, const char* key, const std::string& path, std::vector<double>& out) {
    const YAML::Node v = n[key];
    if (!v) return false;
    const std::string full = path + "." + key;
    lines[full] = line_of(v);
    if (!v.IsSequence()) {
      issue(line_of(v), full + " must be a list of numbers");
      return false;
    }
    out.clear();
    for (const auto& e : v) {
      try {
        out.push_back(e.as<double>());
      } catch (const YAML::Exception&) {
        issue(line_of(e), full + " must be a list of numbers");
        return false;
      }
    }
    return true;
  }

  void require(bool ok, const std::string& path, int fallback_line, const std::string& msg) {
    if (ok) return;
    const auto it = lines.find(path);
    issue(it != lines.end() ? it->second : fallback_line, path + " " + msg);
  }

  /// Line of the key path that opens the message, or 0.
  int line_for(const std::string& message) const {
    const std::string path = message.substr(0, message.find(' '));
    const auto it = lines.find(path);
    return it != lines.end() ? it->second : 0;
  }
};

constexpr double kDegree = std::numbers::pi / 180.0;

void read_freestream(Reader& r, const YAML::Node& n, RunConfig& cfg) {
  if (!r.map(n, "freestream", {"mach", "attack_angle", "p_inf", "rho_inf", "gamma"})) return;
  FreestreamSpec& fs = cfg.freestream;
  r.get(n, "mach", "freestream", fs.mach);
  r.get(n, "attack_angle", "freestream", cfg.attack_angle_deg);
  r.get(n, "p_inf", "freestream", fs.p_inf);
  r.get(n, "rho_inf", "freestream", fs.rho_inf);
  r.get(n, "gamma", "freestream", fs.gamma);
  const int l = line_of(n);
  r.require(fs.mach > 0.0, "freestream.mach", l, "must be positive");
  r.require(fs.p_inf > 0.0, "freestream.p_inf", l, "must be positive");
  r.require(fs.rho_inf > 0.0, "freestream.rho_inf", l, "must be positive");
  r.require(fs.gamma > 1.0, "freestream.gamma", l, "must exceed 1");
  r.require(std::abs(cfg.attack_angle_deg) <= 90.0, "freestream.attack_angle", l, "must lie in [-90, 90] degrees");
}

void read_geometry(Reader& r, const YAML::Node& n, RunConfig& cfg) {
  if (!r.map(n, "geometry", {"case", "channel", "airfoil", "file", "uniform_refinements"})) return;
  GeometryConfig& g = cfg.geometry;
  std::string kind;
  if (!r.get(n, "case", "geometry", kind)) {
    if (!n["case"]) r.issue(line_of(n), "geometry.case is required");
  } else if (kind == "channel_bump") {
    g.kind = GeometryCase::ChannelBump;
  } else if (kind == "airfoil") {
    g.kind = GeometryCase::Airfoil;
  } else if (kind == "file") {
    g.kind = GeometryCase::File;
  } else {
    r.issue(r.lines["geometry.case"], "geometry.case must be channel_bump, airfoil or file");
  }
  r.get(n, "uniform_refinements", "geometry", g.uniform_refinements);
  r.require(g.uniform_refinements >= 0 && g.uniform_refinements <= 8, "geometry.uniform_refinements", line_of(n),
            "must lie in [0, 8]");

  if (const YAML::Node c = n["channel"]) {
    if (g.kind != GeometryCase::ChannelBump) r.issue(line_of(c), "geometry.channel requires case channel_bump");
    if (r.map(c, "geometry.channel",
              {"nx", "ny", "x0", "x1", "height", "bump_center", "bump_height", "bump_width", "bump_marker",
               "bump_extent", "flat_marker", "top_marker", "inlet_marker", "outlet_marker"})) {
      ChannelOptions& o = g.channel;
      BumpSpec& b = o.bumps.front();
      const std::string p = "geometry.channel";
      r.get(c, "nx", p, o.nx);
      r.get(c, "ny", p, o.ny);
      r.get(c, "x0", p, o.x0);
      r.get(c, "x1", p, o.x1);
      r.get(c, "height", p, o.height);
      r.get(c, "bump_center", p, b.center);
      r.get(c, "bump_height", p, b.height);
      r.get(c, "bump_width", p, b.width);
      r.get(c, "bump_marker", p, b.marker);
      r.get(c, "bump_extent", p, b.extent);
      r.get(c, "flat_marker", p, o.flat_marker);
      r.get(c, "top_marker", p, o.top_marker);
      r.get(c, "inlet_marker", p, o.inlet_marker);
      r.get(c, "outlet_marker", p, o.outlet_marker);
      const int l = line_of(c);
      r.require(o.nx >= 4, p + ".nx", l, "must be >= 4");
      r.require(o.ny >= 4, p + ".ny", l, "must be >= 4");
      r.require(o.x1 > o.x0, p + ".x1", l, "must exceed x0");
      r.require(o.height > 0.0, p + ".height", l, "must be positive");
      r.require(b.width > 0.0, p + ".bump_width", l, "must be positive");
      r.require(b.extent > 0.0, p + ".bump_extent", l, "must be positive");
      r.require(b.height < o.height, p + ".bump_height", l, "must be below the channel height");
    }
  }
  if (const YAML::Node a = n["airfoil"]) {
    if (g.kind != GeometryCase::Airfoil) r.issue(line_of(a), "geometry.airfoil requires case airfoil");
    if (r.map(a, "geometry.airfoil", {"code", "n_around", "n_radial", "outer_radius", "chord"})) {
      AirfoilOptions& o = g.airfoil;
      const std::string p = "geometry.airfoil";
      r.get(a, "code", p, o.code);
      r.get(a, "n_around", p, o.n_around);
      r.get(a, "n_radial", p, o.n_radial);
      r.get(a, "outer_radius", p, o.outer_radius);
      r.get(a, "chord", p, o.chord);
      const int l = line_of(a);
      bool digits = o.code.size() == 4;
      for (char ch : o.code) digits = digits && ch >= '0' && ch <= '9';
      r.require(digits, p + ".code", l, "must be four digits");
      r.require(o.n_around >= 32 && o.n_around % 2 == 0, p + ".n_around", l, "must be even and >= 32");
      r.require(o.n_radial >= 8, p + ".n_radial", l, "must be >= 8");
      r.require(o.chord > 0.0, p + ".chord", l, "must be positive");
      r.require(o.outer_radius > 2.0 * o.chord, p + ".outer_radius", l, "must exceed two chords");
    }
  }
  if (r.get(n, "file", "geometry", g.file)) {
    if (g.kind != GeometryCase::File) r.issue(r.lines["geometry.file"], "geometry.file requires case file");
    const std::filesystem::path p(g.file);
    if (p.is_relative())
      g.file = std::filesystem::absolute(std::filesystem::path(cfg.base_dir) / p).lexically_normal().string();
  } else if (g.kind == GeometryCase::File) {
    r.issue(line_of(n), "geometry.file is required for case file");
  }
}

void read_targets(Reader& r, const YAML::Node& n, RunConfig& cfg) {
  if (!n.IsSequence()) {
    r.issue(line_of(n), "targets must be a list");
    return;
  }
  int i = 0;
  for (const auto& t : n) {
    const std::string p = "targets[" + std::to_string(i++) + "]";
    if (!r.map(t, p, {"name", "kind", "marker", "chord", "x_ref"})) continue;
    TargetConfig tc;
    std::string kind;
    if (r.get(t, "kind", p, kind)) {
      try {
        tc.kind = functional_kind_from_string(kind);
      } catch (const std::exception&) {
        r.issue(line_of(t["kind"]), p + ".kind must be lift, drag or moment");
      }
    } else if (!t["kind"]) {
      r.issue(line_of(t), p + ".kind is required");
    }
    r.get(t, "marker", p, tc.marker);
    r.get(t, "name", p, tc.name);
    r.get(t, "chord", p, tc.chord);
    r.require(tc.chord > 0.0, p + ".chord", line_of(t), "must be positive");
    std::vector<double> xr;
    if (r.get_list(t, "x_ref", p, xr)) {
      if (xr.size() == 2) tc.x_ref = Vec2(xr[0], xr[1]);
      else r.issue(r.lines[p + ".x_ref"], p + ".x_ref must have two entries");
    }
    if (tc.name.empty()) tc.name = std::string(to_string(tc.kind)) + ":" + tc.marker;
    for (const auto& other : cfg.targets) {
      if (other.name == tc.name) r.issue(line_of(t), p + " duplicates target name '" + tc.name + "'");
    }
    cfg.targets.push_back(tc);
  }
}

void read_composite(Reader& r, const YAML::Node& n, RunConfig& cfg) {
  if (!r.map(n, "composite", {"kind", "coefficients"})) return;
  std::string kind;
  if (r.get(n, "kind", "composite", kind)) {
    if (kind == "product") cfg.composite = CompositeKind::Product;
    else if (kind == "linear") cfg.composite = CompositeKind::LinearCombination;
    else r.issue(r.lines["composite.kind"], "composite.kind must be product or linear");
  }
  r.get_list(n, "coefficients", "composite", cfg.coefficients);
}

void read_solver(Reader& r, const YAML::Node& n, RunConfig& cfg) {
  if (!r.map(n, "solver", {"newton_tol", "max_newton_iterations", "alpha", "linear_tol", "max_cycles",
                           "max_halvings", "armijo", "linearization", "regularization", "dual_tol",
                           "dual_max_cycles"}))
    return;
  NewtonConfig& s = cfg.solver;
  DualOptions& d = cfg.adaptation.dual;
  r.get(n, "newton_tol", "solver", s.newton_tol);
  r.get(n, "max_newton_iterations", "solver", s.max_iterations);
  r.get(n, "alpha", "solver", s.alpha);
  r.get(n, "linear_tol", "solver", s.linear_tol);
  r.get(n, "max_cycles", "solver", s.max_cycles);
  r.get(n, "max_halvings", "solver", s.max_halvings);
  r.get(n, "armijo", "solver", s.armijo);
  r.get(n, "dual_tol", "solver", d.tol);
  r.get(n, "dual_max_cycles", "solver", d.max_cycles);
  std::string text;
  if (r.get(n, "linearization", "solver", text)) {
    if (text == "frozen") s.linearization = Linearization::FrozenWaveSpeed;
    else if (text == "exact") s.linearization = Linearization::Exact;
    else r.issue(r.lines["solver.linearization"], "solver.linearization must be frozen or exact");
  }
  if (r.get(n, "regularization", "solver", text)) {
    if (text == "cell_area") s.scaling = RegularizationScaling::CellArea;
    else if (text == "identity") s.scaling = RegularizationScaling::Identity;
    else r.issue(r.lines["solver.regularization"], "solver.regularization must be cell_area or identity");
  }
  r.require(s.max_cycles >= 1, "solver.max_cycles", line_of(n), "must be >= 1");
  r.require(s.armijo >= 0.0 && s.armijo < 1.0, "solver.armijo", line_of(n), "must lie in [0, 1)");
}

void read_adaptation(Reader& r, const YAML::Node& n, RunConfig& cfg) {
  if (!r.map(n, "adaptation", {"theta", "max_iterations", "tol", "max_cells", "dual_refinement", "resolve_on_dual",
                               "initial_refine", "localization", "baseline_weights"}))
    return;
  AdaptationConfig& a = cfg.adaptation;
  r.get(n, "theta", "adaptation", a.theta);
  r.get(n, "max_iterations", "adaptation", a.max_iterations);
  r.get(n, "tol", "adaptation", a.tol);
  long long cells = static_cast<long long>(a.max_cells);
  if (r.get(n, "max_cells", "adaptation", cells)) {
    if (cells > 0) a.max_cells = static_cast<std::size_t>(cells);
    else r.issue(r.lines["adaptation.max_cells"], "adaptation.max_cells must be positive");
  }
  r.get(n, "dual_refinement", "adaptation", a.dual_refinement);
  r.get(n, "resolve_on_dual", "adaptation", a.resolve_on_dual);
  r.get(n, "initial_refine", "adaptation", a.initial_refine);
  std::string loc;
  if (r.get(n, "localization", "adaptation", loc)) {
    try {
      a.localization = indicator_localization_from_string(loc);
    } catch (const std::exception&) {
      r.issue(r.lines["adaptation.localization"], "adaptation.localization must be target or union");
    }
  }
  r.get_list(n, "baseline_weights", "adaptation", cfg.baseline_weights);
}

void read_output(Reader& r, const YAML::Node& n, RunConfig& cfg) {
  if (!r.map(n, "output", {"directory", "vtk"})) return;
  r.get(n, "directory", "output", cfg.output.directory);
  r.get(n, "vtk", "output", cfg.output.vtk);
}

}  // namespace

const char* to_string(GeometryCase c) {
  switch (c) {
    case GeometryCase::ChannelBump: return "channel_bump";
    case GeometryCase::Airfoil: return "airfoil";
    case GeometryCase::File: return "file";
  }
  return "?";
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError({{e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg}});
  }
  RunConfig cfg;
  cfg.base_dir = base_dir;
  Reader r;
  if (!r.map(doc, "", {"freestream", "geometry", "targets", "composite", "solver", "adaptation", "output", "seed"}))
    throw ConfigError(std::move(r.issues));
  if (const YAML::Node n = doc["freestream"]) read_freestream(r, n, cfg);
  else r.issue(0, "freestream block is required");
  if (const YAML::Node n = doc["geometry"]) read_geometry(r, n, cfg);
  else r.issue(0, "geometry block is required");
  if (const YAML::Node n = doc["targets"]) read_targets(r, n, cfg);
  if (const YAML::Node n = doc["composite"]) read_composite(r, n, cfg);
  if (const YAML::Node n = doc["solver"]) read_solver(r, n, cfg);
  if (const YAML::Node n = doc["adaptation"]) read_adaptation(r, n, cfg);
  if (const YAML::Node n = doc["output"]) read_output(r, n, cfg);
  r.get(doc, "seed", "", cfg.seed);
  cfg.freestream.attack_angle = cfg.attack_angle_deg * kDegree;
  cfg.adaptation.newton = cfg.solver;

  const std::size_t nt = cfg.targets.size();
  if (!cfg.coefficients.empty() && cfg.coefficients.size() != nt)
    r.issue(r.lines["composite.coefficients"], "composite.coefficients needs one entry per target");
  if (!cfg.baseline_weights.empty() && cfg.baseline_weights.size() != nt)
    r.issue(r.lines["adaptation.baseline_weights"], "adaptation.baseline_weights needs one entry per target");
  if (nt > 0 && (cfg.coefficients.empty() || cfg.coefficients.size() == nt)) {
    try {
      cfg.composite_functional().validate();
    } catch (const std::invalid_argument& e) {
      r.issue(r.lines["composite.coefficients"], std::string("composite: ") + e.what());
    }
  }
  try {
    cfg.adaptation.validate();
  } catch (const ConfigError& e) {
    for (const auto& issue : e.issues()) r.issue(r.line_for(issue.message), issue.message);
  }
  if (!r.issues.empty()) throw ConfigError(std::move(r.issues));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(ss.str(), dir.empty() ? "." : dir.string());
}

std::vector<TargetFunctional> RunConfig::target_functionals() const {
  std::vector<TargetFunctional> out;
  for (const auto& t : targets) {
    TargetFunctional f = TargetFunctional::make(t.kind, t.marker, freestream, t.chord, t.name);
    f.x_ref = t.x_ref;
    out.push_back(f);
  }
  return out;
}

CompositeFunctional RunConfig::composite_functional() const {
  const std::vector<double> c = coefficients.empty() ? std::vector<double>(targets.size(), 1.0) : coefficients;
  return composite == CompositeKind::Product ? CompositeFunctional::product(target_functionals(), c)
                                             : CompositeFunctional::linear(target_functionals(), c);
}

std::vector<double> RunConfig::resolved_baseline_weights() const {
  if (!baseline_weights.empty()) return baseline_weights;
  if (composite == CompositeKind::LinearCombination && !coefficients.empty()) return coefficients;
  return std::vector<double>(targets.size(), 1.0);
}

std::shared_ptr<const RootMesh> RunConfig::root_mesh() const {
  switch (geometry.kind) {
    case GeometryCase::ChannelBump: return channel_mesh(geometry.channel);
    case GeometryCase::Airfoil: return airfoil_omesh(geometry.airfoil);
    case GeometryCase::File: return read_mesh_file(geometry.file);
  }
  throw std::logic_error("unhandled geometry case");
}

HierarchicalTree RunConfig::initial_tree() const {
  HierarchicalTree t = HierarchicalTree::from_root(root_mesh());
  for (int i = 0; i < geometry.uniform_refinements; ++i) t = t.refine_uniformly();
  return t;
}

std::string to_yaml(const RunConfig& cfg) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "freestream" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "mach" << YAML::Value << cfg.freestream.mach;
  e << YAML::Key << "attack_angle" << YAML::Value << cfg.attack_angle_deg;
  e << YAML::Key << "p_inf" << YAML::Value << cfg.freestream.p_inf;
  e << YAML::Key << "rho_inf" << YAML::Value << cfg.freestream.rho_inf;
  e << YAML::Key << "gamma" << YAML::Value << cfg.freestream.gamma;
  e << YAML::EndMap;

  const GeometryConfig& g = cfg.geometry;
  e << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "case" << YAML::Value << to_string(g.kind);
  e << YAML::Key << "uniform_refinements" << YAML::Value << g.uniform_refinements;
  if (g.kind == GeometryCase::ChannelBump) {
    const ChannelOptions& o = g.channel;
    const BumpSpec& b = o.bumps.front();
    e << YAML::Key << "channel" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "nx" << YAML::Value << o.nx << YAML::Key << "ny" << YAML::Value << o.ny;
    e << YAML::Key << "x0" << YAML::Value << o.x0 << YAML::Key << "x1" << YAML::Value << o.x1;
    e << YAML::Key << "height" << YAML::Value << o.height;
    e << YAML::Key << "bump_center" << YAML::Value << b.center;
    e << YAML::Key << "bump_height" << YAML::Value << b.height;
    e << YAML::Key << "bump_width" << YAML::Value << b.width;
    e << YAML::Key << "bump_marker" << YAML::Value << b.marker;
    if (std::isfinite(b.extent)) e << YAML::Key << "bump_extent" << YAML::Value << b.extent;
    e << YAML::Key << "flat_marker" << YAML::Value << o.flat_marker;
    e << YAML::Key << "top_marker" << YAML::Value << o.top_marker;
    e << YAML::Key << "inlet_marker" << YAML::Value << o.inlet_marker;
    e << YAML::Key << "outlet_marker" << YAML::Value << o.outlet_marker;
    e << YAML::EndMap;
  } else if (g.kind == GeometryCase::Airfoil) {
    const AirfoilOptions& o = g.airfoil;
    e << YAML::Key << "airfoil" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "code" << YAML::Value << YAML::DoubleQuoted << o.code;
    e << YAML::Key << "n_around" << YAML::Value << o.n_around;
    e << YAML::Key << "n_radial" << YAML::Value << o.n_radial;
    e << YAML::Key << "outer_radius" << YAML::Value << o.outer_radius;
    e << YAML::Key << "chord" << YAML::Value << o.chord;
    e << YAML::EndMap;
  } else {
    e << YAML::Key << "file" << YAML::Value << g.file;
  }
  e << YAML::EndMap;

  if (!cfg.targets.empty()) {
    e << YAML::Key << "targets" << YAML::Value << YAML::BeginSeq;
    for (const auto& t : cfg.targets) {
      e << YAML::BeginMap;
      e << YAML::Key << "name" << YAML::Value << t.name;
      e << YAML::Key << "kind" << YAML::Value << to_string(t.kind);
      e << YAML::Key << "marker" << YAML::Value << t.marker;
      e << YAML::Key << "chord" << YAML::Value << t.chord;
      e << YAML::Key << "x_ref" << YAML::Value << YAML::Flow << YAML::BeginSeq << t.x_ref.x() << t.x_ref.y()
        << YAML::EndSeq;
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
  }
  e << YAML::Key << "composite" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << (cfg.composite == CompositeKind::Product ? "product" : "linear");
  if (!cfg.coefficients.empty())
    e << YAML::Key << "coefficients" << YAML::Value << YAML::Flow << cfg.coefficients;
  e << YAML::EndMap;

  const NewtonConfig& s = cfg.solver;
  e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "newton_tol" << YAML::Value << s.newton_tol;
  e << YAML::Key << "max_newton_iterations" << YAML::Value << s.max_iterations;
  e << YAML::Key << "alpha" << YAML::Value << s.alpha;
  e << YAML::Key << "linear_tol" << YAML::Value << s.linear_tol;
  e << YAML::Key << "max_cycles" << YAML::Value << s.max_cycles;
  e << YAML::Key << "max_halvings" << YAML::Value << s.max_halvings;
  e << YAML::Key << "armijo" << YAML::Value << s.armijo;
  e << YAML::Key << "linearization" << YAML::Value
    << (s.linearization == Linearization::Exact ? "exact" : "frozen");
  e << YAML::Key << "regularization" << YAML::Value
    << (s.scaling == RegularizationScaling::CellArea ? "cell_area" : "identity");
  e << YAML::Key << "dual_tol" << YAML::Value << cfg.adaptation.dual.tol;
  e << YAML::Key << "dual_max_cycles" << YAML::Value << cfg.adaptation.dual.max_cycles;
  e << YAML::EndMap;

  const AdaptationConfig& a = cfg.adaptation;
  e << YAML::Key << "adaptation" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "theta" << YAML::Value << a.theta;
  e << YAML::Key << "max_iterations" << YAML::Value << a.max_iterations;
  e << YAML::Key << "tol" << YAML::Value << a.tol;
  e << YAML::Key << "max_cells" << YAML::Value << static_cast<unsigned long long>(a.max_cells);
  e << YAML::Key << "dual_refinement" << YAML::Value << a.dual_refinement;
  e << YAML::Key << "resolve_on_dual" << YAML::Value << a.resolve_on_dual;
  e << YAML::Key << "initial_refine" << YAML::Value << a.initial_refine;
  e << YAML::Key << "localization" << YAML::Value << to_string(a.localization);
  if (!cfg.baseline_weights.empty())
    e << YAML::Key << "baseline_weights" << YAML::Value << YAML::Flow << cfg.baseline_weights;
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "directory" << YAML::Value << cfg.output.directory;
  e << YAML::Key << "vtk" << YAML::Value << cfg.output.vtk;
  e << YAML::EndMap;
  e << YAML::Key << "seed" << YAML::Value << static_cast<unsigned long long>(cfg.seed);
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace mmdwr
