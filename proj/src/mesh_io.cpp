#include "mmdwr/mesh_io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mmdwr/errors.hpp"

namespace mmdwr {

void write_mesh(std::ostream& os, const RootMesh& mesh) {
  const auto old_precision = os.precision(17);
  os << "VERTICES " << mesh.vertices.size() << "\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    os << i << " " << mesh.vertices[i].x() << " " << mesh.vertices[i].y() << "\n";
  }
  os << "TRIANGLES " << mesh.triangles.size() << "\n";
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    os << i << " " << t[0] << " " << t[1] << " " << t[2] << "\n";
  }
  os << "MARKERS " << mesh.markers.size() << "\n";
  for (std::size_t i = 0; i < mesh.markers.size(); ++i) os << i << " " << mesh.markers[i] << "\n";
  os << "BOUNDARY " << mesh.boundary.size() << "\n";
  for (std::size_t i = 0; i < mesh.boundary.size(); ++i) {
    const auto& e = mesh.boundary[i];
    os << i << " " << e.a << " " << e.b << " " << mesh.markers[e.marker] << "\n";
  }
  std::size_t curves = 0;
  for (const auto& c : mesh.curves) curves += c ? 1 : 0;
  if (curves > 0) {
    os << "GEOMETRY " << curves << "\n";
    for (std::size_t m = 0; m < mesh.markers.size(); ++m) {
      if (m < mesh.curves.size() && mesh.curves[m]) os << mesh.markers[m] << " " << mesh.curves[m]->describe() << "\n";
    }
  }
  os.precision(old_precision);
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  /// Next non-empty, non-comment line; false at end of input.
  bool next(std::string& line) {
    while (std::getline(is_, line)) {
      ++number_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw IoError("mesh line " + std::to_string(number_) + ": " + msg);
  }

 private:
  std::istream& is_;
  int number_ = 0;
};

}  // namespace

std::shared_ptr<const RootMesh> read_mesh(std::istream& is, const std::string& base_dir) {
  auto mesh = std::make_shared<RootMesh>();
  LineReader in(is);
  std::string line;
  std::map<int, std::shared_ptr<const BoundaryCurve>> pending;  // marker -> curve
  bool seen_vertices = false, seen_triangles = false;
  while (in.next(line)) {
    std::istringstream head(line);
    std::string block;
    long count = -1;
    head >> block >> count;
    if (count < 0) in.fail("expected '<BLOCK> <count>'");
    for (long i = 0; i < count; ++i) {
      if (!in.next(line)) in.fail("unexpected end of " + block + " block");
      std::istringstream row(line);
      if (block == "VERTICES") {
        long id = -1;
        double x = 0.0, y = 0.0;
        if (!(row >> id >> x >> y) || id != i) in.fail("bad vertex row");
        mesh->vertices.emplace_back(x, y);
      } else if (block == "TRIANGLES") {
        long id = -1;
        std::array<int, 3> t{};
        if (!(row >> id >> t[0] >> t[1] >> t[2]) || id != i) in.fail("bad triangle row");
        mesh->triangles.push_back(t);
      } else if (block == "MARKERS") {
        long id = -1;
        std::string marker;
        if (!(row >> id >> marker) || id != i || mesh->marker_index(marker) >= 0) in.fail("bad marker row");
        mesh->add_marker(marker);
      } else if (block == "BOUNDARY") {
        long id = -1;
        BoundaryEdge e;
        std::string marker;
        if (!(row >> id >> e.a >> e.b >> marker) || id != i) in.fail("bad boundary row");
        e.marker = mesh->add_marker(marker);
        mesh->boundary.push_back(e);
      } else if (block == "GEOMETRY") {
        std::string marker;
        if (!(row >> marker)) in.fail("bad geometry row");
        std::string rest;
        std::getline(row, rest);
        try {
          pending[mesh->add_marker(marker)] = parse_curve(rest, base_dir);
        } catch (const IoError&) {
          throw;
        } catch (const std::exception& e) {
          in.fail(e.what());
        }
      } else {
        in.fail("unknown block '" + block + "'");
      }
    }
    seen_vertices = seen_vertices || block == "VERTICES";
    seen_triangles = seen_triangles || block == "TRIANGLES";
  }
  if (!seen_vertices || !seen_triangles) throw IoError("mesh needs VERTICES and TRIANGLES blocks");
  mesh->curves.assign(mesh->markers.size(), nullptr);
  for (const auto& [m, c] : pending) mesh->curves[static_cast<std::size_t>(m)] = c;
  mesh->validate();
  return mesh;
}

void write_mesh_file(const std::string& path, const RootMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_mesh(out, mesh);
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::shared_ptr<const RootMesh> read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read mesh '" + path + "'");
  const auto dir = std::filesystem::path(path).parent_path();
  return read_mesh(in, dir.empty() ? "." : dir.string());
}

CellField SavedState::field(const LeafMesh& mesh) const {
  if (static_cast<int>(u.size()) != mesh.num_cells()) throw std::invalid_argument("state size does not match the mesh");
  CellField f(mesh, State::Zero());
  for (int c = 0; c < mesh.num_cells(); ++c) f[c] = u[static_cast<std::size_t>(c)];
  return f;
}

void save_state(const std::string& path, const HierarchicalTree& tree, const FreestreamSpec& fs,
                const CellField& u, const std::map<std::string, std::vector<double>>& cell_scalars) {
  using nlohmann::json;
  std::ostringstream mesh_text;
  write_mesh(mesh_text, tree.root_mesh());
  json j;
  j["format"] = "mmdwr-state-1";
  j["freestream"] = {{"mach", fs.mach},       {"attack_angle", fs.attack_angle}, {"p_inf", fs.p_inf},
                     {"rho_inf", fs.rho_inf}, {"gamma", fs.gamma}};
  j["root_mesh"] = mesh_text.str();
  json keys = json::array();
  for (const auto& k : tree.refinement_list()) keys.push_back(k.to_string());
  j["refinements"] = keys;
  json cells = json::array();
  for (const State& s : u.values) cells.push_back({s[0], s[1], s[2], s[3]});
  j["u"] = cells;
  j["cell_scalars"] = cell_scalars;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(1) << "\n";
  if (!out) throw IoError("write failed for '" + path + "'");
}

SavedState load_state(const std::string& path) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in) throw IoError("cannot read state '" + path + "'");
  try {
    const json j = json::parse(in);
    if (j.at("format") != "mmdwr-state-1") throw IoError("'" + path + "' is not a saved state");
    std::istringstream mesh_text(j.at("root_mesh").get<std::string>());
    const auto dir = std::filesystem::path(path).parent_path();
    auto root = read_mesh(mesh_text, dir.empty() ? "." : dir.string());
    std::vector<NodeKey> keys;
    for (const auto& k : j.at("refinements")) keys.push_back(NodeKey::parse(k.get<std::string>()));
    FreestreamSpec fs;
    const json& f = j.at("freestream");
    fs.mach = f.at("mach").get<double>();
    fs.attack_angle = f.at("attack_angle").get<double>();
    fs.p_inf = f.at("p_inf").get<double>();
    fs.rho_inf = f.at("rho_inf").get<double>();
    fs.gamma = f.at("gamma").get<double>();
    SavedState st{HierarchicalTree::from_refinements(root, keys), fs, {}, {}};
    for (const auto& c : j.at("u")) {
      st.u.push_back(State(c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>(),
                           c.at(3).get<double>()));
    }
    st.cell_scalars = j.at("cell_scalars").get<std::map<std::string, std::vector<double>>>();
    if (st.u.size() != st.tree.num_leaves()) throw IoError("state field size does not match its mesh");
    return st;
  } catch (const json::exception& e) {
    throw IoError("malformed state '" + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError("malformed state '" + path + "': " + e.what());
  }
}

}  // namespace mmdwr
