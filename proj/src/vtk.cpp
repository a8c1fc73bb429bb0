#include "mmdwr/vtk.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace mmdwr {

std::vector<VtkField> flow_fields(const LeafMesh& mesh, const CellField& u, double gamma) {
  u.check(mesh);
  VtkField rho{"density", {}}, p{"pressure", {}}, mach{"mach", {}};
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const State& s = u[c];
    const double pc = pressure(s, gamma);
    const double speed = std::hypot(s[1], s[2]) / s[0];
    rho.values.push_back(s[0]);
    p.values.push_back(pc);
    mach.values.push_back(speed / std::sqrt(gamma * pc / s[0]));
  }
  return {rho, p, mach};
}

void export_vtk(std::ostream& os, const LeafMesh& mesh, const std::vector<VtkField>& fields) {
  const int n = mesh.num_cells();
  for (const auto& f : fields) {
    if (static_cast<int>(f.values.size()) != n) throw std::invalid_argument("field '" + f.name + "' has the wrong size");
  }
  // Leaves share vertex coordinates exactly, so points dedupe by value.
  std::map<std::pair<double, double>, int> index;
  std::vector<Vec2> points;
  std::vector<std::array<int, 3>> cells(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    for (int k = 0; k < 3; ++k) {
      const Vec2& v = mesh.triangle(c)[k];
      auto [it, inserted] = index.emplace(std::make_pair(v.x(), v.y()), static_cast<int>(points.size()));
      if (inserted) points.push_back(v);
      cells[static_cast<std::size_t>(c)][k] = it->second;
    }
  }
  const auto old_precision = os.precision(17);
  os << "# vtk DataFile Version 3.0\nmmdwr\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << points.size() << " double\n";
  for (const Vec2& v : points) os << v.x() << " " << v.y() << " 0\n";
  os << "CELLS " << n << " " << 4 * n << "\n";
  for (const auto& t : cells) os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  os << "CELL_TYPES " << n << "\n";
  for (int c = 0; c < n; ++c) os << "5\n";
  if (!fields.empty()) {
    os << "CELL_DATA " << n << "\n";
    for (const auto& f : fields) {
      os << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.values) os << v << "\n";
    }
  }
  os.precision(old_precision);
}

void export_vtk(const std::string& path, const LeafMesh& mesh, const std::vector<VtkField>& fields) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  export_vtk(out, mesh, fields);
  if (!out) throw IoError("write failed for '" + path + "'");
}

VtkGrid read_vtk(std::istream& is) {
  auto fail = [](const std::string& msg) { throw IoError("vtk: " + msg); };
  std::string line;
  if (!std::getline(is, line) || line.rfind("# vtk DataFile", 0) != 0) fail("missing header");
  std::getline(is, line);  // title
  if (!std::getline(is, line) || line != "ASCII") fail("only ASCII files are supported");
  if (!std::getline(is, line) || line != "DATASET UNSTRUCTURED_GRID") fail("expected an unstructured grid");
  VtkGrid g;
  std::string word;
  long count = 0;
  while (is >> word) {
    if (word == "POINTS") {
      std::string type;
      is >> count >> type;
      for (long i = 0; i < count; ++i) {
        double x, y, z;
        if (!(is >> x >> y >> z)) fail("truncated POINTS");
        g.points.emplace_back(x, y);
      }
    } else if (word == "CELLS") {
      long size = 0;
      is >> count >> size;
      for (long i = 0; i < count; ++i) {
        int nv = 0;
        std::array<int, 3> t{};
        if (!(is >> nv) || nv != 3 || !(is >> t[0] >> t[1] >> t[2])) fail("expected triangles in CELLS");
        g.cells.push_back(t);
      }
    } else if (word == "CELL_TYPES") {
      is >> count;
      for (long i = 0; i < count; ++i) {
        int type = 0;
        if (!(is >> type) || type != 5) fail("expected cell type 5");
      }
    } else if (word == "CELL_DATA") {
      is >> count;
    } else if (word == "SCALARS") {
      VtkField f;
      std::string type, lookup, table;
      int comps = 1;
      is >> f.name >> type >> comps >> lookup >> table;
      if (comps != 1 || lookup != "LOOKUP_TABLE") fail("unsupported SCALARS block");
      for (std::size_t i = 0; i < g.cells.size(); ++i) {
        double v;
        if (!(is >> v)) fail("truncated SCALARS '" + f.name + "'");
        f.values.push_back(v);
      }
      g.fields.push_back(std::move(f));
    } else {
      fail("unexpected keyword '" + word + "'");
    }
    if (!is) fail("truncated " + word);
  }
  return g;
}

}  // namespace mmdwr
