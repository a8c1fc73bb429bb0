#pragma once

// Legacy ASCII VTK unstructured grids with cell data, and a reader for the
// subset this writer produces.

#include <iosfwd>
#include <string>
#include <vector>

#include "mmdwr/leaf_mesh.hpp"

namespace mmdwr {

struct VtkField {
  std::string name;
  std::vector<double> values;  // one per cell
};

/// Density, pressure and Mach number of u.
std::vector<VtkField> flow_fields(const LeafMesh& mesh, const CellField& u, double gamma);

/// Throws std::invalid_argument when a field size differs from the cell count.
void export_vtk(std::ostream& os, const LeafMesh& mesh, const std::vector<VtkField>& fields);
void export_vtk(const std::string& path, const LeafMesh& mesh, const std::vector<VtkField>& fields);

struct VtkGrid {
  std::vector<Vec2> points;
  std::vector<std::array<int, 3>> cells;
  std::vector<VtkField> fields;
};

/// Throws IoError on input this writer would not produce.
VtkGrid read_vtk(std::istream& is);

}  // namespace mmdwr
