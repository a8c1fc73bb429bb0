#pragma once

// ASCII mesh files and saved solver states.
//
// Mesh file blocks, each headed by its keyword and entry count:
//   VERTICES n    id x y
//   TRIANGLES n   id v1 v2 v3        (counterclockwise)
//   MARKERS n     id name            (optional, fixes the marker order)
//   BOUNDARY n    id v_a v_b marker
//   GEOMETRY n    marker circle cx cy r | naca4 code chord x0 y0 | polyline file | bump h w x0 y0
// Lines starting with '#' are comments. Coordinates use 17 significant digits.

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mmdwr/leaf_mesh.hpp"
#include "mmdwr/tree.hpp"

namespace mmdwr {

void write_mesh(std::ostream& os, const RootMesh& mesh);
/// Throws IoError on malformed input or an invalid triangulation.
std::shared_ptr<const RootMesh> read_mesh(std::istream& is, const std::string& base_dir = ".");
void write_mesh_file(const std::string& path, const RootMesh& mesh);
std::shared_ptr<const RootMesh> read_mesh_file(const std::string& path);

/// A solution together with everything needed to rebuild its mesh.
struct SavedState {
  HierarchicalTree tree;
  FreestreamSpec freestream;
  std::vector<State> u;  // in leaf order of tree
  std::map<std::string, std::vector<double>> cell_scalars;
  /// Field bound to a mesh built from tree; throws std::invalid_argument on a size mismatch.
  CellField field(const LeafMesh& mesh) const;
};

/// JSON with the root mesh inline, the refinement list and the cell data.
void save_state(const std::string& path, const HierarchicalTree& tree, const FreestreamSpec& fs,
                const CellField& u, const std::map<std::string, std::vector<double>>& cell_scalars = {});
SavedState load_state(const std::string& path);

}  // namespace mmdwr
