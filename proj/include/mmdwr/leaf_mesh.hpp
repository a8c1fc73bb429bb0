#pragma once

// Finite-volume view of the leaves of a hierarchical tree, and conservative
// transfers of piecewise-constant cell data between nested leaf meshes.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "mmdwr/errors.hpp"
#include "mmdwr/tree.hpp"

namespace mmdwr {

struct Face {
  int left = -1;
  int right = -1;  // -1 on the boundary
  int marker = -1; // boundary marker index, -1 for interior faces
  Vec2 normal;     // unit, pointing from left to right (outward on the boundary)
  double length = 0.0;
  Vec2 midpoint;
};

class LeafMesh {
 public:
  explicit LeafMesh(const HierarchicalTree& tree);

  /// Unique per constructed mesh; cell data is tagged with it.
  std::uint64_t id() const { return id_; }
  int num_cells() const { return static_cast<int>(keys_.size()); }
  const std::vector<Face>& faces() const { return faces_; }
  const NodeKey& key(int cell) const { return keys_[cell]; }
  const std::vector<NodeKey>& keys() const { return keys_; }
  /// -1 when the key is not a cell of this mesh.
  int cell_of(const NodeKey& key) const;
  double area(int cell) const { return area_[cell]; }
  const Vec2& centroid(int cell) const { return centroid_[cell]; }
  const std::array<Vec2, 3>& triangle(int cell) const { return triangles_[cell]; }
  /// Number of faces bounding a cell: 3, or 4 for a twin triangle.
  int face_count(int cell) const { return face_count_[cell]; }
  std::uint32_t max_level() const { return max_level_; }

  const std::vector<std::string>& markers() const { return markers_; }
  int marker_index(const std::string& name) const;
  BoundaryKind marker_kind(int marker) const { return kinds_[marker]; }
  double total_area() const;

 private:
  std::uint64_t id_;
  std::vector<NodeKey> keys_;
  std::unordered_map<NodeKey, int, NodeKeyHash> cell_index_;
  std::vector<std::array<Vec2, 3>> triangles_;
  std::vector<double> area_;
  std::vector<Vec2> centroid_;
  std::vector<int> face_count_;
  std::vector<Face> faces_;
  std::vector<std::string> markers_;
  std::vector<BoundaryKind> kinds_;
  std::uint32_t max_level_ = 0;
};

inline LeafMesh leaf_mesh(const HierarchicalTree& tree) { return LeafMesh(tree); }

/// Piecewise-constant cell data tied to one LeafMesh.
template <typename T>
struct CellData {
  std::uint64_t mesh_id = 0;
  std::vector<T> values;

  CellData() = default;
  CellData(const LeafMesh& mesh, const T& fill) : mesh_id(mesh.id()), values(mesh.num_cells(), fill) {}

  T& operator[](int cell) { return values[static_cast<std::size_t>(cell)]; }
  const T& operator[](int cell) const { return values[static_cast<std::size_t>(cell)]; }
  int size() const { return static_cast<int>(values.size()); }
  void check(const LeafMesh& mesh) const {
    if (mesh_id != mesh.id() || static_cast<int>(values.size()) != mesh.num_cells()) {
      throw Error("cell data does not belong to this mesh");
    }
  }
};

using CellField = CellData<State>;
using CellScalars = CellData<double>;

/// Cell of `coarse` containing each cell of `fine`. Throws NotARefinement
/// when some fine cell has no ancestor (or itself) in `coarse`.
std::vector<int> ancestor_map(const LeafMesh& fine, const LeafMesh& coarse);

/// Injection: each target cell takes the value of its ancestor in the source.
template <typename T>
CellData<T> project_to_finer(const LeafMesh& source, const CellData<T>& field, const LeafMesh& target) {
  field.check(source);
  const auto map = ancestor_map(target, source);
  CellData<T> out;
  out.mesh_id = target.id();
  out.values.reserve(map.size());
  for (int src : map) out.values.push_back(field[src]);
  return out;
}

/// Area-weighted average over the source cells inside each target cell.
template <typename T>
CellData<T> restrict_to_coarser(const LeafMesh& source, const CellData<T>& field, const LeafMesh& target) {
  field.check(source);
  const auto map = ancestor_map(source, target);
  CellData<T> out;
  out.mesh_id = target.id();
  std::vector<double> weight(static_cast<std::size_t>(target.num_cells()), 0.0);
  out.values.assign(static_cast<std::size_t>(target.num_cells()), field[0] * 0.0);
  for (int c = 0; c < source.num_cells(); ++c) {
    out[map[c]] += source.area(c) * field[c];
    weight[map[c]] += source.area(c);
  }
  for (int c = 0; c < target.num_cells(); ++c) {
    if (weight[c] <= 0.0) throw NotARefinement("target cell without source descendants");
    out[c] = out[c] / weight[c];
  }
  return out;
}

/// Transfer between two leaf meshes of the same root where neither needs to
/// refine the other: ancestors inject, descendants average.
CellField transfer_field(const LeafMesh& source, const CellField& field, const LeafMesh& target);

/// Integral of a cell field over the mesh.
template <typename T>
T integrate(const LeafMesh& mesh, const CellData<T>& field) {
  field.check(mesh);
  T sum = field[0] * 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) sum += mesh.area(c) * field[c];
  return sum;
}

}  // namespace mmdwr
