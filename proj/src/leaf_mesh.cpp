#include "mmdwr/leaf_mesh.hpp"

#include <atomic>

namespace mmdwr {

namespace {

std::uint64_t next_mesh_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

Face make_face(int left, int right, int marker, const Vec2& a, const Vec2& b) {
  Face f;
  f.left = left;
  f.right = right;
  f.marker = marker;
  const Vec2 d = b - a;
  f.length = d.norm();
  f.normal = Vec2(d.y(), -d.x()) / f.length;
  f.midpoint = 0.5 * (a + b);
  return f;
}

}  // namespace

LeafMesh::LeafMesh(const HierarchicalTree& tree) : id_(next_mesh_id()) {
  const auto& nodes = tree.nodes();
  const auto& table = tree.vertices();
  const auto leaf_ids = tree.leaves();
  const int n = static_cast<int>(leaf_ids.size());
  keys_.reserve(n);
  triangles_.reserve(n);
  area_.reserve(n);
  centroid_.reserve(n);
  std::unordered_map<int, int> cell_of_node;
  cell_of_node.reserve(static_cast<std::size_t>(n) * 2);
  for (int c = 0; c < n; ++c) {
    const auto& node = nodes[leaf_ids[c]];
    keys_.push_back(node.key);
    cell_index_.emplace(node.key, c);
    cell_of_node.emplace(leaf_ids[c], c);
    const std::array<Vec2, 3> tri{table[node.v[0]], table[node.v[1]], table[node.v[2]]};
    triangles_.push_back(tri);
    area_.push_back(signed_area(tri[0], tri[1], tri[2]));
    centroid_.push_back((tri[0] + tri[1] + tri[2]) / 3.0);
    max_level_ = std::max(max_level_, node.key.level);
  }
  face_count_.assign(static_cast<std::size_t>(n), 0);

  auto leaf_cell = [&](int node) -> int {
    auto it = cell_of_node.find(node);
    if (it == cell_of_node.end()) throw Error("hanging rule violated: neighbour is not a leaf");
    return it->second;
  };

  for (int c = 0; c < n; ++c) {
    const int self = leaf_ids[c];
    const auto& node = nodes[self];
    for (int k = 0; k < 3; ++k) {
      const int a = node.v[k];
      const int b = node.v[(k + 1) % 3];
      if (node.edge_marker[k] >= 0) {
        faces_.push_back(make_face(c, -1, node.edge_marker[k], table[a], table[b]));
        ++face_count_[c];
        continue;
      }
      const int m = tree.split_midpoint(a, b);
      if (m >= 0) {
        // Twin triangle: two half faces against the finer neighbours.
        for (const auto& [p, q] : {std::pair{a, m}, std::pair{m, b}}) {
          const auto owners = tree.edge_owners(p, q);
          const int other = owners[0] != self ? owners[0] : owners[1];
          const int nb = leaf_cell(other);
          faces_.push_back(make_face(c, nb, -1, table[p], table[q]));
          ++face_count_[c];
          ++face_count_[nb];
        }
        continue;
      }
      const auto owners = tree.edge_owners(a, b);
      const int other = owners[0] == self ? owners[1] : owners[0];
      if (other < 0) continue;  // half of a coarser neighbour's edge; emitted from that side
      const int nb = leaf_cell(other);
      if (c < nb) {
        faces_.push_back(make_face(c, nb, -1, table[a], table[b]));
        ++face_count_[c];
        ++face_count_[nb];
      }
    }
  }

  const auto& root = tree.root_mesh();
  markers_ = root.markers;
  for (const auto& name : markers_) kinds_.push_back(boundary_kind(name));
}

int LeafMesh::cell_of(const NodeKey& key) const {
  auto it = cell_index_.find(key);
  return it == cell_index_.end() ? -1 : it->second;
}

int LeafMesh::marker_index(const std::string& name) const {
  for (std::size_t i = 0; i < markers_.size(); ++i) {
    if (markers_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

double LeafMesh::total_area() const {
  double sum = 0.0;
  for (double a : area_) sum += a;
  return sum;
}

std::vector<int> ancestor_map(const LeafMesh& fine, const LeafMesh& coarse) {
  std::vector<int> map(static_cast<std::size_t>(fine.num_cells()), -1);
  for (int c = 0; c < fine.num_cells(); ++c) {
    NodeKey key = fine.key(c);
    while (true) {
      const int hit = coarse.cell_of(key);
      if (hit >= 0) {
        map[c] = hit;
        break;
      }
      if (key.level == 0) throw NotARefinement("mesh does not refine the target mesh");
      key = key.parent();
    }
  }
  return map;
}

CellField transfer_field(const LeafMesh& source, const CellField& field, const LeafMesh& target) {
  field.check(source);
  CellField out(target, State::Zero());
  std::vector<double> weight(static_cast<std::size_t>(target.num_cells()), 0.0);
  // Source cells that are finer than (or equal to) a target cell.
  for (int c = 0; c < source.num_cells(); ++c) {
    NodeKey key = source.key(c);
    while (true) {
      const int hit = target.cell_of(key);
      if (hit >= 0) {
        out[hit] += source.area(c) * field[c];
        weight[hit] += source.area(c);
        break;
      }
      if (key.level == 0) break;
      key = key.parent();
    }
  }
  for (int t = 0; t < target.num_cells(); ++t) {
    if (weight[t] > 0.0) {
      out[t] /= weight[t];
      continue;
    }
    // Target cell finer than the source: inject from its ancestor.
    NodeKey key = target.key(t);
    int hit = -1;
    while (hit < 0 && key.level > 0) {
      key = key.parent();
      hit = source.cell_of(key);
    }
    if (hit < 0) throw NotARefinement("meshes do not share a root");
    out[t] = field[hit];
  }
  return out;
}

}  // namespace mmdwr
