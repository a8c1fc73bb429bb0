#pragma once

// Hierarchical geometry tree over triangles. Every refinement splits a
// triangle into four (red refinement); hanging vertices are allowed, at most
// one per leaf. The union of two meshes is the merge of their trees.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mmdwr/geometry.hpp"

namespace mmdwr {

/// Identity of a tree node independent of the tree that holds it: the root
/// triangle plus the sequence of child indices (two bits per level).
struct NodeKey {
  std::uint32_t root = 0;
  std::uint32_t level = 0;
  std::uint64_t path = 0;

  static constexpr std::uint32_t kMaxLevel = 31;

  NodeKey parent() const { return {root, level - 1, path >> 2}; }
  NodeKey child(int c) const { return {root, level + 1, (path << 2) | static_cast<std::uint64_t>(c)}; }
  /// Ancestor at the given level (the key itself when level >= this->level).
  NodeKey ancestor(std::uint32_t at_level) const;
  bool is_ancestor_of(const NodeKey& other) const;
  std::string to_string() const;  // "root:digits"
  static NodeKey parse(const std::string& text);

  friend bool operator==(const NodeKey&, const NodeKey&) = default;
  friend bool operator<(const NodeKey& a, const NodeKey& b) {
    if (a.level != b.level) return a.level < b.level;
    if (a.root != b.root) return a.root < b.root;
    return a.path < b.path;
  }
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const noexcept {
    std::uint64_t h = k.path * 0x9E3779B97F4A7C15ULL;
    h ^= (static_cast<std::uint64_t>(k.root) << 8 | k.level) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// Append-only vertex registry shared by every tree grown from one root mesh.
/// Midpoints are keyed by their parent edge, so all trees agree on vertex ids.
class VertexTable {
 public:
  explicit VertexTable(std::vector<Vec2> root_vertices) : coords_(std::move(root_vertices)) {}

  const Vec2& operator[](int v) const { return coords_[v]; }
  int size() const { return static_cast<int>(coords_.size()); }
  /// -1 when the edge has never been split.
  int find_midpoint(int a, int b) const;
  /// Existing midpoint or a new one at `position`.
  int midpoint(int a, int b, const Vec2& position);
  void set_curve_parameter(int v, double t) { curve_param_[v] = t; }
  /// Stored parameter of a projected vertex, if any.
  const double* curve_parameter(int v) const;

 private:
  std::vector<Vec2> coords_;
  std::unordered_map<std::uint64_t, int> midpoints_;
  std::unordered_map<int, double> curve_param_;
};

struct TreeNode {
  NodeKey key;
  std::array<int, 3> v{};           // counterclockwise vertex ids
  std::array<int, 3> edge_marker{};  // edge k = (v[k], v[k+1]); -1 when interior
  int parent = -1;
  int first_child = -1;  // children are stored contiguously

  bool is_leaf() const { return first_child < 0; }
};

class HierarchicalTree {
 public:
  /// Tree whose leaves are exactly the root triangles.
  static HierarchicalTree from_root(std::shared_ptr<const RootMesh> root);

  const RootMesh& root_mesh() const { return *root_; }
  const std::shared_ptr<const RootMesh>& root_ptr() const { return root_; }
  const VertexTable& vertices() const { return *vertices_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  /// Node index of a key, or -1.
  int find(const NodeKey& key) const;
  bool is_leaf(const NodeKey& key) const;
  /// Leaves in depth-first order (roots in order, children 0..3).
  std::vector<int> leaves() const;
  std::size_t num_leaves() const;
  std::uint32_t max_level() const;

  /// Red-refines the given leaves and restores the hanging rule.
  /// Throws UnknownCell when a key is not a leaf of this tree.
  HierarchicalTree refine_cells(std::span<const NodeKey> marked) const;
  /// Refines every leaf once.
  HierarchicalTree refine_uniformly() const;
  /// Smallest refinement satisfying the at-most-one-hanging-point rule.
  HierarchicalTree enforce_hanging_rule() const;
  /// Tree with all nodes deeper than `depth` removed.
  HierarchicalTree truncated(std::uint32_t depth) const;

  /// Keys of all refined nodes, sorted by (level, root, path). Replaying them
  /// in order onto the root reproduces the tree exactly.
  std::vector<NodeKey> refinement_list() const;
  /// Rebuilds a tree from a refinement list (no closure is applied).
  static HierarchicalTree from_refinements(std::shared_ptr<const RootMesh> root,
                                           std::span<const NodeKey> refined);

  /// Leaves with two or more hanging vertices, or with an edge split more than once.
  std::vector<NodeKey> hanging_rule_violations() const;
  /// Number of hanging vertices on the edges of a leaf.
  int hanging_points(int node) const;

  /// Midpoint id if edge (a, b) is split in this tree, else -1.
  int split_midpoint(int a, int b) const;
  /// Nodes of this tree owning edge (a, b); -1 entries when absent.
  std::array<int, 2> edge_owners(int a, int b) const;

  friend HierarchicalTree union_trees(const HierarchicalTree& a, const HierarchicalTree& b);

 private:
  HierarchicalTree() = default;
  void refine_in_place(int node);
  void close_in_place();
  bool violates_rule(int node) const;
  void register_edges(int node);

  std::shared_ptr<const RootMesh> root_;
  std::shared_ptr<VertexTable> vertices_;
  std::vector<TreeNode> nodes_;
  std::unordered_map<NodeKey, int, NodeKeyHash> index_;
  std::unordered_map<std::uint64_t, std::array<int, 2>> edges_;
};

/// Coarsest tree refining both inputs, followed by hanging-rule closure.
/// Throws RootMismatch when the trees grow from different initial meshes.
HierarchicalTree union_trees(const HierarchicalTree& a, const HierarchicalTree& b);
/// Left fold of union_trees.
HierarchicalTree union_trees(std::span<const HierarchicalTree> trees);

}  // namespace mmdwr
