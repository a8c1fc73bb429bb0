#include "mmdwr/tree.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "mmdwr/errors.hpp"

namespace mmdwr {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

// Children whose area falls below this fraction of the straight-edge child
// area reject a curved boundary midpoint.
constexpr double kMinProjectedChildFraction = 0.25;

}  // namespace

NodeKey NodeKey::ancestor(std::uint32_t at_level) const {
  if (at_level >= level) return *this;
  return {root, at_level, path >> (2 * (level - at_level))};
}

bool NodeKey::is_ancestor_of(const NodeKey& other) const {
  return other.root == root && other.level >= level && other.ancestor(level) == *this;
}

std::string NodeKey::to_string() const {
  std::string s = std::to_string(root) + ":";
  for (std::uint32_t l = level; l > 0; --l) {
    s += static_cast<char>('0' + ((path >> (2 * (l - 1))) & 3U));
  }
  return s;
}

NodeKey NodeKey::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0) throw IoError("malformed node key: " + text);
  NodeKey key;
  try {
    key.root = static_cast<std::uint32_t>(std::stoul(text.substr(0, colon)));
  } catch (const std::exception&) {
    throw IoError("malformed node key: " + text);
  }
  for (std::size_t i = colon + 1; i < text.size(); ++i) {
    const char c = text[i];
    if (c < '0' || c > '3' || key.level >= kMaxLevel) throw IoError("malformed node key: " + text);
    key = key.child(c - '0');
  }
  return key;
}

int VertexTable::find_midpoint(int a, int b) const {
  auto it = midpoints_.find(edge_key(a, b));
  return it == midpoints_.end() ? -1 : it->second;
}

int VertexTable::midpoint(int a, int b, const Vec2& position) {
  auto [it, inserted] = midpoints_.try_emplace(edge_key(a, b), static_cast<int>(coords_.size()));
  if (inserted) coords_.push_back(position);
  return it->second;
}

const double* VertexTable::curve_parameter(int v) const {
  auto it = curve_param_.find(v);
  return it == curve_param_.end() ? nullptr : &it->second;
}

HierarchicalTree HierarchicalTree::from_root(std::shared_ptr<const RootMesh> root) {
  root->validate();
  HierarchicalTree tree;
  tree.root_ = std::move(root);
  tree.vertices_ = std::make_shared<VertexTable>(tree.root_->vertices);
  std::unordered_map<std::uint64_t, int> boundary_marker;
  for (const auto& e : tree.root_->boundary) boundary_marker[edge_key(e.a, e.b)] = e.marker;
  const auto& tris = tree.root_->triangles;
  tree.nodes_.reserve(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    TreeNode node;
    node.key = {static_cast<std::uint32_t>(t), 0, 0};
    node.v = tris[t];
    for (int k = 0; k < 3; ++k) {
      auto it = boundary_marker.find(edge_key(node.v[k], node.v[(k + 1) % 3]));
      node.edge_marker[k] = it == boundary_marker.end() ? -1 : it->second;
    }
    tree.nodes_.push_back(node);
    tree.index_.emplace(node.key, static_cast<int>(t));
    tree.register_edges(static_cast<int>(t));
  }
  return tree;
}

void HierarchicalTree::register_edges(int node) {
  const auto& v = nodes_[node].v;
  for (int k = 0; k < 3; ++k) {
    auto [it, inserted] = edges_.try_emplace(edge_key(v[k], v[(k + 1) % 3]), std::array<int, 2>{node, -1});
    if (!inserted) it->second[1] = node;
  }
}

int HierarchicalTree::find(const NodeKey& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

bool HierarchicalTree::is_leaf(const NodeKey& key) const {
  const int idx = find(key);
  return idx >= 0 && nodes_[idx].is_leaf();
}

std::vector<int> HierarchicalTree::leaves() const {
  std::vector<int> out;
  std::vector<int> stack;
  const int nroots = static_cast<int>(root_->triangles.size());
  for (int r = 0; r < nroots; ++r) {
    stack.push_back(r);
    while (!stack.empty()) {
      const int n = stack.back();
      stack.pop_back();
      if (nodes_[n].is_leaf()) {
        out.push_back(n);
      } else {
        for (int c = 3; c >= 0; --c) stack.push_back(nodes_[n].first_child + c);
      }
    }
  }
  return out;
}

std::size_t HierarchicalTree::num_leaves() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                                [](const TreeNode& n) { return n.is_leaf(); }));
}

std::uint32_t HierarchicalTree::max_level() const {
  std::uint32_t m = 0;
  for (const auto& n : nodes_) m = std::max(m, n.key.level);
  return m;
}

int HierarchicalTree::split_midpoint(int a, int b) const {
  const int m = vertices_->find_midpoint(a, b);
  if (m < 0) return -1;
  return edges_.count(edge_key(a, m)) ? m : -1;
}

std::array<int, 2> HierarchicalTree::edge_owners(int a, int b) const {
  auto it = edges_.find(edge_key(a, b));
  return it == edges_.end() ? std::array<int, 2>{-1, -1} : it->second;
}

void HierarchicalTree::refine_in_place(int node) {
  if (!nodes_[node].is_leaf()) return;
  if (nodes_[node].key.level >= NodeKey::kMaxLevel) throw Error("maximum refinement depth reached");
  const TreeNode parent = nodes_[node];
  VertexTable& table = *vertices_;
  const std::array<Vec2, 3> p{table[parent.v[0]], table[parent.v[1]], table[parent.v[2]]};

  std::array<int, 3> mid{};
  for (int k = 0; k < 3; ++k) {
    const int a = parent.v[k];
    const int b = parent.v[(k + 1) % 3];
    const int existing = table.find_midpoint(a, b);
    if (existing >= 0) {
      mid[k] = existing;
      continue;
    }
    Vec2 pos = 0.5 * (p[k] + p[(k + 1) % 3]);
    const int marker = parent.edge_marker[k];
    const BoundaryCurve* curve =
        marker >= 0 ? root_->curves[static_cast<std::size_t>(marker)].get() : nullptr;
    double param = 0.0;
    bool projected = false;
    if (curve) {
      const double* pa = table.curve_parameter(a);
      const double* pb = table.curve_parameter(b);
      const double ta = pa ? *pa : curve->parameter_of(p[k]);
      const double tb = pb ? *pb : curve->parameter_of(p[(k + 1) % 3]);
      param = curve->midpoint_parameter(ta, tb);
      const Vec2 candidate = curve->point_at(param);
      // Children touching the moved midpoint must keep a healthy area.
      const Vec2& opposite = p[(k + 2) % 3];
      const Vec2 other_mid_a = 0.5 * (p[(k + 1) % 3] + opposite);
      const Vec2 other_mid_b = 0.5 * (opposite + p[k]);
      const double quarter = 0.25 * signed_area(p[0], p[1], p[2]);
      const double floor = kMinProjectedChildFraction * quarter;
      if (signed_area(p[k], candidate, other_mid_b) > floor &&
          signed_area(candidate, p[(k + 1) % 3], other_mid_a) > floor &&
          signed_area(candidate, other_mid_a, other_mid_b) > floor) {
        pos = candidate;
        projected = true;
      }
    }
    mid[k] = table.midpoint(a, b, pos);
    if (projected) table.set_curve_parameter(mid[k], param);
  }

  const auto& v = parent.v;
  const auto& e = parent.edge_marker;
  const std::array<std::array<int, 3>, 4> child_vertices{{
      {v[0], mid[0], mid[2]},
      {mid[0], v[1], mid[1]},
      {mid[2], mid[1], v[2]},
      {mid[0], mid[1], mid[2]},
  }};
  const std::array<std::array<int, 3>, 4> child_markers{{
      {e[0], -1, e[2]},
      {e[0], e[1], -1},
      {-1, e[1], e[2]},
      {-1, -1, -1},
  }};
  const int first = static_cast<int>(nodes_.size());
  nodes_[node].first_child = first;
  for (int c = 0; c < 4; ++c) {
    TreeNode child;
    child.key = parent.key.child(c);
    child.v = child_vertices[c];
    child.edge_marker = child_markers[c];
    child.parent = node;
    nodes_.push_back(child);
    index_.emplace(child.key, first + c);
    register_edges(first + c);
  }
}

int HierarchicalTree::hanging_points(int node) const {
  const auto& v = nodes_[node].v;
  int count = 0;
  for (int k = 0; k < 3; ++k) {
    if (split_midpoint(v[k], v[(k + 1) % 3]) >= 0) ++count;
  }
  return count;
}

bool HierarchicalTree::violates_rule(int node) const {
  const auto& v = nodes_[node].v;
  int split = 0;
  for (int k = 0; k < 3; ++k) {
    const int a = v[k];
    const int b = v[(k + 1) % 3];
    const int m = split_midpoint(a, b);
    if (m < 0) continue;
    ++split;
    if (split_midpoint(a, m) >= 0 || split_midpoint(m, b) >= 0) return true;
  }
  return split >= 2;
}

void HierarchicalTree::close_in_place() {
  std::vector<int> marked;
  while (true) {
    marked.clear();
    for (int n : leaves()) {
      if (violates_rule(n)) marked.push_back(n);
    }
    if (marked.empty()) break;
    for (int n : marked) refine_in_place(n);
  }
}

HierarchicalTree HierarchicalTree::refine_cells(std::span<const NodeKey> marked) const {
  std::vector<int> ids;
  ids.reserve(marked.size());
  for (const auto& key : marked) {
    const int idx = find(key);
    if (idx < 0 || !nodes_[idx].is_leaf()) throw UnknownCell("not a leaf: " + key.to_string());
    ids.push_back(idx);
  }
  HierarchicalTree out = *this;
  if (ids.empty()) return out;
  for (int id : ids) out.refine_in_place(id);
  out.close_in_place();
  return out;
}

HierarchicalTree HierarchicalTree::refine_uniformly() const {
  HierarchicalTree out = *this;
  for (int n : leaves()) out.refine_in_place(n);
  out.close_in_place();
  return out;
}

HierarchicalTree HierarchicalTree::enforce_hanging_rule() const {
  HierarchicalTree out = *this;
  out.close_in_place();
  return out;
}

std::vector<NodeKey> HierarchicalTree::refinement_list() const {
  std::vector<NodeKey> keys;
  for (const auto& n : nodes_) {
    if (!n.is_leaf()) keys.push_back(n.key);
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

HierarchicalTree HierarchicalTree::from_refinements(std::shared_ptr<const RootMesh> root,
                                                    std::span<const NodeKey> refined) {
  HierarchicalTree tree = from_root(std::move(root));
  std::vector<NodeKey> sorted(refined.begin(), refined.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& key : sorted) {
    const int idx = tree.find(key);
    if (idx < 0) throw UnknownCell("refinement of a node whose parent is not refined: " + key.to_string());
    tree.refine_in_place(idx);
  }
  return tree;
}

HierarchicalTree HierarchicalTree::truncated(std::uint32_t depth) const {
  HierarchicalTree out;
  out.root_ = root_;
  out.vertices_ = vertices_;
  const auto nroots = root_->triangles.size();
  out.nodes_.assign(nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(nroots));
  for (std::size_t r = 0; r < nroots; ++r) {
    out.nodes_[r].first_child = -1;
    out.index_.emplace(out.nodes_[r].key, static_cast<int>(r));
    out.register_edges(static_cast<int>(r));
  }
  for (const auto& key : refinement_list()) {
    if (key.level >= depth) break;
    out.refine_in_place(out.find(key));
  }
  return out;
}

std::vector<NodeKey> HierarchicalTree::hanging_rule_violations() const {
  std::vector<NodeKey> out;
  for (int n : leaves()) {
    if (violates_rule(n)) out.push_back(nodes_[n].key);
  }
  return out;
}

HierarchicalTree union_trees(const HierarchicalTree& a, const HierarchicalTree& b) {
  if (a.root_ != b.root_ && !a.root_->same_geometry(*b.root_)) {
    throw RootMismatch("trees grow from different initial meshes");
  }
  HierarchicalTree out = a;
  for (const auto& key : b.refinement_list()) {
    const int idx = out.find(key);
    // Parents precede children in the sorted list, so the node exists.
    out.refine_in_place(idx);
  }
  out.close_in_place();
  return out;
}

HierarchicalTree union_trees(std::span<const HierarchicalTree> trees) {
  if (trees.empty()) throw Error("union of an empty tree list");
  HierarchicalTree out = trees.front();
  for (std::size_t i = 1; i < trees.size(); ++i) out = union_trees(out, trees[i]);
  return out;
}

}  // namespace mmdwr
