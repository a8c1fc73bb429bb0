#include <doctest.h>

#include "mmdwr/leaf_mesh.hpp"
#include "test_support.hpp"

using namespace mmdwr;
using namespace mmdwr::test;

namespace {

HierarchicalTree hanging_channel(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_tree(builtin_channel_bump(16, 4, 0.05), 4, 0.3, rng);
}

}  // namespace

TEST_CASE("every control volume is closed: sum of length * outward normal vanishes") {
  const LeafMesh m(hanging_channel(31));
  std::vector<Vec2> sum(m.num_cells(), Vec2::Zero());
  std::vector<int> count(m.num_cells(), 0);
  for (const auto& f : m.faces()) {
    sum[f.left] += f.length * f.normal;
    ++count[f.left];
    if (f.right >= 0) {
      sum[f.right] -= f.length * f.normal;
      ++count[f.right];
    }
  }
  int twins = 0;
  for (int c = 0; c < m.num_cells(); ++c) {
    CHECK(sum[c].norm() < 1e-13);
    CHECK(count[c] == m.face_count(c));
    twins += m.face_count(c) == 4;
  }
  CHECK(twins > 0);
}

TEST_CASE("cell areas add up to the domain area") {
  const HierarchicalTree root = builtin_channel_bump(16, 4, 0.0);
  const LeafMesh m(hanging_channel(32));
  CHECK(LeafMesh(root).total_area() == doctest::Approx(4.0).epsilon(1e-12));
  double sum = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    CHECK(m.area(c) > 0.0);
    sum += m.area(c);
  }
  CHECK(sum == doctest::Approx(m.total_area()).epsilon(1e-14));
}

TEST_CASE("faces of a twin triangle split its long edge at the hanging point") {
  const LeafMesh m(hanging_channel(33));
  for (int c = 0; c < m.num_cells(); ++c) {
    if (m.face_count(c) != 4) continue;
    double perimeter = 0.0;
    const auto& t = m.triangle(c);
    for (int k = 0; k < 3; ++k) perimeter += (t[(k + 1) % 3] - t[k]).norm();
    double faces = 0.0;
    for (const auto& f : m.faces()) {
      if (f.left == c || f.right == c) faces += f.length;
    }
    CHECK(faces == doctest::Approx(perimeter).epsilon(1e-12));
  }
}

TEST_CASE("ancestor map rejects meshes that are not nested") {
  const HierarchicalTree root = builtin_channel_bump(8, 4, 0.05);
  const LeafMesh coarse(root), fine(root.refine_uniformly());
  CHECK_NOTHROW(ancestor_map(fine, coarse));
  CHECK_THROWS_AS(ancestor_map(coarse, fine), NotARefinement);
}

TEST_CASE("restriction after injection is the identity and restriction conserves integrals") {
  std::mt19937_64 rng(35);
  const HierarchicalTree root = builtin_channel_bump(16, 4, 0.05);
  const LeafMesh coarse(root);
  const LeafMesh fine(random_tree(root, 4, 0.3, rng));
  FreestreamSpec fs;
  const CellField u = perturbed_field(coarse, fs, 0.1);
  const CellField back = restrict_to_coarser(fine, project_to_finer(coarse, u, fine), coarse);
  for (int c = 0; c < coarse.num_cells(); ++c) CHECK((back[c] - u[c]).norm() < 1e-13);
  // Boundary refinement moves points onto the curve, so weights come from the fine areas.
  const CellField uf = perturbed_field(fine, fs, 0.1);
  const CellField uc = restrict_to_coarser(fine, uf, coarse);
  const auto map = ancestor_map(fine, coarse);
  std::vector<double> w(coarse.num_cells(), 0.0);
  for (int c = 0; c < fine.num_cells(); ++c) w[map[c]] += fine.area(c);
  State lhs = State::Zero(), rhs = integrate(fine, uf);
  for (int c = 0; c < coarse.num_cells(); ++c) lhs += w[c] * uc[c];
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
}

TEST_CASE("transfer between unrelated refinements of one root preserves constants") {
  std::mt19937_64 rng(36);
  const HierarchicalTree root = builtin_channel_bump(8, 4, 0.05);
  const LeafMesh a(random_tree(root, 3, 0.3, rng)), b(random_tree(root, 3, 0.3, rng));
  FreestreamSpec fs;
  const CellField u(a, fs.state());
  const CellField v = transfer_field(a, u, b);
  for (int c = 0; c < b.num_cells(); ++c) CHECK((v[c] - fs.state()).norm() < 1e-14);
}

TEST_CASE("cell data bound to another mesh is rejected") {
  const HierarchicalTree root = builtin_channel_bump(8, 4, 0.05);
  const LeafMesh a(root), b(root);
  const CellField u(a, State::Zero());
  CHECK_THROWS_AS(u.check(b), Error);
}
