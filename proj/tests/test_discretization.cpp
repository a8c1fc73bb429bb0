#include <doctest.h>

#include "mmdwr/discretization.hpp"
#include "mmdwr/gmg.hpp"
#include "mmdwr/newton.hpp"
#include "test_support.hpp"

using namespace mmdwr;
using namespace mmdwr::test;

namespace {

HierarchicalTree farfield_box() {
  RectangleOptions o;
  o.nx = 6;
  o.ny = 4;
  o.x0 = -1.5;
  o.x1 = 1.5;
  o.y0 = -1.0;
  o.y1 = 1.0;
  return HierarchicalTree::from_root(rectangle_mesh(o));
}

double linf(const ResidualVector& r) {
  double m = 0.0;
  for (const auto& s : r.values) m = std::max(m, s.cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

TEST_CASE("freestream is preserved on random hanging-node trees with far-field boundaries") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const LeafMesh m(random_tree(farfield_box(), 4, 0.35, rng));
    FreestreamSpec fs;
    fs.mach = 0.3 + 0.3 * trial;
    fs.attack_angle = 0.1 * trial - 0.2;
    const FlowDiscretization disc(m, fs);
    CHECK(linf(disc.residual(disc.freestream_field())) < 1e-12);
  }
}

TEST_CASE("residual sums to the boundary flux: interior fluxes cancel") {
  std::mt19937_64 rng(42);
  const LeafMesh m(random_tree(builtin_channel_bump(16, 4, 0.05), 3, 0.3, rng));
  FreestreamSpec fs;
  const FlowDiscretization disc(m, fs);
  const CellField u = perturbed_field(m, fs, 0.1);
  const ResidualVector r = disc.residual(u);
  State total = State::Zero(), boundary = State::Zero();
  for (const auto& s : r.values) total += s;
  for (const auto& f : m.faces()) {
    if (f.right >= 0) continue;
    boundary += f.length * lax_friedrichs_flux(u[f.left], disc.ghost(u[f.left], f), f.normal, fs.gamma);
  }
  CHECK((total - boundary).norm() < 1e-12 * std::max(1.0, boundary.norm()));
}

TEST_CASE("exact Jacobian action matches central differences of the residual") {
  std::mt19937_64 rng(43);
  const LeafMesh m(random_tree(builtin_channel_bump(16, 4, 0.05), 3, 0.3, rng));
  FreestreamSpec fs;
  fs.mach = 0.6;
  const FlowDiscretization disc(m, fs);
  const CellField u = perturbed_field(m, fs, 0.15);
  const SparseJacobian J = disc.jacobian(u, 0.0, Linearization::Exact);
  std::normal_distribution<double> nd;
  BlockVector v(m.num_cells());
  for (auto& s : v) s = State(nd(rng), nd(rng), nd(rng), nd(rng)) * 0.1;
  BlockVector Jv;
  J.matrix.multiply(v, Jv);
  const double h = 1e-6;
  CellField up = u, um = u;
  for (int c = 0; c < m.num_cells(); ++c) {
    up[c] += h * v[c];
    um[c] -= h * v[c];
  }
  const ResidualVector rp = disc.residual(up), rm = disc.residual(um);
  double err = 0.0, scale = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    err = std::max(err, ((rp[c] - rm[c]) / (2 * h) - Jv[c]).norm());
    scale = std::max(scale, Jv[c].norm());
  }
  CHECK(err < 1e-6 * scale);
}

TEST_CASE("regularization adds alpha * ||R||_1, optionally times the cell area, to the diagonal") {
  const LeafMesh m(builtin_channel_bump(8, 4, 0.05));
  FreestreamSpec fs;
  const FlowDiscretization disc(m, fs);
  const CellField u = perturbed_field(m, fs, 0.1);
  const SparseJacobian J0 = disc.jacobian(u, 0.0, 0.5, Linearization::FrozenWaveSpeed);
  const SparseJacobian Ji = disc.jacobian(u, 2.0, 0.5, Linearization::FrozenWaveSpeed);
  const SparseJacobian Ja =
      disc.jacobian(u, 2.0, 0.5, Linearization::FrozenWaveSpeed, RegularizationScaling::CellArea);
  CHECK(Ji.regularization == doctest::Approx(1.0));
  for (int c = 0; c < m.num_cells(); ++c) {
    const int d = J0.matrix.diagonal(c);
    CHECK((Ji.matrix.block(d) - J0.matrix.block(d) - Block4::Identity()).norm() < 1e-14);
    CHECK((Ja.matrix.block(d) - J0.matrix.block(d) - m.area(c) * Block4::Identity()).norm() < 1e-14);
  }
}

TEST_CASE("multigrid agrees with a direct sparse solve, plain and transposed") {
  std::mt19937_64 rng(44);
  const LeafMesh m(random_tree(builtin_channel_bump(16, 4, 0.05), 3, 0.3, rng));
  FreestreamSpec fs;
  const FlowDiscretization disc(m, fs);
  const CellField u = perturbed_field(m, fs, 0.05);
  const SparseJacobian J = disc.jacobian(u, 2.0, 1.0, Linearization::FrozenWaveSpeed, RegularizationScaling::CellArea);
  const GmgHierarchy hierarchy(m);
  CHECK(hierarchy.levels() >= 3);
  std::normal_distribution<double> nd;
  BlockVector b(m.num_cells());
  for (auto& s : b) s = State(nd(rng), nd(rng), nd(rng), nd(rng));
  Eigen::VectorXd bs(4 * m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c) bs.segment<4>(4 * c) = b[c];
  for (bool transpose : {false, true}) {
    GmgOptions opts;
    opts.tol = 1e-10;
    opts.transpose = transpose;
    const std::vector<BlockVector> rhs{b};
    const GmgResult res = gmg_solve(J.matrix, rhs, hierarchy, opts);
    CHECK(res.report.converged);
    Eigen::SparseMatrix<double> A = J.matrix.to_scalar();
    if (transpose) A = Eigen::SparseMatrix<double>(A.transpose());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
    const Eigen::VectorXd x = lu.solve(bs);
    double err = 0.0;
    for (int c = 0; c < m.num_cells(); ++c) err = std::max(err, (res.solutions[0][c] - x.segment<4>(4 * c)).norm());
    CHECK(err < 1e-7 * x.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("multigrid hierarchy aggregates by tree generation") {
  const HierarchicalTree t = builtin_channel_bump(8, 4, 0.05).refine_uniformly().refine_uniformly();
  const GmgHierarchy h{LeafMesh(t)};
  REQUIRE(h.levels() == 3);
  CHECK(h.cells(0) == 16 * 64);
  CHECK(h.cells(1) == 4 * 64);
  CHECK(h.cells(2) == 64);
  for (int l = 0; l + 1 < h.levels(); ++l) {
    std::vector<int> children(h.cells(l + 1), 0);
    for (int a : h.aggregate(l)) ++children[a];
    for (int n : children) CHECK(n == 4);
  }
}

TEST_CASE("Newton exits at iteration 0 on freestream input") {
  std::mt19937_64 rng(45);
  const LeafMesh m(random_tree(farfield_box(), 4, 0.3, rng));
  FreestreamSpec fs;
  fs.mach = 0.7;
  const SteadyResult r = solve_steady(m, FlowDiscretization(m, fs).freestream_field(), fs, NewtonConfig{});
  CHECK(r.converged);
  REQUIRE(r.history.size() == 1);
  CHECK(r.history[0].iteration == 0);
}

TEST_CASE("Newton converges on the subsonic bump and ends at a discrete steady state") {
  const LeafMesh m(builtin_channel_bump(32, 8, 0.05));
  FreestreamSpec fs;
  const FlowDiscretization disc(m, fs);
  const SteadyResult r = solve_steady(m, disc.freestream_field(), fs, NewtonConfig{});
  CHECK(r.converged);
  CHECK(r.history.size() < 20);
  CHECK(r.history.back().residual_l1 < 1e-10);
  double l1 = 0.0;
  for (const auto& s : disc.residual(r.u).values) l1 += s.cwiseAbs().sum();
  CHECK(l1 < 1e-10);
  // Net mass flux through the far field vanishes; the inlet carries a real flux.
  double net = 0.0, inlet = 0.0;
  for (const auto& f : m.faces()) {
    if (f.right >= 0 || m.marker_kind(f.marker) != BoundaryKind::FarField) continue;
    const double flux = f.length * lax_friedrichs_flux(r.u[f.left], disc.ghost(r.u[f.left], f), f.normal, fs.gamma)[0];
    net += flux;
    if (f.midpoint.x() < -1.99) inlet += flux;
  }
  CHECK(inlet < -0.1);
  CHECK(std::abs(net) < 1e-9);
}

TEST_CASE("Newton stops at the iteration cap without throwing") {
  const LeafMesh m(builtin_channel_bump(16, 4, 0.1));
  FreestreamSpec fs;
  NewtonConfig cfg;
  cfg.max_iterations = 1;
  const SteadyResult r = solve_steady(m, FlowDiscretization(m, fs).freestream_field(), fs, cfg);
  CHECK_FALSE(r.converged);
}
