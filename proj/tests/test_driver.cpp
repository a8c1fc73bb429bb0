#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "mmdwr/errors.hpp"
#include "mmdwr/multimesh_driver.hpp"
#include "test_support.hpp"

using namespace mmdwr;
using namespace mmdwr::test;

namespace {

CellScalars scalars(const std::vector<double>& v) {
  CellScalars s;
  s.values = v;
  return s;
}

double mass(const std::vector<double>& v, const std::vector<int>& cells) {
  double m = 0.0;
  for (int c : cells) m += v[c];
  return m;
}

struct Channel {
  HierarchicalTree root = HierarchicalTree::from_root(channel_mesh(closed_channel(16)));
  FreestreamSpec fs;
  TargetFunctional lift = TargetFunctional::make(FunctionalKind::Lift, "bump", fs, 1.0, "lift");
  TargetFunctional drag = TargetFunctional::make(FunctionalKind::Drag, "bump", fs, 1.0, "drag");
  AdaptationConfig cfg;
  Channel() {
    cfg.theta = 0.5;
    cfg.max_iterations = 2;
    cfg.tol = 1e-14;
  }
};

}  // namespace

TEST_CASE("marking matches a brute-force minimal subset reaching theta") {
  std::mt19937_64 rng(71);
  std::exponential_distribution<double> ex(1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 8;
    std::vector<double> v(n);
    for (auto& x : v) x = ex(rng);
    const double total = mass(v, [&] {
      std::vector<int> all(n);
      for (int i = 0; i < n; ++i) all[i] = i;
      return all;
    }());
    const double theta = 0.1 + 0.8 * (trial % 9) / 8.0;
    const auto marked = mark_elements(scalars(v), theta);
    REQUIRE(std::is_sorted(marked.begin(), marked.end()));
    CHECK(mass(v, marked) >= theta * total * (1 - 1e-14));
    std::size_t best_size = n + 1;
    double best_mass = 0.0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> s;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) s.push_back(i);
      }
      const double m = mass(v, s);
      if (m < theta * total) continue;
      if (s.size() < best_size || (s.size() == best_size && m > best_mass)) {
        best_size = s.size();
        best_mass = m;
      }
    }
    CHECK(marked.size() == best_size);
    CHECK(mass(v, marked) == doctest::Approx(best_mass).epsilon(1e-14));
  }
}

TEST_CASE("marking is scale invariant and grows with theta") {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(200);
  for (auto& x : v) x = u(rng);
  std::vector<double> scaled = v;
  for (auto& x : scaled) x *= 1e-9;
  std::size_t prev = 0;
  for (double theta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto a = mark_elements(scalars(v), theta);
    CHECK(a == mark_elements(scalars(scaled), theta));
    CHECK(a.size() >= prev);
    prev = a.size();
  }
  CHECK(mark_elements(scalars(std::vector<double>(5, 0.0)), 0.5).empty());
  CHECK_THROWS_AS(mark_elements(scalars(v), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mark_elements(scalars(v), 1.0), std::invalid_argument);
}

TEST_CASE("ties are broken by lower cell id") {
  const auto m = mark_elements(scalars({1.0, 2.0, 2.0, 2.0, 1.0}), 0.3);
  CHECK(m == std::vector<int>{1, 2});
}

TEST_CASE("adaptation loop keeps the union a refinement of every target mesh") {
  Channel ch;
  const auto comp = CompositeFunctional::product({ch.lift, ch.drag}, {1.0, 1.0});
  const AdaptationState st = adapt_loop(ch.root, comp, ch.fs, ch.cfg);
  CHECK(st.stop == StopReason::MaxIterations);
  REQUIRE(st.history.size() == 3);
  for (const auto& r : st.history) {
    REQUIRE(r.target_cells.size() == 2);
    CHECK(r.union_cells >= std::max(r.target_cells[0], r.target_cells[1]));
    CHECK(r.composite == doctest::Approx(r.union_values[0] * r.union_values[1]).epsilon(1e-14));
  }
  for (std::size_t k = 1; k < st.history.size(); ++k) {
    for (int i = 0; i < 2; ++i) CHECK(st.history[k].target_cells[i] > st.history[k - 1].target_cells[i]);
  }
  for (const auto& m : st.meshes) CHECK_NOTHROW(ancestor_map(*st.union_mesh, *m));
  for (std::size_t i = 0; i < st.indicators.size(); ++i) {
    CHECK(st.indicators[i].eta.size() == st.history[st.history.size() - 2].target_cells[i]);
  }
}

TEST_CASE("with one target the union coincides with the target mesh") {
  Channel ch;
  const auto comp = CompositeFunctional::product({ch.drag}, {1.0});
  const AdaptationState st = adapt_loop(ch.root, comp, ch.fs, ch.cfg);
  for (const auto& r : st.history) {
    CHECK(r.union_cells == r.target_cells[0]);
    CHECK(r.union_values[0] == doctest::Approx(r.target_values[0]).epsilon(1e-10));
  }
}

TEST_CASE("cell budget: initial overrun throws, later overrun stops the loop") {
  Channel ch;
  const auto comp = CompositeFunctional::product({ch.lift, ch.drag}, {1.0, 1.0});
  ch.cfg.max_cells = 10;
  CHECK_THROWS_AS(adapt_loop(ch.root, comp, ch.fs, ch.cfg), BudgetExceeded);
  ch.cfg.max_cells = 240;
  ch.cfg.max_iterations = 10;
  const AdaptationState st = adapt_loop(ch.root, comp, ch.fs, ch.cfg);
  CHECK(st.stop == StopReason::Budget);
  for (const auto& r : st.history) CHECK(r.union_cells <= 240);
}

TEST_CASE("single-mesh baseline runs one mesh and rejects mismatched weights") {
  Channel ch;
  CHECK_THROWS_AS(single_mesh_baseline(ch.root, {ch.lift, ch.drag}, {1.0}, ch.fs, ch.cfg), std::invalid_argument);
  const AdaptationState st = single_mesh_baseline(ch.root, {ch.lift, ch.drag}, {1.0, 50.0}, ch.fs, ch.cfg);
  REQUIRE(st.history.size() == 3);
  for (const auto& r : st.history) {
    CHECK(r.target_cells[0] == r.union_cells);
    CHECK(r.composite == doctest::Approx(r.target_values[0] + 50.0 * r.target_values[1]).epsilon(1e-12));
  }
}

TEST_CASE("adaptation CSV has one named column per target quantity") {
  Channel ch;
  std::vector<IterationRecord> h(2);
  for (int k = 0; k < 2; ++k) {
    h[k].k = k;
    h[k].target_cells = {10u, 12u};
    h[k].union_cells = 14;
    h[k].target_values = {0.5, 0.01};
    h[k].composite = 0.005;
  }
  h[0].estimates = {1e-3, 2e-4};
  std::ostringstream os;
  write_adaptation_csv(os, {ch.lift, ch.drag}, h);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "k,cells_lift,cells_drag,union_cells,F_lift,F_drag,composite,estimate_lift,estimate_drag,wallclock");
  int rows = 0;
  while (std::getline(is, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
    ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("configuration validation lists every bad field") {
  AdaptationConfig cfg;
  cfg.theta = 1.5;
  cfg.max_iterations = -1;
  try {
    cfg.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.issues().size() == 2);
  }
}
