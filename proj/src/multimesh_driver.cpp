#include "mmdwr/multimesh_driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

namespace mmdwr {

const char* to_string(IndicatorLocalization loc) {
  return loc == IndicatorLocalization::Target ? "target" : "union";
}

IndicatorLocalization indicator_localization_from_string(const std::string& s) {
  if (s == "target") return IndicatorLocalization::Target;
  if (s == "union") return IndicatorLocalization::Union;
  throw std::invalid_argument("unknown indicator localization '" + s + "'");
}

void AdaptationConfig::validate() const {
  std::vector<ConfigIssue> issues;
  if (!(theta > 0.0 && theta < 1.0)) issues.push_back({0, "adaptation.theta must lie in (0, 1)"});
  if (!(tol > 0.0)) issues.push_back({0, "adaptation.tol must be positive"});
  if (max_iterations < 0) issues.push_back({0, "adaptation.max_iterations must be >= 0"});
  if (max_cells == 0) issues.push_back({0, "adaptation.max_cells must be positive"});
  if (dual_refinement < 0) issues.push_back({0, "adaptation.dual_refinement must be >= 0"});
  if (!(newton.newton_tol > 0.0)) issues.push_back({0, "solver.newton_tol must be positive"});
  if (newton.max_iterations < 1) issues.push_back({0, "solver.max_newton_iterations must be >= 1"});
  if (!(newton.alpha >= 0.0)) issues.push_back({0, "solver.alpha must be >= 0"});
  if (!(newton.linear_tol > 0.0 && newton.linear_tol < 1.0)) issues.push_back({0, "solver.linear_tol must lie in (0, 1)"});
  if (newton.max_halvings < 0) issues.push_back({0, "solver.max_halvings must be >= 0"});
  if (!(dual.tol > 0.0 && dual.tol < 1.0)) issues.push_back({0, "solver.dual_tol must lie in (0, 1)"});
  if (dual.max_cycles < 1) issues.push_back({0, "solver.dual_max_cycles must be >= 1"});
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Tolerance: return "tolerance";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::Budget: return "budget";
    case StopReason::NewtonDiverged: return "newton_diverged";
  }
  return "?";
}

std::vector<int> mark_elements(const CellScalars& indicators, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
  const int n = indicators.size();
  double total = 0.0;
  for (double v : indicators.values) total += v;
  if (!(total > 0.0)) return {};
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return indicators[a] > indicators[b]; });
  std::vector<int> marked;
  double cum = 0.0;
  for (int c : order) {
    if (cum >= theta) break;
    marked.push_back(c);
    cum += indicators[c] / total;
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Solved {
  std::shared_ptr<const LeafMesh> mesh;
  CellField u;
  int iterations = 0;
};

Solved solve_on(const HierarchicalTree& tree, const FreestreamSpec& fs, const NewtonConfig& cfg,
                const LeafMesh* prev_mesh, const CellField* prev_u) {
  Solved s;
  s.mesh = std::make_shared<const LeafMesh>(tree);
  const FlowDiscretization disc(*s.mesh, fs);
  const CellField u0 = prev_mesh ? transfer_field(*prev_mesh, *prev_u, *s.mesh) : disc.freestream_field();
  const GmgHierarchy hierarchy(*s.mesh);
  SteadyResult r = solve_steady(disc, hierarchy, u0, cfg);
  s.u = std::move(r.u);
  s.iterations = r.history.back().iteration;
  return s;
}

HierarchicalTree refined(const HierarchicalTree& tree, int times) {
  HierarchicalTree t = tree;
  for (int i = 0; i < times; ++i) t = t.refine_uniformly();
  return t;
}

// Primal state on the dual space: projection of a coarser solution,
// optionally followed by a Newton re-solve.
Solved dual_space_state(const HierarchicalTree& coarse_tree, const Solved& coarse, const FreestreamSpec& fs,
                        const AdaptationConfig& cfg) {
  Solved d;
  d.mesh = std::make_shared<const LeafMesh>(refined(coarse_tree, cfg.dual_refinement));
  d.u = project_to_finer(*coarse.mesh, coarse.u, *d.mesh);
  if (cfg.resolve_on_dual) {
    const FlowDiscretization disc(*d.mesh, fs);
    const GmgHierarchy hierarchy(*d.mesh);
    SteadyResult r = solve_steady(disc, hierarchy, d.u, cfg.newton);
    d.u = std::move(r.u);
    d.iterations = r.history.back().iteration;
  }
  return d;
}

std::vector<NodeKey> keys_of(const LeafMesh& mesh, const std::vector<int>& cells) {
  std::vector<NodeKey> keys;
  keys.reserve(cells.size());
  for (int c : cells) keys.push_back(mesh.key(c));
  return keys;
}

std::vector<double> values_on(const LeafMesh& mesh, const CellField& u, const std::vector<TargetFunctional>& targets) {
  std::vector<double> v;
  for (const auto& t : targets) v.push_back(evaluate(mesh, u, t));
  return v;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

std::vector<HierarchicalTree> initial_per_target_refine(const HierarchicalTree& root,
                                                        const std::vector<TargetFunctional>& targets,
                                                        const FreestreamSpec& fs, const AdaptationConfig& cfg) {
  cfg.validate();
  if (!cfg.initial_refine) return std::vector<HierarchicalTree>(targets.size(), root);
  const Solved coarse = solve_on(root, fs, cfg.newton, nullptr, nullptr);
  const Solved fine = dual_space_state(root, coarse, fs, cfg);
  const auto duals = solve_duals(*fine.mesh, fine.u, fs, targets, cfg.dual);
  std::vector<HierarchicalTree> trees;
  for (const auto& d : duals) {
    const IndicatorField ind = dwr_indicator(*coarse.mesh, *fine.mesh, d.z, coarse.u, fs, coarse.mesh.get());
    const auto keys = keys_of(*coarse.mesh, mark_elements(ind.eta, cfg.theta));
    trees.push_back(root.refine_cells(keys));
  }
  return trees;
}

AdaptationState adapt_loop(const HierarchicalTree& root, const CompositeFunctional& comp, const FreestreamSpec& fs,
                           const AdaptationConfig& cfg) {
  cfg.validate();
  comp.validate();
  fs.validate();
  const auto& targets = comp.components;
  const std::size_t n = targets.size();
  AdaptationState st;
  auto t_start = Clock::now();

  try {
    st.trees = initial_per_target_refine(root, targets, fs, cfg);
  } catch (const NewtonDiverged& e) {
    st.stop = StopReason::NewtonDiverged;
    st.stop_message = e.what();
    return st;
  }
  for (const auto& t : st.trees) {
    if (t.num_leaves() > cfg.max_cells) throw BudgetExceeded("initial per-target mesh exceeds the cell budget");
  }

  // Solves every per-target mesh and the union, and opens record k.
  auto solve_round = [&](int k) {
    IterationRecord rec;
    rec.k = k;
    std::vector<std::shared_ptr<const LeafMesh>> meshes(n);
    std::vector<CellField> sols(n);
    for (std::size_t i = 0; i < n; ++i) {
      const bool warm = !st.meshes.empty();
      Solved s = solve_on(st.trees[i], fs, cfg.newton, warm ? st.meshes[i].get() : nullptr,
                          warm ? &st.solutions[i] : nullptr);
      rec.target_cells.push_back(static_cast<std::size_t>(s.mesh->num_cells()));
      rec.target_values.push_back(evaluate(*s.mesh, s.u, targets[i]));
      rec.newton_iterations.push_back(s.iterations);
      meshes[i] = std::move(s.mesh);
      sols[i] = std::move(s.u);
    }
    st.union_tree = union_trees(std::span<const HierarchicalTree>(st.trees));
    const bool warm = static_cast<bool>(st.union_mesh);
    Solved u = solve_on(*st.union_tree, fs, cfg.newton, warm ? st.union_mesh.get() : nullptr,
                        warm ? &st.union_solution : nullptr);
    for (const auto& m : meshes) ancestor_map(*u.mesh, *m);  // union dominance, throws NotARefinement
    rec.union_cells = static_cast<std::size_t>(u.mesh->num_cells());
    rec.union_values = values_on(*u.mesh, u.u, targets);
    rec.composite = composite_evaluate(rec.union_values, comp);
    rec.newton_iterations.push_back(u.iterations);
    st.meshes = std::move(meshes);
    st.solutions = std::move(sols);
    st.union_mesh = std::move(u.mesh);
    st.union_solution = std::move(u.u);
    st.iteration = k;
    rec.seconds = seconds_since(t_start);
    st.history.push_back(std::move(rec));
  };

  int k = 0;
  try {
    solve_round(0);
    while (true) {
      if (k >= cfg.max_iterations) {
        st.stop = StopReason::MaxIterations;
        break;
      }
      IterationRecord& rec = st.history.back();
      Solved base{st.union_mesh, st.union_solution, 0};
      const Solved dual_state = dual_space_state(*st.union_tree, base, fs, cfg);
      st.dual_mesh = dual_state.mesh;
      st.duals = solve_duals(*dual_state.mesh, dual_state.u, fs, targets, cfg.dual);
      rec.dual_cells = static_cast<std::size_t>(dual_state.mesh->num_cells());
      st.indicators.clear();
      std::vector<HierarchicalTree> next;
      for (std::size_t i = 0; i < n; ++i) {
        IndicatorField ind = dwr_indicator(*st.meshes[i], *dual_state.mesh, st.duals[i].z, st.solutions[i], fs,
                                           cfg.localization == IndicatorLocalization::Union
                                               ? st.union_mesh.get()
                                               : st.meshes[i].get());
        rec.estimates.push_back(ind.signed_sum);
        const auto keys = keys_of(*st.meshes[i], mark_elements(ind.eta, cfg.theta));
        next.push_back(st.trees[i].refine_cells(keys));
        rec.marked.push_back(keys);
        st.indicators.push_back(std::move(ind));
      }
      const ErrorEstimate est = error_estimate(rec.estimates, rec.target_values, comp);
      rec.weights = est.weights;
      rec.estimate_total = est.total;
      rec.seconds = seconds_since(t_start);
      bool over = false;
      for (const auto& t : next) over = over || t.num_leaves() > cfg.max_cells;
      if (over || union_trees(std::span<const HierarchicalTree>(next)).num_leaves() > cfg.max_cells) {
        st.stop = StopReason::Budget;
        st.stop_message = "next refinement exceeds the cell budget";
        break;
      }
      st.trees = std::move(next);
      ++k;
      solve_round(k);
      const auto& h = st.history;
      // An unchanged union reproduces the composite exactly; that is not convergence.
      const bool union_changed = h[h.size() - 1].union_cells != h[h.size() - 2].union_cells;
      if (union_changed && std::abs(h[h.size() - 1].composite - h[h.size() - 2].composite) < cfg.tol) {
        st.stop = StopReason::Tolerance;
        break;
      }
    }
  } catch (const NewtonDiverged& e) {
    st.stop = StopReason::NewtonDiverged;
    st.stop_message = e.what();
  }
  return st;
}

AdaptationState single_mesh_baseline(const HierarchicalTree& root, const std::vector<TargetFunctional>& targets,
                                     const std::vector<double>& weights, const FreestreamSpec& fs,
                                     const AdaptationConfig& cfg) {
  cfg.validate();
  fs.validate();
  if (weights.size() != targets.size()) throw std::invalid_argument("one weight per target expected");
  const CompositeFunctional comp = CompositeFunctional::linear(targets, weights);
  const std::size_t n = targets.size();
  if (root.num_leaves() > cfg.max_cells) throw BudgetExceeded("initial mesh exceeds the cell budget");
  AdaptationState st;
  st.trees = {root};
  auto t_start = Clock::now();

  auto solve_round = [&](int k) {
    IterationRecord rec;
    rec.k = k;
    const bool warm = !st.meshes.empty();
    Solved s = solve_on(st.trees[0], fs, cfg.newton, warm ? st.meshes[0].get() : nullptr,
                        warm ? &st.solutions[0] : nullptr);
    rec.target_values = values_on(*s.mesh, s.u, targets);
    rec.union_values = rec.target_values;
    rec.target_cells.assign(n, static_cast<std::size_t>(s.mesh->num_cells()));
    rec.union_cells = static_cast<std::size_t>(s.mesh->num_cells());
    rec.composite = composite_evaluate(rec.target_values, comp);
    rec.newton_iterations = {s.iterations};
    st.union_tree = st.trees[0];
    st.union_mesh = s.mesh;
    st.union_solution = s.u;
    st.meshes = {std::move(s.mesh)};
    st.solutions = {std::move(s.u)};
    st.iteration = k;
    rec.seconds = seconds_since(t_start);
    st.history.push_back(std::move(rec));
  };

  int k = 0;
  try {
    solve_round(0);
    while (true) {
      if (k >= cfg.max_iterations) {
        st.stop = StopReason::MaxIterations;
        break;
      }
      IterationRecord& rec = st.history.back();
      Solved base{st.meshes[0], st.solutions[0], 0};
      const Solved dual_state = dual_space_state(st.trees[0], base, fs, cfg);
      st.dual_mesh = dual_state.mesh;
      CellField combined(*dual_state.mesh, State::Zero());
      for (std::size_t i = 0; i < n; ++i) {
        const CellField g = gradient(*dual_state.mesh, dual_state.u, targets[i]);
        for (int c = 0; c < combined.size(); ++c) combined[c] += weights[i] * g[c];
      }
      std::vector<double> rel;
      auto zs = solve_dual_systems(*dual_state.mesh, dual_state.u, fs, {combined}, cfg.dual, &rel);
      TargetFunctional label;
      label.name = "combined";
      st.duals = {DualField{label, std::move(zs.front()), rel.front()}};
      IndicatorField ind =
          dwr_indicator(*st.meshes[0], *dual_state.mesh, st.duals[0].z, st.solutions[0], fs, st.meshes[0].get());
      rec.dual_cells = static_cast<std::size_t>(dual_state.mesh->num_cells());
      rec.estimates = {ind.signed_sum};
      rec.weights = {1.0};
      rec.estimate_total = ind.signed_sum;
      const auto keys = keys_of(*st.meshes[0], mark_elements(ind.eta, cfg.theta));
      rec.marked = {keys};
      st.indicators = {std::move(ind)};
      rec.seconds = seconds_since(t_start);
      HierarchicalTree next = st.trees[0].refine_cells(keys);
      if (next.num_leaves() > cfg.max_cells) {
        st.stop = StopReason::Budget;
        st.stop_message = "next refinement exceeds the cell budget";
        break;
      }
      st.trees = {std::move(next)};
      ++k;
      solve_round(k);
      const auto& h = st.history;
      if (std::abs(h[h.size() - 1].composite - h[h.size() - 2].composite) < cfg.tol) {
        st.stop = StopReason::Tolerance;
        break;
      }
    }
  } catch (const NewtonDiverged& e) {
    st.stop = StopReason::NewtonDiverged;
    st.stop_message = e.what();
  }
  return st;
}

void write_adaptation_csv(std::ostream& os, const std::vector<TargetFunctional>& targets,
                          const std::vector<IterationRecord>& history) {
  os << "k";
  for (const auto& t : targets) os << ",cells_" << t.name;
  os << ",union_cells";
  for (const auto& t : targets) os << ",F_" << t.name;
  os << ",composite";
  for (const auto& t : targets) os << ",estimate_" << t.name;
  os << ",wallclock\n";
  os << std::setprecision(17);
  for (const auto& r : history) {
    os << r.k;
    for (std::size_t i = 0; i < targets.size(); ++i) os << "," << (i < r.target_cells.size() ? r.target_cells[i] : 0);
    os << "," << r.union_cells;
    for (std::size_t i = 0; i < targets.size(); ++i) os << "," << (i < r.target_values.size() ? r.target_values[i] : 0.0);
    os << "," << r.composite;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      os << ",";
      if (i < r.estimates.size()) os << r.estimates[i];
    }
    os << "," << r.seconds << "\n";
  }
}

}  // namespace mmdwr
