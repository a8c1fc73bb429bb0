#include "mmdwr/adjoint_dwr.hpp"

#include <cmath>

namespace mmdwr {

std::vector<CellField> solve_dual_systems(const LeafMesh& mesh, const CellField& u, const FreestreamSpec& fs,
                                          const std::vector<CellField>& gradients, const DualOptions& opts,
                                          std::vector<double>* relative_residuals) {
  const FlowDiscretization disc(mesh, fs);
  const double r_l1 = opts.alpha != 0.0 ? norm_l1(disc.residual(u).values) : 0.0;
  const SparseJacobian jac = disc.jacobian(u, opts.alpha, r_l1, opts.linearization, opts.scaling);
  std::vector<BlockVector> rhs;
  rhs.reserve(gradients.size());
  for (const auto& g : gradients) {
    g.check(mesh);
    BlockVector b(g.values.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = -g.values[i];
    rhs.push_back(std::move(b));
  }
  const GmgHierarchy hierarchy(mesh);
  GmgOptions gopt;
  gopt.tol = opts.tol;
  gopt.max_cycles = opts.max_cycles;
  gopt.transpose = true;
  const GmgResult res = gmg_solve(jac.matrix, rhs, hierarchy, gopt);
  if (relative_residuals) *relative_residuals = res.report.relative_residuals;
  std::vector<CellField> out;
  out.reserve(gradients.size());
  for (auto& sol : res.solutions) {
    CellField z;
    z.mesh_id = mesh.id();
    z.values = sol;
    out.push_back(std::move(z));
  }
  return out;
}

std::vector<DualField> solve_duals(const LeafMesh& mesh, const CellField& u, const FreestreamSpec& fs,
                                   const std::vector<TargetFunctional>& targets, const DualOptions& opts) {
  std::vector<CellField> grads;
  grads.reserve(targets.size());
  for (const auto& t : targets) grads.push_back(gradient(mesh, u, t));
  std::vector<double> rel;
  auto zs = solve_dual_systems(mesh, u, fs, grads, opts, &rel);
  std::vector<DualField> out;
  for (std::size_t i = 0; i < targets.size(); ++i) out.push_back({targets[i], std::move(zs[i]), rel[i]});
  return out;
}

IndicatorField dwr_indicator(const LeafMesh& target_mesh, const LeafMesh& dual_mesh, const CellField& z,
                             const CellField& u_on_target, const FreestreamSpec& fs, const LeafMesh* localization) {
  z.check(dual_mesh);
  const LeafMesh& loc = localization ? *localization : dual_mesh;
  const auto to_target = ancestor_map(loc, target_mesh);
  const auto to_loc = localization ? ancestor_map(dual_mesh, loc) : std::vector<int>{};
  const CellField u_dual = project_to_finer(target_mesh, u_on_target, dual_mesh);
  const ResidualVector r = assemble_residual(dual_mesh, u_dual, fs);
  std::vector<double> local(static_cast<std::size_t>(loc.num_cells()), 0.0);
  IndicatorField out{CellScalars(target_mesh, 0.0), 0.0};
  for (int c = 0; c < dual_mesh.num_cells(); ++c) {
    const double s = z[c].dot(r[c]);
    out.signed_sum += s;
    local[localization ? to_loc[c] : c] += s;
  }
  for (int l = 0; l < loc.num_cells(); ++l) out.eta[to_target[l]] += std::abs(local[l]);
  return out;
}

ErrorEstimate error_estimate(const std::vector<double>& residual_terms, const std::vector<double>& values,
                             const CompositeFunctional& comp) {
  ErrorEstimate e;
  e.raw = residual_terms;
  e.weights = composite_weights(values, comp);
  if (residual_terms.size() != e.weights.size()) throw std::invalid_argument("one residual term per component expected");
  for (std::size_t i = 0; i < residual_terms.size(); ++i) e.total += e.weights[i] * residual_terms[i];
  return e;
}

double galerkin_orthogonality_check(const LeafMesh& mesh, const CellField& u, const FreestreamSpec& fs,
                                    const TargetFunctional& target, const DualOptions& opts) {
  const auto duals = solve_duals(mesh, u, fs, {target}, opts);
  const ResidualVector r = assemble_residual(mesh, u, fs);
  return std::abs(dot(duals.front().z.values, r.values));
}

}  // namespace mmdwr
