#pragma once

// Discrete dual problems and dual-weighted residual indicators.

#include <vector>

#include "mmdwr/functionals.hpp"
#include "mmdwr/gmg.hpp"
#include "mmdwr/newton.hpp"

namespace mmdwr {

struct DualField {
  TargetFunctional target;
  CellField z;
  /// ||J^T z + g|| / ||g|| reached by the solver (0 for a zero gradient).
  double relative_residual = 0.0;
};

struct DualOptions {
  double tol = 1e-8;
  int max_cycles = 400;
  double alpha = 2.0;  // same regularization form as the primal Newton step
  RegularizationScaling scaling = RegularizationScaling::CellArea;
  Linearization linearization = Linearization::Exact;
};

/// Solves J(u)^T z_i = -g_i for every target with one multigrid call sharing
/// the level operators. Throws NoConvergence carrying one residual per target.
std::vector<DualField> solve_duals(const LeafMesh& mesh, const CellField& u, const FreestreamSpec& fs,
                                   const std::vector<TargetFunctional>& targets, const DualOptions& opts = {});
/// Same, for arbitrary right-hand-side gradients (e.g. a weighted sum).
std::vector<CellField> solve_dual_systems(const LeafMesh& mesh, const CellField& u, const FreestreamSpec& fs,
                                          const std::vector<CellField>& gradients, const DualOptions& opts,
                                          std::vector<double>* relative_residuals = nullptr);

struct IndicatorField {
  CellScalars eta;  // on the target mesh, nonnegative
  double signed_sum = 0.0;  // z^T R(I u) over the dual mesh
};

/// Projects u_on_target onto the dual mesh and assembles the residual there.
/// The products z_c . R_c are summed over each cell of `localization` (a mesh
/// between the target and the dual mesh, by default the target mesh in the
/// adaptation loop; the dual mesh itself when null), and the absolute values
/// of these sums are accumulated onto the target cells. Throws NotARefinement when the
/// meshes are not nested.
IndicatorField dwr_indicator(const LeafMesh& target_mesh, const LeafMesh& dual_mesh, const CellField& z,
                             const CellField& u_on_target, const FreestreamSpec& fs,
                             const LeafMesh* localization = nullptr);

struct ErrorEstimate {
  double total = 0.0;             // sum_i C_i z_i^T R_i
  std::vector<double> raw;        // z_i^T R_i
  std::vector<double> weights;    // C_i
};

ErrorEstimate error_estimate(const std::vector<double>& residual_terms, const std::vector<double>& values,
                             const CompositeFunctional& comp);

/// |z^T R(u)| with the dual solved on the mesh of u itself.
double galerkin_orthogonality_check(const LeafMesh& mesh, const CellField& u, const FreestreamSpec& fs,
                                    const TargetFunctional& target, const DualOptions& opts = {});

}  // namespace mmdwr
