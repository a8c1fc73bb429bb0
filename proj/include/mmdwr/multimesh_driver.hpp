#pragma once

// Multi-mesh goal-oriented adaptation: one mesh per target functional, dual
// problems solved together on a space refining all of them, per-target
// marking. Also the single-mesh baseline driven by a weighted sum of targets.

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mmdwr/adjoint_dwr.hpp"

namespace mmdwr {

/// Mesh on which z.R is summed before the absolute value is taken.
enum class IndicatorLocalization { Target, Union };
const char* to_string(IndicatorLocalization loc);
IndicatorLocalization indicator_localization_from_string(const std::string& s);

struct AdaptationConfig {
  double theta = 0.2;        // fraction of indicator mass marked per round
  int max_iterations = 5;    // refinement rounds after the initial per-target step
  double tol = 1e-6;         // on |composite_k - composite_{k-1}|
  NewtonConfig newton;
  DualOptions dual;
  std::size_t max_cells = 200000;
  /// Uniform refinements of the union mesh that form the dual space. Zero
  /// uses the union itself, which leaves no indicator where a target mesh
  /// coincides with the union.
  int dual_refinement = 1;
  /// Newton re-solve on the dual space; otherwise the union solution is only
  /// projected there.
  bool resolve_on_dual = true;
  /// Per-target single-mesh DWR step before the first union.
  bool initial_refine = true;
  IndicatorLocalization localization = IndicatorLocalization::Target;

  /// Throws ConfigError listing every out-of-range field.
  void validate() const;
};

enum class StopReason { Tolerance, MaxIterations, Budget, NewtonDiverged };
const char* to_string(StopReason reason);

struct IterationRecord {
  int k = 0;
  std::vector<std::size_t> target_cells;
  std::size_t union_cells = 0;
  std::size_t dual_cells = 0;            // 0 when no dual solve was done at k
  std::vector<double> target_values;     // F_i on its own mesh
  std::vector<double> union_values;      // F_i on the union mesh
  double composite = 0.0;                // composite of union_values
  std::vector<double> estimates;         // z_i^T R_i(I u_i), empty when not computed
  std::vector<double> weights;           // C_i
  double estimate_total = 0.0;
  std::vector<std::vector<NodeKey>> marked;
  std::vector<int> newton_iterations;    // per target, then union
  double seconds = 0.0;
};

struct AdaptationState {
  int iteration = 0;
  std::vector<HierarchicalTree> trees;
  std::vector<std::shared_ptr<const LeafMesh>> meshes;
  std::vector<CellField> solutions;
  std::optional<HierarchicalTree> union_tree;
  std::shared_ptr<const LeafMesh> union_mesh;
  CellField union_solution;
  std::shared_ptr<const LeafMesh> dual_mesh;  // of the last dual solve
  std::vector<DualField> duals;
  std::vector<IndicatorField> indicators;     // on the target meshes of the last round
  std::vector<IterationRecord> history;
  StopReason stop = StopReason::MaxIterations;
  std::string stop_message;
};

/// Cells carrying the top theta fraction of the indicator mass, largest
/// first, ties broken by lower cell id. Returned in ascending id order.
std::vector<int> mark_elements(const CellScalars& indicators, double theta);

/// One single-target DWR refinement of `tree` per target.
std::vector<HierarchicalTree> initial_per_target_refine(const HierarchicalTree& root,
                                                        const std::vector<TargetFunctional>& targets,
                                                        const FreestreamSpec& fs, const AdaptationConfig& cfg);

/// Multi-mesh adaptation loop. Throws BudgetExceeded when the initial trees
/// already exceed cfg.max_cells; a later overrun stops the loop instead.
AdaptationState adapt_loop(const HierarchicalTree& root, const CompositeFunctional& comp,
                           const FreestreamSpec& fs, const AdaptationConfig& cfg);

/// Single mesh, one dual per round with right-hand side sum_i w_i g_i, and
/// the same marking and stop test applied to sum_i w_i F_i.
AdaptationState single_mesh_baseline(const HierarchicalTree& root, const std::vector<TargetFunctional>& targets,
                                     const std::vector<double>& weights, const FreestreamSpec& fs,
                                     const AdaptationConfig& cfg);

/// Columns: k, cells_<name>..., union_cells, F_<name>..., composite,
/// estimate_<name>..., wallclock.
void write_adaptation_csv(std::ostream& os, const std::vector<TargetFunctional>& targets,
                          const std::vector<IterationRecord>& history);

}  // namespace mmdwr
