#pragma once

// Regularized Newton iteration for the steady residual, with each linear
// system solved by geometric multigrid.

#include <iosfwd>
#include <vector>

#include "mmdwr/discretization.hpp"
#include "mmdwr/gmg.hpp"

namespace mmdwr {

struct NewtonConfig {
  double newton_tol = 1e-10;  // on ||R||_1
  int max_iterations = 200;
  double alpha = 2.0;         // regularization coefficient
  double linear_tol = 1e-6;   // relative multigrid tolerance per Newton step
  int max_cycles = 200;
  int max_halvings = 8;
  double armijo = 1e-4;
  Linearization linearization = Linearization::FrozenWaveSpeed;
  RegularizationScaling scaling = RegularizationScaling::CellArea;
};

struct NewtonStep {
  int iteration = 0;
  double residual_l1 = 0.0;
  double damping = 0.0;  // step length taken to reach this iterate
  int linear_cycles = 0;
};

struct SteadyResult {
  CellField u;
  std::vector<NewtonStep> history;
  bool converged = false;
};

/// Newton loop from u0 until ||R||_1 < cfg.newton_tol. Throws NewtonDiverged
/// when the residual grows tenfold over five consecutive accepted steps.
/// Returns with converged == false when the iteration cap is reached.
SteadyResult solve_steady(const LeafMesh& mesh, const CellField& u0, const FreestreamSpec& fs,
                          const NewtonConfig& cfg);
SteadyResult solve_steady(const FlowDiscretization& disc, const GmgHierarchy& hierarchy,
                          const CellField& u0, const NewtonConfig& cfg);

/// CSV rows "iteration,residual_l1,damping".
void write_history_csv(std::ostream& os, const std::vector<NewtonStep>& history);

}  // namespace mmdwr
